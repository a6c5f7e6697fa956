"""Exact module theory over commutative semirings."""

__version__ = "0.1.0"
