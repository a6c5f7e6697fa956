"""Concrete commutative semirings with exact elements.

Every instance is an immutable value object. Elements are plain Python values
in a canonical normal form:

==================  ==========================================
kind                element payload
==================  ==========================================
naturals            ``int >= 0``
integers            ``int``
booleans            ``0`` or ``1``
nonneg_rationals    ``Fraction >= 0``
finite_quotient     ``int`` in ``0..k`` (saturating at ``k``)
localization        ``Fraction`` whose denominator divides a power of ``a``
monotone_pair       ``(Fraction, Fraction)`` with ``0 <= b <= c``
product             ``tuple`` of component elements
==================  ==========================================

Structural predicates (negative-free, cancellative, ...) are per-kind
metadata; ``tests/test_semirings.py`` cross-validates them by sampling.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Any, Iterable, Iterator, Optional

__all__ = [
    "SemiringError",
    "Semiring",
    "Naturals",
    "Integers",
    "Booleans",
    "NonnegRationals",
    "FiniteQuotient",
    "Localization",
    "MonotonePair",
    "Product",
    "NATURALS",
    "INTEGERS",
    "BOOLEANS",
    "NONNEG_RATIONALS",
    "MONOTONE_PAIR",
    "add",
    "mul",
    "is_unit",
    "unit_inverse",
    "is_negative_free",
    "is_additively_cancellative",
    "is_universally_negative_free",
    "universally_negative_free_witness",
    "generates_unit_ideal",
    "localize",
    "quotient_map_to_booleans",
    "semiring_from_json",
]


class SemiringError(ValueError):
    """Invalid element for an instance, or an unsupported operation."""


def _as_fraction(x: Any) -> Fraction:
    if isinstance(x, bool):
        raise SemiringError(f"expected a rational, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError as exc:
            raise SemiringError(f"not a rational: {x!r}") from exc
    raise SemiringError(f"expected a rational, got {x!r}")


def _as_int(x: Any) -> int:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError as exc:
            raise SemiringError(f"not an integer: {x!r}") from exc
    raise SemiringError(f"expected an integer, got {x!r}")


def _fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class Semiring:
    """Base class. Subclasses are frozen dataclasses."""

    kind: str = ""
    # per-kind structural metadata
    negative_free: bool = True
    additively_cancellative: bool = True
    no_zero_divisors: bool = True
    local: bool = True
    finite: bool = False

    # -- element handling -------------------------------------------------
    def normalize(self, x: Any) -> Any:
        """Return the canonical form of ``x`` or raise :class:`SemiringError`."""
        raise NotImplementedError

    def contains(self, x: Any) -> bool:
        try:
            self.normalize(x)
        except SemiringError:
            return False
        return True

    def zero(self) -> Any:
        raise NotImplementedError

    def one(self) -> Any:
        raise NotImplementedError

    def _add(self, x, y):
        raise NotImplementedError

    def _mul(self, x, y):
        raise NotImplementedError

    def add(self, x, y):
        return self._add(self.normalize(x), self.normalize(y))

    def mul(self, x, y):
        return self._mul(self.normalize(x), self.normalize(y))

    def eq(self, x, y) -> bool:
        return self.normalize(x) == self.normalize(y)

    def is_zero(self, x) -> bool:
        return self.normalize(x) == self.zero()

    def sum(self, xs: Iterable) -> Any:
        acc = self.zero()
        for x in xs:
            acc = self._add(acc, self.normalize(x))
        return acc

    def neg(self, x):
        """Additive inverse when one exists."""
        raise SemiringError(f"{self} has no additive inverses")

    def power(self, x, n: int):
        acc = self.one()
        x = self.normalize(x)
        for _ in range(n):
            acc = self._mul(acc, x)
        return acc

    def unit_inverse(self, x) -> Optional[Any]:
        raise NotImplementedError

    def elements(self) -> Iterator:
        raise SemiringError(f"{self} is infinite")

    def size(self) -> Optional[int]:
        return None

    def random_element(self, rng: random.Random, bound: int = 5) -> Any:
        raise NotImplementedError

    def universal_witness(self) -> Optional[Any]:
        """An element r with r + 1 = r, if one exists."""
        return None

    def solve_scalar(self, coeffs: list, rhs: list) -> Optional[Any]:
        """Find x with ``x * coeffs[t] == rhs[t]`` for all t, or ``None``."""
        coeffs = [self.normalize(c) for c in coeffs]
        rhs = [self.normalize(r) for r in rhs]
        if self.finite:
            for x in self.elements():
                if all(self._mul(x, c) == r for c, r in zip(coeffs, rhs)):
                    return x
            return None
        return self._solve_domain(coeffs, rhs)

    def _solve_domain(self, coeffs, rhs):
        # multiplication is cancellative on nonzero elements of a subsemiring of Q
        for c, r in zip(coeffs, rhs):
            if c != self.zero():
                cand = Fraction(r) / Fraction(c)
                if not self.contains(cand):
                    return None
                cand = self.normalize(cand)
                if all(self._mul(cand, c2) == r2 for c2, r2 in zip(coeffs, rhs)):
                    return cand
                return None
        return self.zero() if all(r == self.zero() for r in rhs) else None

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"kind": self.kind, "params": {}}

    def element_to_json(self, x) -> Any:
        return str(self.normalize(x))

    def element_from_json(self, v) -> Any:
        return self.normalize(v)

    def format(self, x) -> str:
        v = self.element_to_json(x)
        return v if isinstance(v, str) else "(" + ", ".join(map(str, v)) + ")"


@dataclass(frozen=True)
class Naturals(Semiring):
    kind = "naturals"
    additively_cancellative = True

    def __str__(self):
        return "N"

    def normalize(self, x):
        x = _as_int(x)
        if x < 0:
            raise SemiringError(f"{x} is not a natural number")
        return x

    def zero(self):
        return 0

    def one(self):
        return 1

    def _add(self, x, y):
        return x + y

    def _mul(self, x, y):
        return x * y

    def unit_inverse(self, x):
        return 1 if self.normalize(x) == 1 else None

    def random_element(self, rng, bound=5):
        return rng.randint(0, bound)


@dataclass(frozen=True)
class Integers(Semiring):
    kind = "integers"
    negative_free = False
    local = False

    def __str__(self):
        return "Z"

    def normalize(self, x):
        return _as_int(x)

    def zero(self):
        return 0

    def one(self):
        return 1

    def _add(self, x, y):
        return x + y

    def _mul(self, x, y):
        return x * y

    def neg(self, x):
        return -self.normalize(x)

    def unit_inverse(self, x):
        x = self.normalize(x)
        return x if x in (1, -1) else None

    def random_element(self, rng, bound=5):
        return rng.randint(-bound, bound)


@dataclass(frozen=True)
class Booleans(Semiring):
    kind = "booleans"
    additively_cancellative = False
    finite = True

    def __str__(self):
        return "B"

    def normalize(self, x):
        x = _as_int(x)
        if x not in (0, 1):
            raise SemiringError(f"{x} is not a Boolean")
        return x

    def zero(self):
        return 0

    def one(self):
        return 1

    def _add(self, x, y):
        return x | y

    def _mul(self, x, y):
        return x & y

    def unit_inverse(self, x):
        return 1 if self.normalize(x) == 1 else None

    def elements(self):
        return iter((0, 1))

    def size(self):
        return 2

    def random_element(self, rng, bound=5):
        return rng.randint(0, 1)

    def universal_witness(self):
        return 1


@dataclass(frozen=True)
class NonnegRationals(Semiring):
    kind = "nonneg_rationals"

    def __str__(self):
        return "Q+"

    def normalize(self, x):
        x = _as_fraction(x)
        if x < 0:
            raise SemiringError(f"{x} is negative")
        return x

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def _add(self, x, y):
        return x + y

    def _mul(self, x, y):
        return x * y

    def unit_inverse(self, x):
        x = self.normalize(x)
        return None if x == 0 else 1 / x

    def random_element(self, rng, bound=5):
        return Fraction(rng.randint(0, bound), rng.randint(1, bound))

    def element_to_json(self, x):
        return _fmt_fraction(self.normalize(x))


@dataclass(frozen=True)
class FiniteQuotient(Semiring):
    """The semiring N/(k+1 ~ k) = {0, 1, ..., k} with saturation at k."""

    k: int = 1
    kind = "finite_quotient"
    additively_cancellative = False
    finite = True

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise SemiringError(f"finite_quotient needs k >= 1, got {self.k!r}")

    def __str__(self):
        return f"N/({self.k + 1}~{self.k})"

    def normalize(self, x):
        x = _as_int(x)
        if not 0 <= x <= self.k:
            raise SemiringError(f"{x} is not in 0..{self.k}")
        return x

    def zero(self):
        return 0

    def one(self):
        return 1

    def _add(self, x, y):
        return min(x + y, self.k)

    def _mul(self, x, y):
        return min(x * y, self.k)

    def unit_inverse(self, x):
        return 1 if self.normalize(x) == 1 else None

    def elements(self):
        return iter(range(self.k + 1))

    def size(self):
        return self.k + 1

    def random_element(self, rng, bound=5):
        return rng.randint(0, self.k)

    def universal_witness(self):
        return self.k

    def to_json(self):
        return {"kind": self.kind, "params": {"k": self.k}}


def _prime_support(n: int) -> frozenset:
    n = abs(n)
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


@dataclass(frozen=True)
class Localization(Semiring):
    """``base[1/a]`` for ``base`` in {N, Z}; elements are fractions x / a^j."""

    base: Semiring = Naturals()
    a: int = 1
    kind = "localization"
    local = False

    def __post_init__(self):
        if not isinstance(self.base, (Naturals, Integers)):
            raise SemiringError("localization is only supported over N and Z")
        if self.a == 0:
            raise SemiringError("localization at 0 is the zero semiring")
        if isinstance(self.base, Naturals) and self.a < 0:
            raise SemiringError("cannot localize N at a negative element")

    @property
    def negative_free(self):
        return self.base.negative_free

    def __str__(self):
        return f"{self.base}[1/{self.a}]"

    def _allowed(self) -> frozenset:
        return _prime_support(self.a)

    def normalize(self, x):
        x = _as_fraction(x)
        if not _prime_support(x.denominator) <= self._allowed():
            raise SemiringError(f"{x} is not in {self}")
        if isinstance(self.base, Naturals) and x < 0:
            raise SemiringError(f"{x} is negative")
        return x

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def _add(self, x, y):
        return x + y

    def _mul(self, x, y):
        return x * y

    def neg(self, x):
        if self.negative_free:
            return super().neg(x)
        return -self.normalize(x)

    def unit_inverse(self, x):
        x = self.normalize(x)
        if x == 0:
            return None
        inv = 1 / x
        return inv if self.contains(inv) else None

    def random_element(self, rng, bound=5):
        lo = 0 if isinstance(self.base, Naturals) else -bound
        return Fraction(rng.randint(lo, bound), abs(self.a) ** rng.randint(0, 2))

    def element_to_json(self, x):
        return _fmt_fraction(self.normalize(x))

    def to_json(self):
        return {"kind": self.kind, "params": {"base": self.base.to_json(), "a": str(self.a)}}


@dataclass(frozen=True)
class MonotonePair(Semiring):
    """Monotone functions {0 < 1} -> Q+, i.e. pairs (b, c) with 0 <= b <= c."""

    kind = "monotone_pair"
    no_zero_divisors = False

    def __str__(self):
        return "A"

    def normalize(self, x):
        if not isinstance(x, (tuple, list)) or len(x) != 2:
            raise SemiringError(f"expected a pair, got {x!r}")
        b, c = _as_fraction(x[0]), _as_fraction(x[1])
        if not 0 <= b <= c:
            raise SemiringError(f"({b}, {c}) violates 0 <= b <= c")
        return (b, c)

    def zero(self):
        return (Fraction(0), Fraction(0))

    def one(self):
        return (Fraction(1), Fraction(1))

    def _add(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def _mul(self, x, y):
        return (x[0] * y[0], x[1] * y[1])

    def unit_inverse(self, x):
        b, c = self.normalize(x)
        if b == c and b != 0:
            return (1 / b, 1 / c)
        return None

    def random_element(self, rng, bound=5):
        b = Fraction(rng.randint(0, bound), rng.randint(1, 3))
        return (b, b + Fraction(rng.randint(0, bound), rng.randint(1, 3)))

    def solve_scalar(self, coeffs, rhs):
        coeffs = [self.normalize(c) for c in coeffs]
        rhs = [self.normalize(r) for r in rhs]
        q = NonnegRationals()
        first = q._solve_domain([c[0] for c in coeffs], [r[0] for r in rhs])
        second = q._solve_domain([c[1] for c in coeffs], [r[1] for r in rhs])
        if first is None or second is None:
            return None
        # a coordinate left free by the constraints is reported as 0 by the solver;
        # a free second coordinate may be raised to satisfy b <= c
        if all(c[1] == 0 for c in coeffs):
            second = max(second, first)
        return (first, second) if first <= second else None

    def element_to_json(self, x):
        b, c = self.normalize(x)
        return [_fmt_fraction(b), _fmt_fraction(c)]


@dataclass(frozen=True)
class Product(Semiring):
    factors: tuple = ()
    kind = "product"

    def __post_init__(self):
        if not self.factors:
            raise SemiringError("product needs at least one factor")
        object.__setattr__(self, "factors", tuple(self.factors))

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)

    @property
    def negative_free(self):
        return all(f.negative_free for f in self.factors)

    @property
    def additively_cancellative(self):
        return all(f.additively_cancellative for f in self.factors)

    @property
    def no_zero_divisors(self):
        return len(self.factors) == 1 and self.factors[0].no_zero_divisors

    @property
    def local(self):
        return len(self.factors) == 1 and self.factors[0].local

    @property
    def finite(self):
        return all(f.finite for f in self.factors)

    def normalize(self, x):
        if not isinstance(x, (tuple, list)) or len(x) != len(self.factors):
            raise SemiringError(f"expected a {len(self.factors)}-tuple, got {x!r}")
        return tuple(f.normalize(v) for f, v in zip(self.factors, x))

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def one(self):
        return tuple(f.one() for f in self.factors)

    def _add(self, x, y):
        return tuple(f._add(a, b) for f, a, b in zip(self.factors, x, y))

    def _mul(self, x, y):
        return tuple(f._mul(a, b) for f, a, b in zip(self.factors, x, y))

    def neg(self, x):
        return tuple(f.neg(v) for f, v in zip(self.factors, self.normalize(x)))

    def unit_inverse(self, x):
        invs = [f.unit_inverse(v) for f, v in zip(self.factors, self.normalize(x))]
        return None if any(i is None for i in invs) else tuple(invs)

    def elements(self):
        return itertools.product(*(f.elements() for f in self.factors))

    def size(self):
        sizes = [f.size() for f in self.factors]
        if any(s is None for s in sizes):
            return None
        out = 1
        for s in sizes:
            out *= s
        return out

    def random_element(self, rng, bound=5):
        return tuple(f.random_element(rng, bound) for f in self.factors)

    def universal_witness(self):
        ws = [f.universal_witness() for f in self.factors]
        return None if any(w is None for w in ws) else tuple(ws)

    def solve_scalar(self, coeffs, rhs):
        coeffs = [self.normalize(c) for c in coeffs]
        rhs = [self.normalize(r) for r in rhs]
        parts = []
        for i, f in enumerate(self.factors):
            p = f.solve_scalar([c[i] for c in coeffs], [r[i] for r in rhs])
            if p is None:
                return None
            parts.append(p)
        return tuple(parts)

    def idempotent(self, i: int):
        """The i-th primitive idempotent e_i."""
        return tuple(f.one() if j == i else f.zero() for j, f in enumerate(self.factors))

    def project(self, x, i: int):
        return self.normalize(x)[i]

    def element_to_json(self, x):
        return [f.element_to_json(v) for f, v in zip(self.factors, self.normalize(x))]

    def to_json(self):
        return {"kind": self.kind, "params": {"factors": [f.to_json() for f in self.factors]}}


NATURALS = Naturals()
INTEGERS = Integers()
BOOLEANS = Booleans()
NONNEG_RATIONALS = NonnegRationals()
MONOTONE_PAIR = MonotonePair()


# -- module-level operations ----------------------------------------------

def add(R: Semiring, x, y):
    return R.add(x, y)


def mul(R: Semiring, x, y):
    return R.mul(x, y)


def unit_inverse(R: Semiring, x):
    """The inverse of ``x`` if it is a unit, else ``None``."""
    return R.unit_inverse(x)


def is_unit(R: Semiring, x) -> bool:
    return R.unit_inverse(x) is not None


def is_negative_free(R: Semiring) -> bool:
    return bool(R.negative_free)


def is_additively_cancellative(R: Semiring) -> bool:
    return bool(R.additively_cancellative)


def universally_negative_free_witness(R: Semiring):
    """Some r with r + 1 = r, or ``None``."""
    return R.universal_witness()


def is_universally_negative_free(R: Semiring) -> bool:
    return R.universal_witness() is not None


def generates_unit_ideal(R: Semiring, entries: list) -> bool:
    """Does the ideal generated by ``entries`` contain 1?"""
    if not entries:
        raise SemiringError("generates_unit_ideal needs a nonempty list")
    xs = [R.normalize(e) for e in entries]
    if isinstance(R, Product):
        return all(
            generates_unit_ideal(f, [x[i] for x in xs]) for i, f in enumerate(R.factors)
        )
    if isinstance(R, Integers):
        g = 0
        for x in xs:
            g = gcd(g, x)
        return g == 1
    if isinstance(R, Localization):
        # 1 = sum r_i x_i  <=>  some power a^e lies in the N-span (or Z-span) of the
        # numerators; with a > 1 that happens iff their gcd only has primes of a
        g = 0
        for x in xs:
            g = gcd(g, x.numerator)
        return g != 0 and _prime_support(g) <= R._allowed()
    # the remaining kinds are local: 1 = sum r_i x_i forces some r_i x_i to be a unit
    return any(R.unit_inverse(x) is not None for x in xs)


def localize(R: Semiring, a) -> Semiring:
    """``R[1/a]`` for R in {N, Z} (and localizations of those)."""
    if isinstance(R, Localization):
        a = R.normalize(a)
        if a == 0:
            raise SemiringError("localization at 0 is the zero semiring")
        num = abs(a.numerator)
        return _localization(R.base, abs(R.a) * num)
    if not isinstance(R, (Naturals, Integers)):
        raise SemiringError(f"localize is only supported over N and Z, not {R}")
    a = R.normalize(a)
    if a == 0:
        raise SemiringError("localization at 0 is the zero semiring")
    return _localization(R, abs(a))


def _localization(base: Semiring, a: int) -> Semiring:
    if a == 1:
        return base
    # canonical a: product of its distinct primes
    rad = 1
    for p in sorted(_prime_support(a)):
        rad *= p
    return Localization(base, rad)


def quotient_map_to_booleans(x) -> int:
    """The support map Q+ -> B, x -> [x > 0]."""
    x = NONNEG_RATIONALS.normalize(x)
    return 1 if x > 0 else 0


def semiring_from_json(obj: dict) -> Semiring:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SemiringError(f"bad semiring description: {obj!r}")
    kind = obj["kind"]
    params = obj.get("params", {}) or {}
    simple = {
        "naturals": NATURALS,
        "integers": INTEGERS,
        "booleans": BOOLEANS,
        "nonneg_rationals": NONNEG_RATIONALS,
        "monotone_pair": MONOTONE_PAIR,
    }
    if kind in simple:
        return simple[kind]
    if kind == "finite_quotient":
        return FiniteQuotient(_as_int(params.get("k")))
    if kind == "localization":
        base = semiring_from_json(params.get("base", {"kind": "naturals"}))
        return localize(base, _as_int(params.get("a")))
    if kind == "product":
        return Product(tuple(semiring_from_json(f) for f in params.get("factors", [])))
    raise SemiringError(f"unknown semiring kind {kind!r}")
