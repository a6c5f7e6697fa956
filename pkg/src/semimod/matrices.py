"""Matrices over semirings, inverse search and GL_n structure."""

from __future__ import annotations

import itertools
import math
import os
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from . import linalg
from .semirings import (
    INTEGERS,
    Integers,
    MonotonePair,
    NonnegRationals,
    Product,
    Semiring,
    SemiringError,
    is_universally_negative_free,
)

__all__ = [
    "MatrixError",
    "SemiringMatrix",
    "identity",
    "mat_mul",
    "verify_inverse_pair",
    "find_inverse",
    "right_inverses",
    "is_monomial",
    "enumerate_gl",
    "check_torus_normalizer",
    "gl_nonflat_witness",
    "NonflatCertificate",
    "search_cap",
    "gl_order_formula",
]

DEFAULT_SEARCH_CAP = 1 << 20


class MatrixError(ValueError):
    pass


def search_cap(default: int = DEFAULT_SEARCH_CAP) -> int:
    """Cap on exhaustive search sizes; ``SEMIMOD_SEARCH_CAP`` overrides it."""
    raw = os.environ.get("SEMIMOD_SEARCH_CAP")
    if not raw:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise MatrixError(f"SEMIMOD_SEARCH_CAP must be an integer, got {raw!r}")
    if cap > default:
        warnings.warn(f"SEMIMOD_SEARCH_CAP raised to {cap} (default {default})", stacklevel=2)
    return cap


@dataclass(frozen=True)
class SemiringMatrix:
    ring: Semiring
    rows: int
    cols: int
    entries: tuple = field(default=())

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise MatrixError("matrices must have positive dimensions")
        ents = tuple(self.entries)
        if len(ents) != self.rows * self.cols:
            raise MatrixError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(ents)}"
            )
        try:
            ents = tuple(self.ring.normalize(e) for e in ents)
        except SemiringError as exc:
            raise MatrixError(str(exc)) from exc
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, ring: Semiring, rows: Sequence[Sequence]) -> "SemiringMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise MatrixError("ragged or empty row list")
        return cls(ring, len(rows), len(rows[0]), tuple(e for r in rows for e in r))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "SemiringMatrix":
        return SemiringMatrix(
            self.ring, self.cols, self.rows,
            tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)),
        )

    def trace(self):
        if not self.is_square:
            raise MatrixError("trace of a non-square matrix")
        return self.ring.sum(self[i, i] for i in range(self.rows))

    def map(self, ring: Semiring, f) -> "SemiringMatrix":
        """Entrywise base change along ``f`` into ``ring``."""
        return SemiringMatrix(ring, self.rows, self.cols, tuple(f(e) for e in self.entries))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "rows": self.rows,
            "cols": self.cols,
            "entries": [self.ring.element_to_json(e) for e in self.entries],
        }

    def __str__(self):
        cells = [[self.ring.format(e) for e in r] for r in self.to_rows()]
        w = max(len(c) for r in cells for c in r)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


def identity(ring: Semiring, n: int) -> SemiringMatrix:
    return SemiringMatrix(
        ring, n, n,
        tuple(ring.one() if i == j else ring.zero() for i in range(n) for j in range(n)),
    )


def mat_mul(A: SemiringMatrix, B: SemiringMatrix) -> SemiringMatrix:
    if A.ring != B.ring:
        raise MatrixError(f"ring mismatch: {A.ring} vs {B.ring}")
    if A.cols != B.rows:
        raise MatrixError(f"shape mismatch: {A.rows}x{A.cols} times {B.rows}x{B.cols}")
    R = A.ring
    out = []
    for i in range(A.rows):
        for j in range(B.cols):
            acc = R.zero()
            for k in range(A.cols):
                acc = R._add(acc, R._mul(A.entries[i * A.cols + k], B.entries[k * B.cols + j]))
            out.append(acc)
    return SemiringMatrix(R, A.rows, B.cols, tuple(out))


def verify_inverse_pair(A: SemiringMatrix, B: SemiringMatrix) -> bool:
    """AB = I and BA = I."""
    if not (A.is_square and B.is_square) or A.rows != B.rows:
        raise MatrixError("verify_inverse_pair needs square matrices of equal size")
    I = identity(A.ring, A.rows)
    return mat_mul(A, B) == I and mat_mul(B, A) == I


def is_monomial(A: SemiringMatrix) -> bool:
    """Is A a permutation matrix with unit entries (an element of (R^x)^n x S_n)?"""
    if not A.is_square:
        return False
    R = A.ring
    n = A.rows
    seen_cols = set()
    for i in range(n):
        nz = [j for j in range(n) if A[i, j] != R.zero()]
        if len(nz) != 1 or nz[0] in seen_cols:
            return False
        if R.unit_inverse(A[i, nz[0]]) is None:
            return False
        seen_cols.add(nz[0])
    return True


def _monomial_inverse(A: SemiringMatrix) -> Optional[SemiringMatrix]:
    if not is_monomial(A):
        return None
    R = A.ring
    n = A.rows
    inv = [R.zero()] * (n * n)
    for i in range(n):
        j = next(j for j in range(n) if A[i, j] != R.zero())
        inv[j * n + i] = R.unit_inverse(A[i, j])
    return SemiringMatrix(R, n, n, tuple(inv))


def _integer_inverse(A: SemiringMatrix) -> Optional[SemiringMatrix]:
    # invertible over Z iff det = +-1, and then the rational inverse is adj(A)/det
    rows = A.to_rows()
    if linalg.det(rows) not in (1, -1):
        return None
    inv = linalg.inverse(rows)
    return SemiringMatrix(A.ring, A.rows, A.cols, tuple(int(x) for r in inv for x in r))


def _solve_columns(A: SemiringMatrix, target: SemiringMatrix) -> Iterator[SemiringMatrix]:
    """All X over a finite ring with A X = target, column by column."""
    R = A.ring
    n = A.cols
    elems = list(R.elements())
    cols = []
    for j in range(target.cols):
        sols = []
        for x in itertools.product(elems, repeat=n):
            if all(
                R.sum(R._mul(A[i, k], x[k]) for k in range(n)) == target[i, j]
                for i in range(A.rows)
            ):
                sols.append(x)
        if not sols:
            return
        cols.append(sols)
    for choice in itertools.product(*cols):
        yield SemiringMatrix(
            R, n, target.cols, tuple(choice[j][i] for i in range(n) for j in range(target.cols))
        )


def right_inverses(A: SemiringMatrix) -> list:
    """Every B with AB = I, by exhaustive column search (finite rings only)."""
    if not A.ring.finite:
        raise MatrixError(f"exhaustive search needs a finite ring, not {A.ring}")
    if not A.is_square:
        raise MatrixError("right_inverses needs a square matrix")
    size = A.ring.size() ** A.rows
    if size > search_cap():
        raise MatrixError(f"column search space {size} exceeds the search cap")
    return list(_solve_columns(A, identity(A.ring, A.rows)))


def find_inverse(A: SemiringMatrix) -> Optional[SemiringMatrix]:
    """The two-sided inverse of A, or ``None``.

    Strategy by kind: Z uses the determinant and adjugate; negative-free rings
    without zero divisors use the monomial rule GL_n(R) = (R^x)^n x S_n;
    monotone pairs and products are solved coordinatewise; other finite rings
    fall back to exhaustive search.
    """
    if not A.is_square:
        raise MatrixError("find_inverse needs a square matrix")
    R = A.ring
    if isinstance(R, Integers):
        B = _integer_inverse(A)
    elif R.negative_free and R.no_zero_divisors:
        B = _monomial_inverse(A)
    elif isinstance(R, MonotonePair):
        B = _coordinatewise_inverse(A)
    elif isinstance(R, Product):
        B = _product_inverse(A)
    elif R.finite:
        B = next((C for C in right_inverses(A) if verify_inverse_pair(A, C)), None)
    else:
        raise MatrixError(f"no inverse strategy for {R}")
    if B is not None and not verify_inverse_pair(A, B):
        raise AssertionError("inverse candidate failed verification")
    return B


def _coordinatewise_inverse(A):
    # A sits inside Q+ x Q+ coordinatewise; an inverse over A inverts each coordinate
    q = NonnegRationals()
    parts = []
    for c in (0, 1):
        Bc = _monomial_inverse(A.map(q, lambda e, c=c: e[c]))
        if Bc is None:
            return None
        parts.append(Bc.entries)
    ents = tuple(zip(parts[0], parts[1]))
    if not all(A.ring.contains(e) for e in ents):
        return None
    return SemiringMatrix(A.ring, A.rows, A.cols, ents)


def _product_inverse(A):
    R = A.ring
    parts = []
    for i, f in enumerate(R.factors):
        Bi = find_inverse(A.map(f, lambda e, i=i: e[i]))
        if Bi is None:
            return None
        parts.append(Bi.entries)
    return SemiringMatrix(R, A.rows, A.cols, tuple(zip(*parts)))


def enumerate_gl(R: Semiring, n: int) -> list:
    """All invertible n x n matrices over a finite R, lexicographically ordered.

    Pairs (A, B) with AB = BA = I are found by backtracking over the entries of
    A and B jointly. When R is negative free, a sum equal to 0 forces every
    term to vanish, which prunes the search.
    """
    if not R.finite:
        raise MatrixError(f"enumerate_gl needs a finite ring, not {R}")
    if n < 1 or n > 4:
        raise MatrixError("enumerate_gl supports 1 <= n <= 4")
    if R.size() > 6:
        raise MatrixError("enumerate_gl supports rings with at most 6 elements")
    elems = list(R.elements())
    zero, one = R.zero(), R.one()
    prune = R.negative_free
    # variable layout: A[i][k] -> ("a", i, k), B[k][j] -> ("b", k, j)
    order = []
    for t in range(n):
        for k in range(n):
            order.append(("a", t, k))
            order.append(("b", k, t))
    # B[k][t] for k<n at step t covers column t of B; remaining B entries below
    seen = set(order)
    order += [("b", k, j) for k in range(n) for j in range(n) if ("b", k, j) not in seen]
    A = [[None] * n for _ in range(n)]
    B = [[None] * n for _ in range(n)]
    found = []
    cap = search_cap()
    visited = 0

    def partial_ok(kind, r, c) -> bool:
        # check every sum (AB)_ij and (BA)_ij touching the new variable
        for M1, M2, i_fix, j_fix in _touching(kind, r, c, n):
            terms = []
            complete = True
            for k in range(n):
                x = M1(A, B)[i_fix][k]
                y = M2(A, B)[k][j_fix]
                if x is None or y is None:
                    complete = False
                    continue
                terms.append(R._mul(x, y))
            target = one if i_fix == j_fix else zero
            if complete:
                if R.sum(terms) != target:
                    return False
            elif prune and target == zero and any(t != zero for t in terms):
                return False
        return True

    def rec(pos: int):
        nonlocal visited
        visited += 1
        if visited > cap:
            raise MatrixError(f"GL_{n}({R}) search exceeded the cap of {cap} nodes (see SEMIMOD_SEARCH_CAP)")
        if pos == len(order):
            found.append(tuple(A[i][j] for i in range(n) for j in range(n)))
            return
        kind, r, c = order[pos]
        M = A if kind == "a" else B
        for v in elems:
            M[r][c] = v
            if partial_ok(kind, r, c):
                rec(pos + 1)
        M[r][c] = None

    rec(0)
    return [SemiringMatrix(R, n, n, e) for e in sorted(set(found), key=_lex_key(elems))]


def _lex_key(elems):
    idx = {e: i for i, e in enumerate(elems)}
    return lambda ents: tuple(idx[e] for e in ents)


def _touching(kind, r, c, n):
    """Products (AB) and (BA) whose sums involve the variable kind[r][c]."""
    getA = lambda A, B: A  # noqa: E731
    getB = lambda A, B: B  # noqa: E731
    out = []
    if kind == "a":
        # (AB)_{r j} uses A[r][c]; (BA)_{i c} uses A[r][c]
        out += [(getA, getB, r, j) for j in range(n)]
        out += [(getB, getA, i, c) for i in range(n)]
    else:
        out += [(getA, getB, i, c) for i in range(n)]
        out += [(getB, getA, r, j) for j in range(n)]
    return out


def check_torus_normalizer(R: Semiring, n: int) -> bool:
    """Is every element of GL_n(R) a unit-scaled permutation matrix?"""
    if not R.finite:
        raise MatrixError(f"check_torus_normalizer needs a finite ring, not {R}")
    if not is_universally_negative_free(R):
        raise MatrixError(f"{R} is not universally negative free (no r with r + 1 = r)")
    return all(is_monomial(A) for A in enumerate_gl(R, n))


@dataclass(frozen=True)
class NonflatCertificate:
    n: int
    x: SemiringMatrix
    y: SemiringMatrix
    inverse_pair: bool
    relation_terms: tuple  # x_{1k} y_{k2} for k = 1..n, computed over Z
    relation_sum: int
    witness_term: int  # x_{12} y_{22}

    @property
    def valid(self) -> bool:
        # the (1,2) entry of xy is a vanishing sum; over a negative-free
        # coefficient ring each term would vanish, but x12*y22 = -1
        return (
            self.inverse_pair
            and self.relation_sum == 0
            and self.witness_term == -1
            and self.relation_terms[1] == self.witness_term
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "x": self.x.to_json(),
            "y": self.y.to_json(),
            "inverse_pair": self.inverse_pair,
            "relation_terms": list(self.relation_terms),
            "relation_sum": self.relation_sum,
            "x12_y22": self.witness_term,
            "conclusion": "-1 = 0 in Z (x) R, so Z (x)_N R = 0" if self.valid else None,
            "valid": self.valid,
        }


def gl_nonflat_witness(n: int) -> NonflatCertificate:
    """The block-diagonal integer inverse pair showing GL_n is not flat over N."""
    if n < 2:
        raise MatrixError("gl_nonflat_witness needs n >= 2")
    x = [[0] * n for _ in range(n)]
    y = [[0] * n for _ in range(n)]
    x[0][0], x[0][1], x[1][0], x[1][1] = 1, -1, -1, 2
    y[0][0], y[0][1], y[1][0], y[1][1] = 2, 1, 1, 1
    for i in range(2, n):
        x[i][i] = y[i][i] = 1
    X = SemiringMatrix.from_rows(INTEGERS, x)
    Y = SemiringMatrix.from_rows(INTEGERS, y)
    terms = tuple(X[0, k] * Y[k, 1] for k in range(n))
    return NonflatCertificate(
        n=n,
        x=X,
        y=Y,
        inverse_pair=verify_inverse_pair(X, Y),
        relation_terms=terms,
        relation_sum=sum(terms),
        witness_term=X[0, 1] * Y[1, 1],
    )


def gl_order_formula(R: Semiring, n: int) -> int:
    """|R^x|^n * n!, the size of the torus normalizer."""
    units = sum(1 for e in R.elements() if R.unit_inverse(e) is not None)
    return units ** n * math.factorial(n)
