"""Finitely generated projective modules presented by idempotent matrices.

A projector ``pi`` (``pi @ pi == pi``) presents the module ``M_pi``, the image
of ``pi`` in ``R^n``. This module decides when ``M_pi`` is a line bundle and
builds explicit Zariski trivializations over the localizations
``R[1/pi_ij]``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Optional

from .matrices import SemiringMatrix, mat_mul
from .semirings import (
    BOOLEANS,
    NATURALS,
    NONNEG_RATIONALS,
    FiniteQuotient,
    Integers,
    Localization,
    MonotonePair,
    Naturals,
    Product,
    Semiring,
    generates_unit_ideal,
    localize,
)

__all__ = [
    "ProjectorError",
    "Projector",
    "TrivializationChart",
    "LineIsomorphism",
    "make_projector",
    "counit_surjective",
    "unit_surjective",
    "two_by_two_singular",
    "is_line_bundle",
    "chart_ring",
    "trivializing_cover",
    "kronecker",
    "dual_projector",
    "pic_n_triviality_check",
    "random_projector",
    "boolean_projectors",
]


class ProjectorError(ValueError):
    pass


@dataclass(frozen=True)
class Projector:
    matrix: SemiringMatrix

    def __post_init__(self):
        M = self.matrix
        if not M.is_square:
            raise ProjectorError(f"projector must be square, got {M.rows}x{M.cols}")
        sq = mat_mul(M, M)
        if sq != M:
            bad = next(
                (i, j) for i in range(M.rows) for j in range(M.cols) if sq[i, j] != M[i, j]
            )
            i, j = bad
            raise ProjectorError(
                f"not idempotent: (pi^2)[{i + 1},{j + 1}] = {M.ring.format(sq[i, j])}"
                f" but pi[{i + 1},{j + 1}] = {M.ring.format(M[i, j])}"
            )

    @property
    def ring(self) -> Semiring:
        return self.matrix.ring

    @property
    def n(self) -> int:
        return self.matrix.rows

    def __getitem__(self, ij):
        return self.matrix[ij]

    def entries(self) -> list:
        return list(self.matrix.entries)

    def to_json(self) -> dict:
        return self.matrix.to_json()


def make_projector(M: SemiringMatrix) -> Projector:
    return Projector(M)


def counit_surjective(pi: Projector) -> bool:
    """Do the entries of pi generate the unit ideal?"""
    return generates_unit_ideal(pi.ring, pi.entries())


def unit_surjective(pi: Projector) -> Optional[SemiringMatrix]:
    """A matrix z with z_ij pi_kl = pi_kj pi_il for all i, j, k, l, or None.

    The constraints decouple: z_ij only meets itself. Each entry is solved by
    the ring's scalar solver, which is exhaustive over finite rings and exact
    (forced by cancellation) over N, Z, Q+, localizations and monotone pairs.
    When some pi_kl is a unit the answer is forced outright.
    """
    R = pi.ring
    n = pi.n
    idx = range(n)
    unit_at = next(
        ((k, l) for k in idx for l in idx if R.unit_inverse(pi[k, l]) is not None), None
    )
    z = []
    for i in idx:
        for j in idx:
            if unit_at is not None:
                k, l = unit_at
                cand = R._mul(R._mul(pi[k, j], pi[i, l]), R.unit_inverse(pi[k, l]))
                z.append(cand)
                continue
            coeffs = [pi[k, l] for k in idx for l in idx]
            rhs = [R._mul(pi[k, j], pi[i, l]) for k in idx for l in idx]
            v = R.solve_scalar(coeffs, rhs)
            if v is None:
                return None
            z.append(v)
    Z = SemiringMatrix(R, n, n, tuple(z))
    ok = all(
        R._mul(Z[i, j], pi[k, l]) == R._mul(pi[k, j], pi[i, l])
        for i in idx for j in idx for k in idx for l in idx
    )
    return Z if ok else None


def two_by_two_singular(pi: Projector) -> bool:
    R = pi.ring
    idx = range(pi.n)
    return all(
        R._mul(pi[i, j], pi[k, l]) == R._mul(pi[i, l], pi[k, j])
        for i in idx for j in idx for k in idx for l in idx
    )


def is_line_bundle(pi: Projector) -> bool:
    """trace(pi) = 1 and every 2x2 minor of pi is singular."""
    R = pi.ring
    return pi.matrix.trace() == R.one() and two_by_two_singular(pi)


# -- charts ------------------------------------------------------------------

def chart_ring(R: Semiring, a) -> tuple[Semiring, Callable]:
    """``R[1/a]`` together with the localization map ``R -> R[1/a]``.

    N and Z (and their localizations) are localized honestly. A unit ``a``
    gives ``R`` itself. The remaining shipped kinds are handled by the
    explicit quotient their localization collapses to: for ``N/(k+1~k)`` and
    a non-unit ``a >= 2`` the powers of ``a`` reach the absorbing element
    ``k``, and inverting it identifies ``1 = k``, leaving ``B``; for monotone
    pairs ``(0, c)`` with ``c > 0`` the localization is ``Q+`` via the second
    coordinate; for products, the nonzero coordinates are localized and the
    others drop out.
    """
    a = R.normalize(a)
    if a == R.zero():
        raise ProjectorError("cannot build a chart at a zero entry")
    if isinstance(R, (Naturals, Integers, Localization)):
        S = localize(R, a)
        return S, S.normalize
    if R.unit_inverse(a) is not None:
        return R, lambda x: x
    if isinstance(R, FiniteQuotient):
        return BOOLEANS, lambda x: 1 if x else 0
    if isinstance(R, MonotonePair):
        return NONNEG_RATIONALS, lambda x: x[1]
    if isinstance(R, Product):
        keep = [i for i, f in enumerate(R.factors) if a[i] != f.zero()]
        subs = [chart_ring(R.factors[i], a[i]) for i in keep]
        if len(subs) == 1:
            S, phi = subs[0]
            i0 = keep[0]
            return S, lambda x, phi=phi, i0=i0: phi(x[i0])
        S = Product(tuple(s for s, _ in subs))
        phis = [p for _, p in subs]
        return S, lambda x: tuple(p(x[i]) for p, i in zip(phis, keep))
    raise ProjectorError(f"no localization rule for {R}")


@dataclass(frozen=True)
class TrivializationChart:
    i: int
    j: int
    chart_ring: Semiring
    column: tuple  # pi_{*j}, in the chart ring
    row: tuple  # pi_{i*} / pi_ij, in the chart ring

    def product(self) -> SemiringMatrix:
        S = self.chart_ring
        n = len(self.column)
        return SemiringMatrix(
            S, n, n, tuple(S._mul(c, r) for c in self.column for r in self.row)
        )

    def verify(self, pi: Projector) -> bool:
        _, phi = chart_ring(pi.ring, pi[self.i, self.j])
        return self.product() == pi.matrix.map(self.chart_ring, phi)

    def has_unit_entries(self) -> bool:
        S = self.chart_ring
        return any(S.unit_inverse(c) is not None for c in self.column) and any(
            S.unit_inverse(r) is not None for r in self.row
        )

    def to_json(self) -> dict:
        S = self.chart_ring
        return {
            "i": self.i + 1,
            "j": self.j + 1,
            "chart_ring": S.to_json(),
            "column": [S.element_to_json(c) for c in self.column],
            "row": [S.element_to_json(r) for r in self.row],
        }


def trivializing_cover(pi: Projector) -> list:
    """One verified rank-1 chart per nonzero entry of pi, in row-major order."""
    if not is_line_bundle(pi):
        raise ProjectorError("trivializing_cover needs a line bundle (trace 1, singular minors)")
    R = pi.ring
    nonzero = [(i, j) for i in range(pi.n) for j in range(pi.n) if pi[i, j] != R.zero()]
    if not generates_unit_ideal(R, [pi[i, j] for i, j in nonzero]):
        raise AssertionError("entries of a line bundle must generate the unit ideal")
    charts = []
    for i, j in nonzero:
        S, phi = chart_ring(R, pi[i, j])
        inv = S.unit_inverse(phi(pi[i, j]))
        if inv is None:
            raise AssertionError(f"localization at pi[{i + 1},{j + 1}] did not invert it")
        column = tuple(phi(pi[k, j]) for k in range(pi.n))
        row = tuple(S._mul(phi(pi[i, l]), inv) for l in range(pi.n))
        chart = TrivializationChart(i, j, S, column, row)
        if not chart.verify(pi):
            raise AssertionError(f"chart at ({i + 1},{j + 1}) does not factor pi")
        charts.append(chart)
    return charts


def kronecker(p: Projector, q: Projector) -> Projector:
    """The projector presenting M_p (x) M_q."""
    if p.ring != q.ring:
        raise ProjectorError(f"ring mismatch: {p.ring} vs {q.ring}")
    R = p.ring
    n, m = p.n, q.n
    ents = tuple(
        R._mul(p[i // m, j // m], q[i % m, j % m]) for i in range(n * m) for j in range(n * m)
    )
    return Projector(SemiringMatrix(R, n * m, n * m, ents))


def dual_projector(pi: Projector) -> Projector:
    """The transpose, presenting the dual module."""
    return Projector(pi.matrix.transpose())


@dataclass(frozen=True)
class LineIsomorphism:
    """M_pi ~= N via m -> row . m and n -> n * column."""

    i: int
    column: tuple
    row: tuple

    def to_json(self) -> dict:
        return {"i": self.i + 1, "column": [str(c) for c in self.column], "row": [str(r) for r in self.row]}


def pic_n_triviality_check(pi: Projector) -> Optional[LineIsomorphism]:
    """For a line bundle over N, the explicit isomorphism M_pi ~= N."""
    if not isinstance(pi.ring, Naturals):
        raise ProjectorError("pic_n_triviality_check works over N")
    if not is_line_bundle(pi):
        raise ProjectorError("pic_n_triviality_check needs a line bundle")
    # trace 1 over N forces exactly one diagonal entry to be 1
    diag = [i for i in range(pi.n) if pi[i, i] == 1]
    if not diag:
        return None
    i = diag[0]
    column = tuple(pi.matrix.col(i))
    row = tuple(pi.matrix.row(i))
    # column . row = pi (rank-1 factorization) and row . column = pi_ii = 1:
    # so row: M_pi -> N and column: N -> M_pi are mutually inverse
    outer = SemiringMatrix(NATURALS, pi.n, pi.n, tuple(c * r for c in column for r in row))
    inner = sum(r * c for r, c in zip(row, column))
    if outer != pi.matrix or inner != 1:
        return None
    return LineIsomorphism(i, column, row)


# -- generators for tests and the CLI ---------------------------------------

def random_projector(R: Semiring, n: int, rng: random.Random, bound: int = 3, line: Optional[bool] = None):
    """A random projector over N or Z with entries of absolute value <= bound.

    With ``line=True`` the result is a rank-1 projector u v^T with v . u = 1;
    with ``line=False`` it is a sum of such pieces on disjoint supports or a
    rank >= 2 block; ``None`` mixes both. Returns a Projector.
    """
    if not isinstance(R, (Naturals, Integers)):
        raise ProjectorError("random_projector supports N and Z")
    if line is None:
        line = rng.random() < 0.6
    for _ in range(10_000):
        if line:
            ents = _rank_one(R, n, rng, bound)
        else:
            ents = _higher_rank(R, n, rng, bound)
        if ents is None:
            continue
        if max(abs(e) for e in ents) > bound:
            continue
        M = SemiringMatrix(R, n, n, tuple(ents))
        try:
            return Projector(M)
        except ProjectorError:  # pragma: no cover - constructions are idempotent
            continue
    raise RuntimeError("could not sample a projector")


def _rank_one(R, n, rng, bound):
    if isinstance(R, Naturals):
        # v . u = 1 over N: one shared index with u_i = v_i = 1, disjoint supports elsewhere
        i = rng.randrange(n)
        u = [0] * n
        v = [0] * n
        u[i] = v[i] = 1
        for k in range(n):
            if k == i:
                continue
            side = rng.choice(("u", "v", "none"))
            if side == "u":
                u[k] = rng.randint(0, bound)
            elif side == "v":
                v[k] = rng.randint(0, bound)
        return [a * b for a in u for b in v]
    # over Z: random v, then u with v . u = 1 via an extended gcd, plus a kernel shift
    v = [rng.randint(-bound, bound) for _ in range(n)]
    g, coeffs = _ext_gcd(v)
    if g != 1:
        return None
    u = list(coeffs)
    if n >= 2:
        a, b = rng.sample(range(n), 2)
        t = rng.randint(-1, 1)
        u[a] += t * v[b]
        u[b] -= t * v[a]
    return [a * b for a in u for b in v]


def _higher_rank(R, n, rng, bound):
    if n == 1:
        return [rng.choice((0, 1))]
    # permuted direct sums of smaller projectors (block diagonal, then conjugated)
    cut = rng.randint(1, n - 1)
    blocks = []
    for size in (cut, n - cut):
        if rng.random() < 0.3:
            blocks.append([0] * (size * size))
        else:
            b = _rank_one(R, size, rng, bound)
            if b is None:
                return None
            blocks.append(b)
    M = [[0] * n for _ in range(n)]
    sizes = (cut, n - cut)
    off = 0
    for size, b in zip(sizes, blocks):
        for r in range(size):
            for c in range(size):
                M[off + r][off + c] = b[r * size + c]
        off += size
    perm = list(range(n))
    rng.shuffle(perm)
    return [M[perm[i]][perm[j]] for i in range(n) for j in range(n)]


def _ext_gcd(v):
    """gcd of v and integer coefficients c with sum c_i v_i = gcd."""
    g, coeffs = 0, [0] * len(v)
    for idx, x in enumerate(v):
        if x == 0:
            continue
        if g == 0:
            g, coeffs = abs(x), [0] * len(v)
            coeffs[idx] = 1 if x > 0 else -1
            continue
        # g' = s*g + t*x
        s, t, gp = _egcd(g, x)
        coeffs = [s * c for c in coeffs]
        coeffs[idx] += t
        g = gp
    return g, coeffs


def _egcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_s, old_t, old_r


def boolean_projectors(n: int) -> list:
    """Every idempotent n x n Boolean matrix."""
    out = []
    for ents in itertools.product((0, 1), repeat=n * n):
        M = SemiringMatrix(BOOLEANS, n, n, ents)
        if mat_mul(M, M) == M:
            out.append(Projector(M))
    return out
