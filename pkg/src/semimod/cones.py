"""Finitely generated pointed cones in Q^n, viewed as Q+-modules."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .bmodules import FinitePoset
from .bundles import Projector, is_line_bundle
from .linalg import nonneg_solution, nullspace, primitive_integer, rank
from .matrices import SemiringMatrix
from .semirings import MONOTONE_PAIR

__all__ = [
    "ConeError",
    "RationalCone",
    "cone_member",
    "extreme_rays",
    "is_free_cone",
    "flatness_verdict",
    "relation_witness",
    "Relation",
    "order_cone",
    "square_cone",
    "diamond_poset",
    "rank_jump_demo",
]

MAX_POSET = 8


class ConeError(ValueError):
    pass


def _vec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class RationalCone:
    n: int
    generators: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        gens = tuple(_vec(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ConeError("a cone needs at least one generator")
        for g in gens:
            if len(g) != self.n:
                raise ConeError(f"generator {list(map(str, g))} has dimension {len(g)}, expected {self.n}")
            if not any(g):
                raise ConeError("generators must be nonzero")
        if self.labels is not None:
            if len(self.labels) != len(gens):
                raise ConeError("one label per generator")
            object.__setattr__(self, "labels", tuple(str(l) for l in self.labels))
        # pointed: no nonnegative combination with coefficient sum 1 vanishes
        A = [[g[i] for g in gens] for i in range(self.n)] + [[1] * len(gens)]
        if nonneg_solution(A, [0] * self.n + [1]) is not None:
            raise ConeError("cone is not pointed (contains a line)")

    def label_of(self, ray) -> str:
        """Name of the ray: the label of the first generator along it, else its coordinates."""
        ray = primitive_integer(ray)
        if self.labels is not None:
            for g, l in zip(self.generators, self.labels):
                if primitive_integer(g) == ray:
                    return l
        return "(" + ",".join(map(str, ray)) + ")"

    def to_json(self) -> dict:
        d = {"dimension": self.n, "generators": [[_fmt(x) for x in g] for g in self.generators]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cone_member(C: RationalCone, v) -> Optional[list]:
    """Nonnegative coefficients c with sum c_k g_k = v, or None."""
    v = _vec(v)
    if len(v) != C.n:
        raise ConeError(f"vector has dimension {len(v)}, cone has {C.n}")
    A = [[g[i] for g in C.generators] for i in range(C.n)]
    x = nonneg_solution(A, v)
    if x is not None:
        assert all(sum(c * g[i] for c, g in zip(x, C.generators)) == v[i] for i in range(C.n))
    return x


def _extreme(vectors: Sequence[tuple], n: int) -> list:
    dirs = sorted({tuple(primitive_integer(g)) for g in vectors})
    out = []
    for k, d in enumerate(dirs):
        others = dirs[:k] + dirs[k + 1:]
        if not others:
            out.append(d)
            continue
        A = [[o[i] for o in others] for i in range(n)]
        if nonneg_solution(A, d) is None:
            out.append(d)
    return out


def extreme_rays(C: RationalCone) -> list:
    """Primitive integer vectors spanning the extreme rays, lexicographically sorted."""
    return [list(r) for r in _extreme(C.generators, C.n)]


def is_free_cone(C: RationalCone) -> Optional[list]:
    rays = extreme_rays(C)
    return rays if rank(rays) == len(rays) else None


@dataclass(frozen=True)
class Relation:
    """sum_k lhs[k] ray = sum_k rhs[k] ray, as (coefficient, ray index) pairs."""

    rays: tuple
    lhs: tuple
    rhs: tuple

    def holds(self) -> bool:
        n = len(self.rays[0])
        left = [sum(c * self.rays[k][i] for c, k in self.lhs) for i in range(n)]
        right = [sum(c * self.rays[k][i] for c, k in self.rhs) for i in range(n)]
        return left == right

    def render(self, C: Optional[RationalCone] = None) -> str:
        def side(terms):
            parts = []
            for c, k in terms:
                name = C.label_of(self.rays[k]) if C is not None else f"r{k + 1}"
                parts.append((name, name if c == 1 else f"{c}*{name}"))
            return " + ".join(p for _, p in sorted(parts))

        return f"{side(self.lhs)} = {side(self.rhs)}"

    def to_json(self, C: Optional[RationalCone] = None) -> dict:
        name = (lambda k: C.label_of(self.rays[k])) if C is not None else (lambda k: f"r{k + 1}")
        return {
            "rays": [list(map(str, r)) for r in self.rays],
            "lhs": [{"coefficient": str(c), "ray": name(k)} for c, k in self.lhs],
            "rhs": [{"coefficient": str(c), "ray": name(k)} for c, k in self.rhs],
            "text": self.render(C),
        }


def relation_witness(C: RationalCone) -> Optional[Relation]:
    """A linear dependency among the extreme rays, or None when they are independent.

    The first nullspace basis vector of the ray matrix is scaled to coprime
    integers with its first nonzero entry positive; positive entries form the
    left side, negated negative entries the right side.
    """
    rays = extreme_rays(C)
    cols = [[r[i] for r in rays] for i in range(C.n)]
    kernel = nullspace(cols, len(rays))
    if not kernel:
        return None
    v = primitive_integer(kernel[0])
    first = next(x for x in v if x)
    if first < 0:
        v = [-x for x in v]
    lhs = tuple((c, k) for k, c in enumerate(v) if c > 0)
    rhs = tuple((-c, k) for k, c in enumerate(v) if c < 0)
    rel = Relation(tuple(tuple(r) for r in rays), lhs, rhs)
    assert rel.holds()
    return rel


def flatness_verdict(C: RationalCone) -> dict:
    basis = is_free_cone(C)
    if basis is not None:
        return {
            "verdict": "free+flat",
            "basis": [list(map(str, b)) for b in basis],
            "reasons": [
                "the extreme rays are linearly independent, so they form a basis",
                "free modules are projective, and projective modules are flat",
            ],
        }
    rel = relation_witness(C)
    return {
        "verdict": "not-flat",
        "relation": rel.render(C),
        "reasons": [
            "the extreme rays generate the cone and satisfy a nontrivial linear relation, so it is not free",
            "over Q+ (a subfield's nonnegative part) finitely generated projective modules are free",
            "for finitely presented modules flat and projective agree, hence not flat",
        ],
    }


# -- order cones ------------------------------------------------------------

def order_cone(P: FinitePoset) -> RationalCone:
    """{v in Q+^P : x <= y implies v_x <= v_y}, by double description.

    Start from the orthant rays and cut by each inequality v_y - v_x >= 0 in
    turn, pruning to extreme rays after every step. Rays equal to the up-set
    indicator of x are labelled ``f<x>``, the others ``g``, ``g2``, ...
    """
    n = P.size
    if n > MAX_POSET:
        raise ConeError(f"order cone is limited to {MAX_POSET} points, got {n}")
    rays = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    for x, y in sorted(P.leq_pairs):
        if x == y:
            continue
        a = [0] * n
        a[y] += 1
        a[x] -= 1

        def val(r):
            return sum(ai * ri for ai, ri in zip(a, r))

        pos = [r for r in rays if val(r) > 0]
        zero = [r for r in rays if val(r) == 0]
        neg = [r for r in rays if val(r) < 0]
        new = pos + zero
        for p in pos:
            for q in neg:
                vp, vq = val(p), val(q)
                new.append(tuple(vp * qi - vq * pi for pi, qi in zip(p, q)))
        rays = [tuple(Fraction(c) for c in r) for r in _extreme(new, n)]
    ups = {}
    for e in range(n):
        ups[tuple(int(P.leq(e, z)) for z in range(n))] = f"f{P.elements[e]}"
    labels = []
    extra = 0
    for r in rays:
        key = tuple(int(c) for c in r)
        if key in ups:
            labels.append(ups[key])
        else:
            extra += 1
            labels.append("g" if extra == 1 else f"g{extra}")
    return RationalCone(n, tuple(rays), tuple(labels))


def square_cone() -> RationalCone:
    return RationalCone(3, ((1, 0, 1), (0, 1, 1), (0, -1, 1), (-1, 0, 1)), ("x1", "x2", "x3", "x4"))


def diamond_poset() -> FinitePoset:
    """1 < 2, 3 < 4."""
    return FinitePoset.from_relations("1234", [("1", "2"), ("1", "3"), ("2", "4"), ("3", "4")])


def rank_jump_demo() -> dict:
    """The idempotent t = (0, 1) of the monotone-pair semiring A.

    [t] is projective, but base change along the two coordinate maps A -> Q+
    gives images of rank 0 and 1, and [t] is not a line bundle.
    """
    A = MONOTONE_PAIR
    t = (Fraction(0), Fraction(1))
    pi = Projector(SemiringMatrix(A, 1, 1, (t,)))
    ranks = []
    for coord in (0, 1):
        image = [[pi.matrix[0, 0][coord]]]
        ranks.append(rank(image))
    return {
        "semiring": str(A),
        "t": A.element_to_json(t),
        "projector_valid": True,
        "ranks": ranks,
        "is_line_bundle": is_line_bundle(pi),
        "ring_is_local": A.local,
    }
