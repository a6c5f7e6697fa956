"""Finite Boolean modules, i.e. finite join-semilattices with a bottom element.

Elements are the integers ``0..size-1`` with ``0`` the bottom; ``labels`` gives
them readable names. A module built from a presentation labels each class by
its largest generator subset, e.g. ``x1+x3``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .matrices import search_cap

__all__ = [
    "BModuleError",
    "FiniteBModule",
    "BPresentation",
    "FinitePoset",
    "BAlgebra",
    "RectificationWitness",
    "free_module",
    "chain_module",
    "module_from_presentation",
    "macpherson_module",
    "primitive_elements",
    "irredundant_primitive_decompositions",
    "primitive_antichain_decompositions",
    "is_projective_macpherson",
    "is_free",
    "monotone_module",
    "rectify_relation",
    "is_flat_finite",
    "is_flat_by_search",
    "golan_morphism",
    "canonical_form",
    "are_isomorphic",
    "small_presentations",
    "all_posets",
    "finite_lattices",
    "boolean_algebras",
]

MAX_GENERATORS = 12


class BModuleError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class FiniteBModule:
    labels: tuple
    join: tuple  # join[a][b]

    def __post_init__(self):
        n = len(self.labels)
        if n == 0:
            raise BModuleError("a module has at least the element 0")
        if len(self.join) != n or any(len(row) != n for row in self.join):
            raise BModuleError(f"join table must be {n}x{n}")
        J = self.join
        for a in range(n):
            if J[0][a] != a or J[a][0] != a:
                raise BModuleError(f"0 is not neutral for {self.labels[a]}")
            if J[a][a] != a:
                raise BModuleError(f"join is not idempotent at {self.labels[a]}")
            for b in range(n):
                if not 0 <= J[a][b] < n:
                    raise BModuleError(f"join[{a}][{b}] out of range")
                if J[a][b] != J[b][a]:
                    raise BModuleError(f"join is not commutative at ({self.labels[a]}, {self.labels[b]})")
        for a in range(n):
            for b in range(n):
                ab = J[a][b]
                for c in range(n):
                    if J[ab][c] != J[a][J[b][c]]:
                        raise BModuleError("join is not associative")

    @classmethod
    def from_table(cls, labels: Sequence, join: Sequence[Sequence[int]]) -> "FiniteBModule":
        return cls(tuple(str(l) for l in labels), tuple(tuple(int(x) for x in row) for row in join))

    @property
    def size(self) -> int:
        return len(self.labels)

    def leq(self, a: int, b: int) -> bool:
        return self.join[a][b] == b

    def join_all(self, xs: Iterable[int]) -> int:
        out = 0
        for x in xs:
            out = self.join[out][x]
        return out

    def top(self) -> int:
        return self.join_all(range(self.size))

    def index(self, label) -> int:
        if isinstance(label, int) and not isinstance(label, bool):
            if not 0 <= label < self.size:
                raise BModuleError(f"element index {label} out of range")
            return label
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise BModuleError(f"unknown element {label!r}") from None

    def hasse_edges(self) -> list:
        """Covering pairs (a, b), a < b with nothing strictly between."""
        n = self.size
        out = []
        for a in range(n):
            for b in range(n):
                if a == b or not self.leq(a, b):
                    continue
                if not any(c not in (a, b) and self.leq(a, c) and self.leq(c, b) for c in range(n)):
                    out.append((a, b))
        return out

    def to_json(self) -> dict:
        return {
            "elements": list(self.labels),
            "join": [list(r) for r in self.join],
            "hasse": [[self.labels[a], self.labels[b]] for a, b in self.hasse_edges()],
        }


def free_module(m: int) -> FiniteBModule:
    """B^m."""
    return module_from_presentation(BPresentation(m, ()))


def chain_module(n: int) -> FiniteBModule:
    """The chain 0 < c1 < ... < c_{n-1}."""
    labels = ["0"] + [f"c{i}" for i in range(1, n)]
    return FiniteBModule.from_table(labels, [[max(a, b) for b in range(n)] for a in range(n)])


# -- presentations ----------------------------------------------------------

@dataclass(frozen=True)
class BPresentation:
    m: int
    relations: tuple  # of (frozenset, frozenset) over 1..m

    def __post_init__(self):
        if self.m < 0:
            raise BModuleError("generator count must be nonnegative")
        rels = []
        for rel in self.relations:
            if len(rel) != 2:
                raise BModuleError(f"a relation is a pair of subsets, got {rel!r}")
            pair = []
            for side in rel:
                s = frozenset(int(i) for i in side)
                if any(not 1 <= i <= self.m for i in s):
                    raise BModuleError(f"relation subset {sorted(s)} not within 1..{self.m}")
                pair.append(s)
            rels.append(tuple(pair))
        object.__setattr__(self, "relations", tuple(rels))

    @staticmethod
    def mask(s: Iterable[int]) -> int:
        out = 0
        for i in s:
            out |= 1 << (i - 1)
        return out

    def to_json(self) -> dict:
        return {"generators": self.m, "relations": [[sorted(a), sorted(b)] for a, b in self.relations]}


def _mask_label(mask: int) -> str:
    if mask == 0:
        return "0"
    return "+".join(f"x{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1)


def module_from_presentation(p: BPresentation) -> FiniteBModule:
    """The free semilattice on m generators modulo the congruence generated by the relations."""
    if p.m > MAX_GENERATORS:
        raise BModuleError(f"at most {MAX_GENERATORS} generators (2^m states), got {p.m}")
    N = 1 << p.m
    parent = list(range(N))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[max(ra, rb)] = min(ra, rb)
        return True

    for a, b in p.relations:
        union(p.mask(a), p.mask(b))
    # fixpoint: a congruence must be compatible with joining any generator
    changed = True
    while changed:
        changed = False
        for x in range(N):
            rx = find(x)
            if rx == x:
                continue
            for g in range(p.m):
                bit = 1 << g
                if union(x | bit, rx | bit):
                    changed = True
    classes: dict = {}
    for x in range(N):
        classes.setdefault(find(x), []).append(x)
    # each class is closed under union (x ~ y implies x ~ x|y), so its largest member is the union
    tops = sorted((max(c) for c in classes.values()), key=lambda t: (_popcount(t), t))
    rep = {find(t): i for i, t in enumerate(tops)}
    J = [[rep[find(a | b)] for b in tops] for a in tops]
    return FiniteBModule.from_table([_mask_label(t) for t in tops], J)


def macpherson_module() -> FiniteBModule:
    """Three generators with x1+x2 ~ x1+x3 ~ x2+x3."""
    return module_from_presentation(BPresentation(3, (({1, 2}, {1, 3}), ({1, 3}, {2, 3}))))


# -- primitives and decompositions -----------------------------------------

def primitive_elements(M: FiniteBModule) -> list:
    """Nonzero join-irreducible elements, in index order."""
    out = []
    for x in range(1, M.size):
        below = M.join_all(y for y in range(M.size) if y != x and M.leq(y, x))
        if below != x:
            out.append(x)
    return out


def irredundant_primitive_decompositions(M: FiniteBModule, x: int) -> list:
    """Inclusion-minimal sets of primitives joining to x, as sorted tuples."""
    prims = [p for p in primitive_elements(M) if M.leq(p, x)]
    if len(prims) > 20:
        raise BModuleError("too many primitives below the element")
    out = []
    for k in range(len(prims) + 1):
        for combo in itertools.combinations(prims, k):
            if M.join_all(combo) != x:
                continue
            # minimality: drop any one member and the join must change (join is monotone)
            if all(M.join_all(c for c in combo if c != d) != x for d in combo):
                out.append(combo)
    return out


def primitive_antichain_decompositions(M: FiniteBModule, x: int) -> list:
    """Antichains of primitives joining to x, as sorted tuples.

    Every inclusion-minimal family is an antichain, but not conversely: in the
    MacPherson module ``{x1, x2, x3}`` is an antichain joining to 1 that is not
    minimal.
    """
    prims = [p for p in primitive_elements(M) if M.leq(p, x)]
    if len(prims) > 20:
        raise BModuleError("too many primitives below the element")
    out = []
    for k in range(len(prims) + 1):
        for combo in itertools.combinations(prims, k):
            if M.join_all(combo) != x:
                continue
            if all(not M.leq(a, b) for a in combo for b in combo if a != b):
                out.append(combo)
    return out


def is_projective_macpherson(M: FiniteBModule) -> bool:
    """Every element has exactly one primitive decomposition without order relations.

    Uniqueness is taken over antichains. Uniqueness of inclusion-minimal
    families alone is weaker: the lattice of
    ``<x1, x2, x3 | x1+x2 ~ x1+x2+x3>`` has unique minimal decompositions
    but is not distributive, and a relation on it fails to rectify.
    """
    return all(len(primitive_antichain_decompositions(M, x)) == 1 for x in range(M.size))


def is_free(M: FiniteBModule) -> Optional[list]:
    """The primitives, if they form a basis."""
    prims = primitive_elements(M)
    if M.size != 1 << len(prims):
        return None
    seen = {M.join_all(c) for k in range(len(prims) + 1) for c in itertools.combinations(prims, k)}
    return prims if len(seen) == M.size else None


def is_flat_finite(M: FiniteBModule) -> bool:
    # finite modules are finitely presented, where flat and projective agree
    return is_projective_macpherson(M)


# -- posets and monotone modules --------------------------------------------

@dataclass(frozen=True)
class FinitePoset:
    elements: tuple
    leq_pairs: frozenset  # (a, b) meaning a <= b, by element index; reflexive and transitive

    @classmethod
    def from_relations(cls, elements: Sequence, relations: Iterable) -> "FinitePoset":
        """Order generated by the given pairs (reflexive-transitive closure), antisymmetry checked."""
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise BModuleError("poset elements must be distinct")
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        rel = [[i == j for j in range(n)] for i in range(n)]
        for a, b in relations:
            try:
                rel[idx[str(a)]][idx[str(b)]] = True
            except KeyError as e:
                raise BModuleError(f"unknown poset element {e.args[0]!r}") from None
        for k in range(n):
            for i in range(n):
                if rel[i][k]:
                    for j in range(n):
                        if rel[k][j]:
                            rel[i][j] = True
        for i in range(n):
            for j in range(i + 1, n):
                if rel[i][j] and rel[j][i]:
                    raise BModuleError(f"not antisymmetric: {elements[i]} <= {elements[j]} <= {elements[i]}")
        pairs = frozenset((i, j) for i in range(n) for j in range(n) if rel[i][j])
        return cls(elements, pairs)

    def __post_init__(self):
        n = len(self.elements)
        R = self.leq_pairs
        for i in range(n):
            if (i, i) not in R:
                raise BModuleError("order must be reflexive")
        for a, b in R:
            if a != b and (b, a) in R:
                raise BModuleError("order must be antisymmetric")
            for c in range(n):
                if (b, c) in R and (a, c) not in R:
                    raise BModuleError("order must be transitive")

    @property
    def size(self) -> int:
        return len(self.elements)

    def leq(self, a: int, b: int) -> bool:
        return (a, b) in self.leq_pairs

    def is_discrete(self) -> bool:
        return all(a == b for a, b in self.leq_pairs)

    def up_set(self, x: int) -> int:
        return sum(1 << y for y in range(self.size) if self.leq(x, y))

    def to_json(self) -> dict:
        return {
            "elements": list(self.elements),
            "relations": sorted([self.elements[a], self.elements[b]] for a, b in self.leq_pairs if a != b),
        }


def monotone_module(P: FinitePoset) -> FiniteBModule:
    """Monotone maps P -> B (i.e. up-sets) under pointwise join."""
    if P.size > 12:
        raise BModuleError(f"poset too large ({P.size} > 12)")
    n = P.size
    ups = []
    for mask in range(1 << n):
        if all(not (mask >> a & 1) or (mask >> b & 1) for a, b in P.leq_pairs):
            ups.append(mask)
    ups.sort(key=lambda s: (_popcount(s), s))
    names = ["{" + ",".join(P.elements[i] for i in range(n) if s >> i & 1) + "}" for s in ups]
    pos = {s: i for i, s in enumerate(ups)}
    J = [[pos[a | b] for b in ups] for a in ups]
    return FiniteBModule.from_table(names, J)


def all_posets(n: int) -> list:
    """All partial orders on {0..n-1} (labelled)."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = []
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if bits >> k & 1}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        leq = frozenset(rel | {(i, i) for i in range(n)})
        out.append(FinitePoset(tuple(str(i + 1) for i in range(n)), leq))
    return out


# -- equational criterion ---------------------------------------------------

@dataclass(frozen=True)
class RectificationWitness:
    """Columns of a: ``columns[k]`` is the support of column k; ``y[k]`` the element."""

    columns: tuple
    y: tuple

    def matrix(self, m: int) -> list:
        return [[int(i in c) for c in self.columns] for i in range(m)]

    def to_json(self, M: FiniteBModule) -> dict:
        return {
            "n": len(self.y),
            "y": [M.labels[v] for v in self.y],
            "a": self.matrix(max((max(c) for c in self.columns), default=-1) + 1),
        }


def rectify_relation(M: FiniteBModule, r: Sequence[int], s: Sequence[int], x: Sequence[int]):
    """Search a in B^{m x n}, y in M^n with x = a y and r a = s a.

    Returns a ``RectificationWitness`` or ``None``. The answer is definitive.
    A column (support c, element y) can be used exactly when r and s meet c
    alike and y <= x_i for every i in c. Taking every such column at once
    gives the largest possible a y, so a witness exists iff that maximal
    family already reaches each x_i; equal y-columns then merge (joining
    supports keeps both properties), leaving at most |M| columns.
    """
    m = len(x)
    if len(r) != m or len(s) != m:
        raise BModuleError("r, s and x must have the same length")
    r = [1 if v else 0 for v in r]
    s = [1 if v else 0 for v in s]
    x = [M.index(v) for v in x]
    lhs = M.join_all(x[i] for i in range(m) if r[i])
    rhs = M.join_all(x[i] for i in range(m) if s[i])
    if lhs != rhs:
        raise BModuleError(
            f"relation does not hold: {M.labels[lhs]} != {M.labels[rhs]}"
        )
    merged: dict = {}
    for c in range(1, 1 << m):
        supp = [i for i in range(m) if c >> i & 1]
        if any(r[i] for i in supp) != any(s[i] for i in supp):
            continue
        for y in range(1, M.size):
            if all(M.leq(y, x[i]) for i in supp):
                merged[y] = merged.get(y, 0) | c
    for i in range(m):
        if M.join_all(y for y, c in merged.items() if c >> i & 1) != x[i]:
            return None
    ys = tuple(sorted(merged))
    cols = tuple(tuple(i for i in range(m) if merged[y] >> i & 1) for y in ys)
    return RectificationWitness(cols, ys)


def is_flat_by_search(M: FiniteBModule, max_len: int = 3):
    """Rectify every relation r x = s x with r, s in B^m, m <= max_len.

    Returns ``(True, None)`` or ``(False, (r, s, x))`` for the first failure.
    """
    for m in range(1, max_len + 1):
        subsets = list(itertools.product((0, 1), repeat=m))
        for x in itertools.product(range(M.size), repeat=m):
            for r in subsets:
                lhs = M.join_all(x[i] for i in range(m) if r[i])
                for s in subsets:
                    if s <= r:
                        continue  # symmetric; r == s is trivially rectifiable
                    if M.join_all(x[i] for i in range(m) if s[i]) != lhs:
                        continue
                    if rectify_relation(M, r, s, x) is None:
                        return False, (r, s, x)
    return True, None


# -- isomorphism ------------------------------------------------------------

def _ji_family(M: FiniteBModule):
    prims = primitive_elements(M)
    fam = []
    for x in range(M.size):
        fam.append(sum(1 << k for k, p in enumerate(prims) if M.leq(p, x)))
    return prims, fam


def canonical_form(M: FiniteBModule) -> tuple:
    """An isomorphism invariant that is complete: finite lattices are determined
    by the sets of join-irreducibles below each element."""
    prims, fam = _ji_family(M)
    k = len(prims)
    if k > 8:
        raise BModuleError("canonical form is limited to 8 join-irreducibles")
    best = None
    for perm in itertools.permutations(range(k)):
        img = sorted(sum(1 << perm[b] for b in range(k) if f >> b & 1) for f in fam)
        t = tuple(img)
        if best is None or t < best:
            best = t
    return (k, best)


def are_isomorphic(M: FiniteBModule, N: FiniteBModule) -> bool:
    return M.size == N.size and canonical_form(M) == canonical_form(N)


def small_presentations(max_gens: int = 3, max_relations: int = 2):
    """All presentations with m <= max_gens generators and up to max_relations relations."""
    for m in range(1, max_gens + 1):
        subsets = [frozenset(c) for k in range(m + 1) for c in itertools.combinations(range(1, m + 1), k)]
        pairs = [(a, b) for a, b in itertools.combinations(subsets, 2)]
        for k in range(max_relations + 1):
            for rels in itertools.combinations(pairs, k):
                yield BPresentation(m, tuple(rels))


# -- algebras ---------------------------------------------------------------

@dataclass(frozen=True)
class BAlgebra:
    """A commutative B-algebra: a finite module with a bilinear unital product."""

    module: FiniteBModule
    mul: tuple
    one: int

    def __post_init__(self):
        M, T, u = self.module, self.mul, self.one
        n = M.size
        if len(T) != n or any(len(row) != n for row in T):
            raise BModuleError(f"multiplication table must be {n}x{n}")
        if not 0 <= u < n:
            raise BModuleError("unit out of range")
        for a in range(n):
            if T[u][a] != a or T[a][u] != a:
                raise BModuleError(f"{M.labels[u]} is not a unit")
            if T[0][a] != 0 or T[a][0] != 0:
                raise BModuleError("0 must be absorbing")
            for b in range(n):
                if T[a][b] != T[b][a]:
                    raise BModuleError("multiplication must be commutative")
                for c in range(n):
                    if T[T[a][b]][c] != T[a][T[b][c]]:
                        raise BModuleError("multiplication is not associative")
                    if T[a][M.join[b][c]] != M.join[T[a][b]][T[a][c]]:
                        raise BModuleError("multiplication does not distribute over join")

    @property
    def size(self) -> int:
        return self.module.size

    def to_json(self) -> dict:
        d = self.module.to_json()
        d.pop("hasse")
        d["mul"] = [list(r) for r in self.mul]
        d["one"] = self.module.labels[self.one]
        return d


def golan_morphism(A: BAlgebra) -> dict:
    """A semiring map A -> B, as a dict element index -> 0/1.

    Searches kernel candidates K (containing 0, closed under join, absorbing
    under products) whose complement contains 1 and is closed under products,
    smallest first, and returns the first one whose indicator is a morphism.
    """
    M = A.module
    n = M.size
    if n == 1:
        raise BModuleError("the zero algebra has no morphism to B")
    if n > 20:
        raise BModuleError("golan_morphism searches at most 20 elements")
    cap = search_cap()
    rest = [x for x in range(1, n) if x != A.one]
    tried = 0
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            tried += 1
            if tried > cap:
                raise BModuleError("search cap exceeded")
            K = {0, *combo}
            if any(M.join[a][b] not in K for a in K for b in K):
                continue
            if any(A.mul[a][b] not in K for a in K for b in range(n)):
                continue
            comp = [x for x in range(n) if x not in K]
            if any(A.mul[a][b] in K for a in comp for b in comp):
                continue
            f = {x: int(x not in K) for x in range(n)}
            if _is_morphism(A, f):
                return f
    raise AssertionError("no morphism to B found; the algebra tables must be inconsistent")


def _is_morphism(A: BAlgebra, f: dict) -> bool:
    M = A.module
    if f[0] != 0 or f[A.one] != 1:
        return False
    for a in range(M.size):
        for b in range(M.size):
            if f[M.join[a][b]] != (f[a] | f[b]) or f[A.mul[a][b]] != (f[a] & f[b]):
                return False
    return True


def finite_lattices(n: int) -> list:
    """Finite lattices with n elements up to isomorphism, as modules (0 bottom, n-1 top)."""
    if n == 1:
        return [FiniteBModule.from_table(["0"], [[0]])]
    if n == 2:
        return [chain_module(2)]
    mid = n - 2
    found: dict = {}
    for P in all_posets(mid):
        leq = [[False] * n for _ in range(n)]
        for i in range(n):
            leq[0][i] = True
            leq[i][n - 1] = True
            leq[i][i] = True
        for a, b in P.leq_pairs:
            leq[a + 1][b + 1] = True
        J = [[0] * n for _ in range(n)]
        ok = True
        for a in range(n):
            for b in range(n):
                ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
                least = [c for c in ubs if all(leq[c][d] for d in ubs)]
                if len(least) != 1:
                    ok = False
                    break
                J[a][b] = least[0]
            if not ok:
                break
        if not ok:
            continue
        M = FiniteBModule.from_table(["0"] + [f"e{i}" for i in range(1, n - 1)] + ["1"], J)
        key = canonical_form(M)
        found.setdefault(key, M)
    return [found[k] for k in sorted(found)]


def _algebras_on(M: FiniteBModule, unit: int) -> list:
    """All commutative unital bilinear products on M with the given unit."""
    n = M.size
    prims = primitive_elements(M)
    below = [[p for p in prims if M.leq(p, x)] for x in range(n)]
    pairs = [(p, q) for i, p in enumerate(prims) for q in prims[i:]]
    out = []
    assign: dict = {}

    def prod(p, q):
        return assign.get((p, q) if p <= q else (q, p))

    def extend():
        T = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                T[a][b] = M.join_all(prod(p, q) for p in below[a] for q in below[b])
        return T

    unit_below = below[unit]

    def consistent_partial():
        # p . 1 = p, read off the primitives below the unit
        for p in prims:
            vals = [prod(p, q) for q in unit_below]
            if None not in vals and M.join_all(vals) != p:
                return False
        # monotonicity in each argument among assigned primitive products
        for (p, q), v in assign.items():
            for (p2, q2), v2 in assign.items():
                if ((M.leq(p, p2) and M.leq(q, q2)) or (M.leq(p, q2) and M.leq(q, p2))) and not M.leq(v, v2):
                    return False
        return True

    def rec(k):
        if k == len(pairs):
            T = extend()
            try:
                out.append(BAlgebra(M, tuple(tuple(r) for r in T), unit))
            except BModuleError:
                pass
            return
        p, q = pairs[k]
        if p == unit or q == unit:
            choices = [q if p == unit else p]
        else:
            # q <= 1 forces p q <= p 1 = p
            choices = [
                v for v in range(n)
                if (not M.leq(q, unit) or M.leq(v, p)) and (not M.leq(p, unit) or M.leq(v, q))
            ]
        for v in choices:
            assign[(p, q)] = v
            if consistent_partial():
                rec(k + 1)
            del assign[(p, q)]

    rec(0)
    return out


def boolean_algebras(max_size: int = 6) -> list:
    """Every nonzero commutative B-algebra with at most max_size elements,
    one lattice per isomorphism class, every product table on it."""
    out = []
    for n in range(2, max_size + 1):
        for M in finite_lattices(n):
            for u in range(1, n):
                out.extend(_algebras_on(M, u))
    return out
