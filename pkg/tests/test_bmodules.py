from __future__ import annotations

import itertools

import pytest

from semimod.bmodules import (
    BAlgebra,
    BModuleError,
    BPresentation,
    FiniteBModule,
    FinitePoset,
    all_posets,
    are_isomorphic,
    chain_module,
    finite_lattices,
    free_module,
    golan_morphism,
    irredundant_primitive_decompositions,
    is_flat_by_search,
    is_flat_finite,
    is_free,
    is_projective_macpherson,
    macpherson_module,
    module_from_presentation,
    monotone_module,
    primitive_antichain_decompositions,
    primitive_elements,
    rectify_relation,
)
from semimod.cones import diamond_poset

from corpus import presented_modules


def labels(M, xs):
    return sorted(M.labels[x] for x in xs)


def chain2_poset():
    return FinitePoset.from_relations(["0", "1"], [("0", "1")])


def discrete_poset(n):
    return FinitePoset.from_relations([str(i) for i in range(n)], [])


def pointwise_algebra(P):
    """monotone_module(P) with pointwise products (intersection of up-sets)."""
    M = monotone_module(P)
    sets = []
    for lab in M.labels:
        inner = lab[1:-1]
        sets.append(frozenset(inner.split(",")) if inner else frozenset())
    pos = {s: i for i, s in enumerate(sets)}
    mul = tuple(tuple(pos[a & b] for b in sets) for a in sets)
    return BAlgebra(M, mul, M.top())


def test_module_from_presentation_examples():
    M = macpherson_module()
    assert M.size == 5
    assert M.labels == ("0", "x1", "x2", "x3", "x1+x2+x3")
    B = module_from_presentation(BPresentation(1, ()))
    assert B.size == 2
    C = module_from_presentation(BPresentation(2, (((1,), (1, 2)),)))
    assert C.size == 3
    x1, x2 = C.index("x1+x2"), C.index("x2")
    assert C.leq(x2, x1) and not C.leq(x1, x2)


def test_module_from_presentation_rejects_bad_relation():
    with pytest.raises(BModuleError):
        BPresentation(2, (((1,), (3,)),))


def test_module_axioms_checked():
    with pytest.raises(BModuleError):
        FiniteBModule.from_table(["0", "a"], [[0, 1], [1, 0]])
    with pytest.raises(BModuleError):
        FiniteBModule.from_table(["0", "a", "b"], [[0, 1, 2], [1, 1, 2], [2, 1, 2]])


def test_primitive_elements():
    M = macpherson_module()
    assert labels(M, primitive_elements(M)) == ["x1", "x2", "x3"]
    F = free_module(2)
    assert len(primitive_elements(F)) == 2
    C = chain_module(3)
    assert labels(C, primitive_elements(C)) == ["c1", "c2"]


def test_decompositions():
    M = macpherson_module()
    top = M.top()
    decs = irredundant_primitive_decompositions(M, top)
    assert sorted(labels(M, d) for d in decs) == [["x1", "x2"], ["x1", "x3"], ["x2", "x3"]]
    assert irredundant_primitive_decompositions(M, 0) == [()]
    C = chain_module(3)
    assert [labels(C, d) for d in irredundant_primitive_decompositions(C, C.top())] == [["c2"]]


def test_antichain_decompositions_macpherson():
    M = macpherson_module()
    decs = primitive_antichain_decompositions(M, M.top())
    assert len(decs) == 4


def test_projectivity():
    assert not is_projective_macpherson(macpherson_module())
    assert is_projective_macpherson(chain_module(3))
    for n in (1, 2, 3):
        assert is_projective_macpherson(free_module(n))


def test_minimal_family_uniqueness_is_not_enough():
    # <x1,x2,x3 | x1+x2 ~ x1+x2+x3> has unique minimal decompositions but is not distributive
    M = module_from_presentation(BPresentation(3, (((1, 2), (1, 2, 3)),)))
    assert M.size == 7
    assert all(len(irredundant_primitive_decompositions(M, x)) == 1 for x in range(M.size))
    assert not is_projective_macpherson(M)
    x = [M.index(l) for l in ("x1", "x2", "x3")]
    assert rectify_relation(M, (1, 1, 0), (1, 1, 1), x) is None


def test_is_free():
    F = free_module(2)
    assert len(is_free(F)) == 2
    assert is_free(chain_module(3)) is None
    assert is_free(monotone_module(chain2_poset())) is None


def test_monotone_module():
    assert monotone_module(discrete_poset(2)).size == 4
    assert are_isomorphic(monotone_module(discrete_poset(2)), free_module(2))
    assert are_isomorphic(monotone_module(chain2_poset()), chain_module(3))
    assert monotone_module(diamond_poset()).size == 6


def test_rectify_examples():
    B = free_module(1)
    w = rectify_relation(B, (1, 1), (1, 0), (1, 1))
    assert w is not None
    M = macpherson_module()
    x = [M.index(l) for l in ("x1", "x2", "x3")]
    assert rectify_relation(M, (1, 1, 0), (1, 0, 1), x) is None
    C = chain_module(3)
    a, one = C.index("c1"), C.index("c2")
    w = rectify_relation(C, (1, 1), (0, 1), (a, one))
    assert w is not None
    with pytest.raises(BModuleError):
        rectify_relation(C, (1, 0), (0, 1), (a, one))


def test_rectify_witness_is_valid():
    C = chain_module(3)
    for x in itertools.product(range(C.size), repeat=2):
        for r in itertools.product((0, 1), repeat=2):
            for s in itertools.product((0, 1), repeat=2):
                try:
                    w = rectify_relation(C, r, s, x)
                except BModuleError:
                    continue
                assert w is not None
                for i in range(2):
                    assert C.join_all(y for y, col in zip(w.y, w.columns) if i in col) == x[i]
                for col in w.columns:
                    assert any(r[i] for i in col) == any(s[i] for i in col)


def test_flatness():
    assert not is_flat_finite(macpherson_module())
    assert is_flat_finite(free_module(3))
    assert is_flat_finite(monotone_module(chain2_poset()))
    ok, failure = is_flat_by_search(macpherson_module())
    assert not ok and failure is not None


def test_projective_iff_rectifiable_on_presented_modules():
    mods = presented_modules()
    assert len(mods) == 13
    for M in mods:
        assert is_projective_macpherson(M) == is_flat_by_search(M)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_lattices_and_projectivity(n):
    lats = finite_lattices(n)
    assert len(lats) == [1, 1, 1, 2, 5, 15][n - 1]
    for M in lats:
        if is_free(M) is not None:
            assert is_projective_macpherson(M)
        if n <= 5:
            assert is_projective_macpherson(M) == is_flat_by_search(M)[0]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_monotone_modules_of_posets(n):
    for P in all_posets(n):
        M = monotone_module(P)
        assert is_projective_macpherson(M)
        assert (is_free(M) is not None) == P.is_discrete()
        prims = {M.labels[p] for p in primitive_elements(M)}
        ups = {"{" + ",".join(P.elements[i] for i in range(n) if P.up_set(x) >> i & 1) + "}" for x in range(n)}
        assert prims == ups


def test_all_posets_counts():
    assert [len(all_posets(n)) for n in (1, 2, 3, 4)] == [1, 3, 19, 219]


def test_poset_antisymmetry_checked():
    with pytest.raises(BModuleError):
        FinitePoset.from_relations(["a", "b"], [("a", "b"), ("b", "a")])


def test_golan_examples():
    B = BAlgebra(free_module(1), ((0, 0), (0, 1)), 1)
    assert golan_morphism(B) == {0: 0, 1: 1}
    F = free_module(2)
    # B x B with coordinatewise products
    mul = tuple(tuple(a & b for b in range(4)) for a in range(4))
    f = golan_morphism(BAlgebra(F, mul, 3))
    assert f[0] == 0 and f[3] == 1 and f[1] + f[2] == 1
    A = pointwise_algebra(chain2_poset())
    f = golan_morphism(A)
    # evaluation at the top element 1: exactly the up-sets containing it map to 1
    assert [f[i] for i in range(A.size)] == [int("1" in lab) for lab in A.module.labels]


def test_golan_rejects_zero_algebra():
    Z = BAlgebra(FiniteBModule.from_table(["0"], [[0]]), ((0,),), 0)
    with pytest.raises(BModuleError):
        golan_morphism(Z)


def test_algebra_validation():
    F = free_module(1)
    with pytest.raises(BModuleError):
        BAlgebra(F, ((0, 1), (1, 1)), 1)


def _brute_algebras(M):
    n = M.size
    count = 0
    for u in range(1, n):
        for flat in itertools.product(range(n), repeat=n * n):
            mul = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
            try:
                BAlgebra(M, mul, u)
            except BModuleError:
                continue
            count += 1
    return count


@pytest.mark.parametrize("n", [2, 3])
def test_algebra_corpus_complete_for_small_sizes(n):
    from semimod.bmodules import boolean_algebras

    (M,) = finite_lattices(n)
    got = sum(1 for A in boolean_algebras(n) if A.size == n)
    assert got == _brute_algebras(M)
