from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from semimod.bundles import (
    ProjectorError,
    boolean_projectors,
    chart_ring,
    counit_surjective,
    dual_projector,
    is_line_bundle,
    kronecker,
    make_projector,
    pic_n_triviality_check,
    random_projector,
    trivializing_cover,
    two_by_two_singular,
    unit_surjective,
)
from semimod.matrices import SemiringMatrix, mat_mul
from semimod.semirings import (
    BOOLEANS,
    INTEGERS,
    MONOTONE_PAIR,
    NATURALS,
    NONNEG_RATIONALS,
    FiniteQuotient,
    Product,
    generates_unit_ideal,
    localize,
)


def P(R, rows):
    return make_projector(SemiringMatrix.from_rows(R, rows))


T = (Fraction(0), Fraction(1))
ZPI = [[2, -1], [2, -1]]


def test_make_projector():
    assert P(NATURALS, [[1, 0], [0, 1]]).n == 2
    assert P(INTEGERS, ZPI).n == 2
    with pytest.raises(ProjectorError):
        P(NATURALS, [[1, 1], [0, 1]])
    with pytest.raises(ProjectorError):
        make_projector(SemiringMatrix.from_rows(NATURALS, [[1, 0]]))


def test_counit_surjective():
    assert counit_surjective(P(NATURALS, [[1, 0], [0, 1]]))
    assert not counit_surjective(P(NATURALS, [[0]]))
    assert not counit_surjective(P(MONOTONE_PAIR, [[T]]))


def test_unit_surjective_examples():
    assert unit_surjective(P(NATURALS, [[1]])) == SemiringMatrix.from_rows(NATURALS, [[1]])
    z = unit_surjective(P(NATURALS, [[1, 1], [0, 0]]))
    assert z == SemiringMatrix.from_rows(NATURALS, [[1, 1], [0, 0]])
    assert unit_surjective(P(BOOLEANS, [[1, 0], [0, 1]])) is None


def _z_ok(pi, z):
    R, n = pi.ring, pi.n
    return all(
        R.mul(z[i, j], pi[k, l]) == R.mul(pi[k, j], pi[i, l])
        for i in range(n) for j in range(n) for k in range(n) for l in range(n)
    )


@pytest.mark.parametrize("n", [1, 2])
def test_unit_surjective_exhaustive_boolean(n):
    for pi in boolean_projectors(n):
        found = unit_surjective(pi)
        brute = [
            SemiringMatrix(BOOLEANS, n, n, e)
            for e in itertools.product((0, 1), repeat=n * n)
            if _z_ok(pi, SemiringMatrix(BOOLEANS, n, n, e))
        ]
        assert (found is not None) == bool(brute)
        if found is not None:
            assert _z_ok(pi, found)


def test_two_by_two_singular():
    assert two_by_two_singular(P(NATURALS, [[1]]))
    assert not two_by_two_singular(P(NATURALS, [[1, 0], [0, 1]]))
    assert two_by_two_singular(P(INTEGERS, ZPI))


def test_is_line_bundle():
    assert is_line_bundle(P(NATURALS, [[1, 0], [0, 0]]))
    assert is_line_bundle(P(INTEGERS, ZPI))
    assert not is_line_bundle(P(MONOTONE_PAIR, [[T]]))
    assert not is_line_bundle(P(NATURALS, [[1, 0], [0, 1]]))


def test_cover_identity_over_naturals():
    (chart,) = trivializing_cover(P(NATURALS, [[1, 0], [0, 0]]))
    assert (chart.i, chart.j) == (0, 0)
    assert chart.chart_ring == NATURALS
    assert chart.column == (1, 0) and chart.row == (1, 0)


def test_cover_integer_example():
    pi = P(INTEGERS, ZPI)
    charts = trivializing_cover(pi)
    assert [(c.i, c.j) for c in charts] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    c = charts[0]
    assert c.chart_ring == localize(INTEGERS, 2)
    assert c.column == (2, 2)
    assert c.row == (1, Fraction(-1, 2))
    assert all(ch.verify(pi) for ch in charts)
    assert charts[1].chart_ring == INTEGERS


def test_cover_boolean_one():
    (chart,) = trivializing_cover(P(BOOLEANS, [[1]]))
    assert chart.chart_ring == BOOLEANS and chart.column == (1,) and chart.row == (1,)


def test_cover_rejects_non_line():
    with pytest.raises(ProjectorError):
        trivializing_cover(P(NATURALS, [[1, 0], [0, 1]]))


def test_chart_rings_for_other_kinds():
    S, phi = chart_ring(FiniteQuotient(3), 2)
    assert S == BOOLEANS and phi(0) == 0 and phi(3) == 1
    assert chart_ring(FiniteQuotient(3), 1)[0] == FiniteQuotient(3)
    S, phi = chart_ring(MONOTONE_PAIR, T)
    assert S == NONNEG_RATIONALS and phi((1, 3)) == 3
    R = Product((NATURALS, BOOLEANS))
    S, phi = chart_ring(R, (2, 0))
    assert S == localize(NATURALS, 2) and phi((3, 1)) == 3
    with pytest.raises(ProjectorError):
        chart_ring(NATURALS, 0)


def test_cover_over_product_and_quotient():
    R = Product((BOOLEANS, BOOLEANS))
    pi = P(R, [[(1, 0), (0, 0)], [(0, 0), (0, 1)]])
    assert is_line_bundle(pi)
    charts = trivializing_cover(pi)
    assert len(charts) == 2 and all(c.verify(pi) for c in charts)
    pi = P(FiniteQuotient(2), [[1, 2], [0, 0]])
    assert all(c.verify(pi) for c in trivializing_cover(pi))


def test_kronecker():
    one = P(NATURALS, [[1]])
    pi = P(NATURALS, [[1, 1], [0, 0]])
    assert kronecker(one, pi).matrix == pi.matrix
    e = P(NATURALS, [[1, 0], [0, 0]])
    k = kronecker(e, e)
    assert k.n == 4 and k.entries() == [1] + [0] * 15
    assert is_line_bundle(k)


def test_kronecker_line_bundles_sampled():
    rng = random.Random(99)
    for _ in range(60):
        R = rng.choice([NATURALS, INTEGERS])
        p = random_projector(R, rng.randint(1, 3), rng)
        q = random_projector(R, rng.randint(1, 3), rng)
        lp, lq = is_line_bundle(p), is_line_bundle(q)
        assert is_line_bundle(kronecker(p, q)) == (lp and lq)


def test_dual_projector():
    sym = P(NATURALS, [[1, 0], [0, 0]])
    assert dual_projector(sym).matrix == sym.matrix
    pi = P(NATURALS, [[1, 1], [0, 0]])
    assert dual_projector(pi).matrix == SemiringMatrix.from_rows(NATURALS, [[1, 0], [1, 0]])
    assert dual_projector(dual_projector(pi)).matrix == pi.matrix


def test_pic_n_examples():
    assert pic_n_triviality_check(P(NATURALS, [[1, 0], [0, 0]])).i == 0
    assert pic_n_triviality_check(P(NATURALS, [[0, 0], [0, 1]])).i == 1
    with pytest.raises(ProjectorError):
        pic_n_triviality_check(P(INTEGERS, ZPI))


def test_pic_n_random():
    rng = random.Random(2024)
    for _ in range(200):
        pi = random_projector(NATURALS, rng.randint(1, 4), rng, line=True)
        iso = pic_n_triviality_check(pi)
        assert iso is not None
        assert sum(r * c for r, c in zip(iso.row, iso.column)) == 1


def test_unit_counit_imply_singular_boolean():
    for n in (1, 2, 3):
        for pi in boolean_projectors(n):
            if counit_surjective(pi) and unit_surjective(pi) is not None:
                assert two_by_two_singular(pi)


def test_unit_counit_imply_singular_random():
    rng = random.Random(17)
    for _ in range(150):
        R = rng.choice([NATURALS, INTEGERS])
        pi = random_projector(R, rng.randint(1, 4), rng)
        if counit_surjective(pi) and unit_surjective(pi) is not None:
            assert two_by_two_singular(pi)


def test_random_cover_charts():
    rng = random.Random(5)
    for _ in range(120):
        R = rng.choice([NATURALS, INTEGERS])
        pi = random_projector(R, rng.randint(1, 4), rng)
        assert mat_mul(pi.matrix, pi.matrix) == pi.matrix
        if not is_line_bundle(pi):
            continue
        charts = trivializing_cover(pi)
        assert generates_unit_ideal(R, [pi[c.i, c.j] for c in charts])
        for c in charts:
            assert c.verify(pi)
            assert c.has_unit_entries()


def test_boolean_line_bundles_are_free():
    for n in (1, 2, 3):
        for pi in boolean_projectors(n):
            if is_line_bundle(pi):
                charts = trivializing_cover(pi)
                assert any(c.i == c.j for c in charts)


def test_boolean_projector_counts():
    # line bundles are u v^T with supports of u and v meeting: 4^n - 3^n of them
    for n in (1, 2, 3):
        assert sum(is_line_bundle(p) for p in boolean_projectors(n)) == 4**n - 3**n
    assert [len(boolean_projectors(n)) for n in (1, 2, 3)] == [2, 11, 123]


def test_random_projector_is_seeded():
    a = random_projector(INTEGERS, 3, random.Random(1))
    b = random_projector(INTEGERS, 3, random.Random(1))
    assert a == b
    with pytest.raises(ProjectorError):
        random_projector(BOOLEANS, 2, random.Random(1))
