from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from semimod.quadratic import (
    FractionalIdeal,
    QuadError,
    QuadField,
    SignTwistedIdeal,
    class_group,
    fundamental_unit,
    ideal_inverse,
    ideal_mul,
    is_principal_totally_positive,
    is_reflexive,
    minkowski_bound,
    module_dual,
    module_patch,
    narrow_class_group,
    non_invertibility_certificate,
    plus_part,
    principal_generator,
    principal_ideal,
    prime_ideals_up_to,
    refl_modules_isomorphic,
    refl_pic_group,
    squarefree,
)

from oracles import fundamental_unit_bruteforce, narrow_class_number

SMALL_D = [2, 3, 5, 6, 7, 10]
Q3 = QuadField(3)


def L3():
    return SignTwistedIdeal(Q3.unit_ideal(), (1, -1))


def random_ideal(F, rng):
    gens = [F.element(rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(2)]
    gens = [g for g in gens if not g.is_zero()] or [F.one()]
    I = FractionalIdeal.from_generators(F, gens + [g * F.omega() for g in gens])
    return I.scale(F.element(Fraction(1, rng.randint(1, 3))))


def test_field_validation():
    assert QuadField(5).discriminant == 5
    assert QuadField(3).discriminant == 12
    with pytest.raises(QuadError):
        QuadField(4)
    with pytest.raises(QuadError):
        QuadField(1)
    assert not squarefree(12) and squarefree(15)


def test_element_arithmetic_and_signs():
    F = QuadField(3)
    e = F.element(2, 1)
    assert e.norm() == 1
    assert (e * e.conjugate()) == F.one()
    assert e.inverse() == F.element(2, -1)
    assert F.sqrt_d().signs() == (1, -1)
    assert str(e) == "2 + sqrt(3)"
    G = QuadField(5)
    assert G.omega() * G.omega() == G.omega() + G.one()
    assert str(G.omega()) == "(1 + sqrt(5))/2"


def test_ideal_mul_examples():
    I = principal_ideal(Q3.sqrt_d())
    assert ideal_mul(I, Q3.unit_ideal()) == I
    assert ideal_mul(I, I) == principal_ideal(Q3.element(3))
    assert ideal_mul(I, ideal_inverse(I)) == Q3.unit_ideal()


def test_ideal_inverse_examples():
    O = Q3.unit_ideal()
    assert ideal_inverse(O) == O
    assert ideal_inverse(principal_ideal(Q3.element(2))) == principal_ideal(Q3.element(Fraction(1, 2)))
    p = FractionalIdeal.from_generators(Q3, [Q3.element(2), Q3.element(1, 1)])
    assert p.norm() == 2
    assert ideal_mul(p, ideal_inverse(p)) == O


@pytest.mark.parametrize("d", SMALL_D)
def test_ideal_arithmetic_properties(d):
    F = QuadField(d)
    rng = random.Random(d)
    for _ in range(40):
        I, J, K = (random_ideal(F, rng) for _ in range(3))
        assert ideal_mul(I, J) == ideal_mul(J, I)
        assert ideal_mul(ideal_mul(I, J), K) == ideal_mul(I, ideal_mul(J, K))
        assert ideal_mul(I, J).norm() == I.norm() * J.norm()
        assert ideal_mul(I, ideal_inverse(I)) == F.unit_ideal()


def test_fundamental_unit_examples():
    u3 = fundamental_unit(QuadField(3))
    assert u3.unit == QuadField(3).element(2, 1) and u3.norm == 1
    u2 = fundamental_unit(QuadField(2))
    assert u2.unit == QuadField(2).element(1, 1) and u2.norm == -1
    F5 = QuadField(5)
    u5 = fundamental_unit(F5)
    assert u5.unit == F5.omega() and u5.norm == -1


def _sqfree_range(lo, hi):
    return [d for d in range(lo, hi) if squarefree(d)]


def _oracle_unit(F):
    try:
        return fundamental_unit_bruteforce(F.d)
    except RuntimeError:
        return None


@pytest.mark.parametrize("d", _sqfree_range(2, 200))
def test_fundamental_unit_against_oracle(d):
    F = QuadField(d)
    expected = _oracle_unit(F)
    if expected is None:
        pytest.skip("oracle search limit too small for this d")
    x, y, norm = expected
    u = fundamental_unit(F)
    assert u.norm == norm
    if F.half_integral:
        assert u.unit == F.element(Fraction(x - y, 2), y)
    else:
        assert u.unit == F.element(x, y)


@pytest.mark.parametrize("d", _sqfree_range(2, 200))
def test_class_numbers_against_oracle(d):
    F = QuadField(d)
    hplus = narrow_class_number(F.discriminant)
    assert narrow_class_group(F).order == hplus
    wide = class_group(F).order
    assert wide == (hplus if fundamental_unit(F).norm == -1 else hplus // 2)


def test_narrow_examples():
    assert narrow_class_group(QuadField(3)).order == 2
    assert narrow_class_group(QuadField(2)).order == 1
    assert narrow_class_group(QuadField(5)).order == 1


def test_group_table_is_a_group():
    for d in (3, 10, 15, 30, 79):
        G = narrow_class_group(QuadField(d))
        n = G.order
        T = G.table
        assert all(T[0][i] == i for i in range(n))
        assert all(sorted(row) == list(range(n)) for row in T)
        assert all(T[i][j] == T[j][i] for i in range(n) for j in range(n))
        for i, j, k in itertools.product(range(n), repeat=3):
            assert T[T[i][j]][k] == T[i][T[j][k]]


def test_class_group_bound_checks():
    F = QuadField(79)
    with pytest.raises(QuadError):
        class_group(F, bound=1)
    assert minkowski_bound(F) > 4
    assert all(P.norm() <= 4 for P in prime_ideals_up_to(F, 4))


def test_totally_positive_generators():
    assert is_principal_totally_positive(Q3.unit_ideal()) == Q3.one()
    assert is_principal_totally_positive(principal_ideal(Q3.sqrt_d())) is None
    F2 = QuadField(2)
    g = is_principal_totally_positive(principal_ideal(F2.element(1, 1)))
    assert g is not None and g.is_totally_positive()
    assert principal_ideal(g) == principal_ideal(F2.element(1, 1))
    p = FractionalIdeal.from_generators(QuadField(10), [QuadField(10).element(2), QuadField(10).element(0, 1)])
    assert principal_generator(p) is None


def test_plus_part_and_isomorphisms():
    O = Q3.unit_ideal()
    assert plus_part(O) == SignTwistedIdeal(O, (1, 1))
    I = plus_part(principal_ideal(Q3.sqrt_d()))
    beta = refl_modules_isomorphic(I, L3())
    assert beta is not None
    assert principal_ideal(beta) == principal_ideal(Q3.sqrt_d().inverse())
    assert beta.signs() == (1, -1)
    assert refl_modules_isomorphic(I, I) is not None
    assert refl_modules_isomorphic(plus_part(O), I) is None
    two = plus_part(principal_ideal(Q3.element(2)))
    assert refl_modules_isomorphic(plus_part(O), two) == Q3.element(2)


def test_dual_examples():
    O = plus_part(Q3.unit_ideal())
    assert module_dual(O) == O
    two = plus_part(principal_ideal(Q3.element(2)))
    assert module_dual(two) == plus_part(principal_ideal(Q3.element(Fraction(1, 2))))
    assert module_dual(L3()) == L3()


def test_dual_patch_membership():
    # every beta in the dual pairs into O_F+ with every alpha on a patch
    for M in (L3(), plus_part(principal_ideal(Q3.element(2))), SignTwistedIdeal(Q3.unit_ideal(), (-1, 1))):
        D = module_dual(M)
        for x in module_patch(M, 4):
            for y in module_patch(D, 3):
                p = x * y
                assert Q3.unit_ideal().contains(p)
                assert all(s >= 0 for s in p.signs())


@pytest.mark.parametrize("d", SMALL_D)
def test_reflexivity_and_pic(d):
    F = QuadField(d)
    out = refl_pic_group(F)
    G = out["group"]
    assert G.order == narrow_class_group(F).order
    assert G.order == narrow_class_number(F.discriminant)
    for M in out["modules"]:
        assert is_reflexive(M)
        assert module_dual(module_dual(M)) == M
    for i, j in itertools.combinations(range(G.order), 2):
        assert refl_modules_isomorphic(out["modules"][i], out["modules"][j]) is None


@pytest.mark.parametrize("d", SMALL_D)
def test_narrow_equivalence_gives_isomorphic_plus_parts(d):
    F = QuadField(d)
    ideals = [I for I in prime_ideals_up_to(F, 20)]
    ideals += [ideal_mul(I, J) for I, J in itertools.combinations(ideals[:6], 2)]
    ideals = [I for I in ideals if I.norm() <= 20]
    for I, J in itertools.combinations(ideals, 2):
        if is_principal_totally_positive(ideal_mul(I, ideal_inverse(J))) is not None:
            assert refl_modules_isomorphic(plus_part(I), plus_part(J)) is not None
        assert is_reflexive(plus_part(I))


def test_pic_d3():
    out = refl_pic_group(Q3)
    mods = out["modules"]
    assert len(mods) == 2
    assert mods[0] == plus_part(Q3.unit_ideal())
    root3 = plus_part(principal_ideal(Q3.sqrt_d()))
    assert refl_modules_isomorphic(root3, mods[1]) is not None
    assert refl_modules_isomorphic(L3(), mods[1]) is not None
    sq = plus_part(ideal_mul(root3.ideal, root3.ideal))
    assert refl_modules_isomorphic(sq, mods[0]) is not None
    assert refl_pic_group(QuadField(2))["group"].order == 1


def test_plus_part_membership_patch():
    F = QuadField(7)
    I = FractionalIdeal.from_generators(F, [F.element(3), F.element(1, 1)])
    M = plus_part(I)
    e1, e2 = I.basis()
    for m in range(-5, 6):
        for n in range(-5, 6):
            x = e1 * m + e2 * n
            assert M.contains(x) == (I.contains(x) and all(s >= 0 for s in x.signs()))


def test_certificate():
    cert = non_invertibility_certificate(L3())
    assert cert is not None
    assert cert.unit_norm == 1
    assert cert.product_bound == 4
    assert cert.checked_pairs > 0
    L2 = SignTwistedIdeal(QuadField(2).unit_ideal(), (1, -1))
    assert non_invertibility_certificate(L2) is None
    assert non_invertibility_certificate(plus_part(Q3.unit_ideal())) is None
    assert non_invertibility_certificate(SignTwistedIdeal(principal_ideal(Q3.sqrt_d()), (1, -1))) is None


def test_fractional_ideal_validation():
    with pytest.raises(QuadError):
        FractionalIdeal(Q3, Fraction(1), 2, 0, 3)
    with pytest.raises(QuadError):
        SignTwistedIdeal(Q3.unit_ideal(), (1, 0))


def test_json_round_trip():
    F = QuadField(6)
    rng = random.Random(2)
    for _ in range(20):
        I = random_ideal(F, rng)
        assert FractionalIdeal.from_json(F, I.to_json()) == I
