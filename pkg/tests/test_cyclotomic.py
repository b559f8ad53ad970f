import json
import random
from fractions import Fraction

import pytest

from dyadicl.cyclotomic import (
    CyclotomicNumber,
    DyadicValuation,
    LevelMismatchError,
    add,
    congruent_mod,
    cyclo_from_rational,
    embed_to_level,
    field_norm,
    galois_conjugate,
    mul,
    neg,
    one,
    ord2,
    root_of_unity,
    sub,
    zero,
)


def _random_element(rng, level, nonzero=False):
    dim = 1 if level <= 1 else 1 << (level - 1)
    while True:
        coeffs = tuple(
            Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(dim)
        )
        el = CyclotomicNumber(level, coeffs)
        if not nonzero or not el.is_zero():
            return el


# -- construction ----------------------------------------------------------


def test_from_rational_embeds_constant():
    el = cyclo_from_rational(1, 3)
    assert el.coeffs == (Fraction(1), Fraction(0), Fraction(0), Fraction(0))


def test_from_rational_zero():
    assert cyclo_from_rational(0, 5).is_zero()


def test_from_rational_fraction_at_level_two():
    el = cyclo_from_rational(Fraction(-1, 12), 2)
    assert el.coeffs == (Fraction(-1, 12), Fraction(0))


def test_vector_length_is_validated():
    with pytest.raises(ValueError):
        CyclotomicNumber(3, (Fraction(1),))


def test_root_of_unity_compatible_system():
    assert root_of_unity(3, 2, 1).coeffs == (0, 0, 1, 0)
    assert root_of_unity(3, 1, 1) == cyclo_from_rational(-1, 3)
    assert root_of_unity(4, 4, 8) == cyclo_from_rational(-1, 4)


def test_root_of_unity_finer_than_level_rejected():
    with pytest.raises(ValueError):
        root_of_unity(2, 3, 1)


# -- ring operations -------------------------------------------------------


def test_gaussian_norm_identity():
    i = root_of_unity(2, 2, 1)
    assert mul(sub(1, i), add(1, i)) == cyclo_from_rational(2, 2)


def test_square_of_zeta8_is_zeta4():
    z8 = root_of_unity(3, 3, 1)
    assert mul(z8, z8) == root_of_unity(3, 2, 1)


def test_additive_identity():
    rng = random.Random(7)
    a = _random_element(rng, 4)
    assert add(a, zero(4)) == a


def test_level_mismatch_is_an_error():
    with pytest.raises(LevelMismatchError):
        add(one(2), root_of_unity(3, 3, 1))


def test_rational_operands_lift_to_any_level():
    a = root_of_unity(3, 3, 1)
    assert add(a, 1) == add(a, one(3))
    assert mul(cyclo_from_rational(3, 0), a) == mul(a, 3)


@pytest.mark.parametrize("level", range(7))
def test_ring_axioms_on_random_triples(level):
    rng = random.Random(1000 + level)
    for _ in range(100):
        a = _random_element(rng, level)
        b = _random_element(rng, level)
        c = _random_element(rng, level)
        assert mul(a, b) == mul(b, a)
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


# -- embeddings -------------------------------------------------------------


def test_embed_spreads_by_stride():
    el = add(1, root_of_unity(2, 2, 1))
    up = embed_to_level(el, 4)
    assert up.coeffs == tuple(Fraction(x) for x in (1, 0, 0, 0, 1, 0, 0, 0))


def test_embed_constant_stays_constant():
    for level in range(6):
        up = embed_to_level(cyclo_from_rational(7, 0), level)
        assert up.is_rational() and up.as_rational() == 7


def test_embed_is_a_ring_homomorphism():
    rng = random.Random(5)
    for _ in range(20):
        a = _random_element(rng, 3)
        b = _random_element(rng, 3)
        assert embed_to_level(mul(a, b), 5) == mul(embed_to_level(a, 5), embed_to_level(b, 5))


def test_embed_downward_rejected():
    with pytest.raises(LevelMismatchError):
        embed_to_level(root_of_unity(3, 3, 1), 2)


# -- norms -------------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 7))
def test_norm_of_one_minus_zeta(n):
    assert field_norm(sub(1, root_of_unity(n, n, 1))) == 2


def test_norm_of_two_at_level_three():
    assert field_norm(cyclo_from_rational(2, 3)) == 16


def test_norm_multiplicativity():
    rng = random.Random(11)
    for level in (2, 3, 4, 5):
        for _ in range(10):
            a = _random_element(rng, level)
            b = _random_element(rng, level)
            assert field_norm(mul(a, b)) == field_norm(a) * field_norm(b)


def test_norm_positive_on_positive_rationals():
    for level in range(7):
        assert field_norm(cyclo_from_rational(Fraction(3, 5), level)) > 0


def test_norm_power_under_embedding():
    rng = random.Random(13)
    for _ in range(10):
        a = _random_element(rng, 2)
        assert field_norm(embed_to_level(a, 5)) == field_norm(a) ** 8


# -- valuations ---------------------------------------------------------------


def test_ord2_normalization():
    for level in range(7):
        assert ord2(cyclo_from_rational(2, level)) == 1


def test_ord2_of_one_minus_zeta4():
    assert ord2(sub(1, root_of_unity(2, 2, 1))) == Fraction(1, 2)


@pytest.mark.parametrize("n", range(2, 7))
def test_ord2_of_one_minus_zeta_2n(n):
    assert ord2(sub(1, root_of_unity(n, n, 1))) == Fraction(1, 1 << (n - 1))


@pytest.mark.parametrize("n", range(2, 7))
def test_ord2_of_ramified_product(n):
    # brute-force product of (1 - zeta_{2^k}) for k = 2..n, then ord2
    prod = one(n)
    for k in range(2, n + 1):
        prod = mul(prod, sub(1, root_of_unity(n, k, 1)))
    assert ord2(prod) == 1 - Fraction(1, 1 << (n - 1))


def test_ord2_of_zero_is_infinite():
    v = ord2(zero(4))
    assert v.is_infinite
    assert str(v) == "inf"
    with pytest.raises(ValueError):
        v.finite()


def test_ord2_multiplicative_and_ultrametric():
    rng = random.Random(17)
    for level in (0, 2, 3, 4):
        for _ in range(15):
            a = _random_element(rng, level, nonzero=True)
            b = _random_element(rng, level, nonzero=True)
            va, vb = ord2(a), ord2(b)
            assert ord2(mul(a, b)) == va + vb
            s = add(a, b)
            vs = ord2(s)
            assert vs >= min(va, vb)
            if va != vb:
                assert vs == min(va, vb)


def test_ord2_invariant_under_embedding():
    rng = random.Random(19)
    for _ in range(10):
        a = _random_element(rng, 3, nonzero=True)
        assert ord2(a) == ord2(embed_to_level(a, 6))


# -- Galois action -------------------------------------------------------------


def test_galois_is_a_ring_automorphism():
    rng = random.Random(23)
    for t in (3, 5, 7, 9, 15):
        for _ in range(10):
            a = _random_element(rng, 4)
            b = _random_element(rng, 4)
            assert galois_conjugate(mul(a, b), t) == mul(
                galois_conjugate(a, t), galois_conjugate(b, t)
            )
            assert galois_conjugate(add(a, b), t) == add(
                galois_conjugate(a, t), galois_conjugate(b, t)
            )


def test_galois_preserves_ord2_and_fixes_rationals():
    rng = random.Random(29)
    for t in (3, 5, 11):
        for _ in range(10):
            a = _random_element(rng, 4, nonzero=True)
            assert ord2(galois_conjugate(a, t)) == ord2(a)
    assert galois_conjugate(cyclo_from_rational(Fraction(5, 3), 4), 7) == cyclo_from_rational(
        Fraction(5, 3), 4
    )


def test_galois_requires_odd_exponent():
    with pytest.raises(ValueError):
        galois_conjugate(one(3), 4)


# -- congruences ----------------------------------------------------------------


def test_congruent_to_self():
    a = root_of_unity(4, 3, 5)
    assert congruent_mod(a, a, cyclo_from_rational(64, 4))


def test_valuation_comparison_decides_congruence():
    i = root_of_unity(2, 2, 1)
    a = sub(1, i)  # ord2 = 1/2 < 1
    assert not congruent_mod(a, zero(2), cyclo_from_rational(2, 2))
    assert congruent_mod(mul(a, a), zero(2), cyclo_from_rational(2, 2))


def test_weight_two_value_congruent_to_uniformizer():
    # frozen: the level-2 L-value at -1 is -3 + zeta_4
    i = root_of_unity(2, 2, 1)
    lval = add(-3, i)
    assert congruent_mod(lval, sub(1, i), 2)


def test_zero_modulus_rejected():
    with pytest.raises(ValueError):
        congruent_mod(one(2), one(2), zero(2))


# -- valuation type and serialization --------------------------------------------


def test_valuation_ordering_and_formatting():
    assert DyadicValuation(Fraction(3, 2)) > 1
    assert DyadicValuation.infinite() > DyadicValuation(10**9)
    assert str(DyadicValuation(Fraction(-3, 4))) == "-3/4"
    assert DyadicValuation(1) + Fraction(1, 2) == Fraction(3, 2)


def test_json_round_trip():
    rng = random.Random(31)
    for level in (0, 1, 2, 4):
        a = _random_element(rng, level)
        blob = json.dumps(a.to_dict())
        assert CyclotomicNumber.from_dict(json.loads(blob)) == a


def test_str_rendering_is_stable():
    assert str(add(-3, root_of_unity(2, 2, 1))) == "-3 + z4"
    assert str(neg(one(0))) == "-1"
