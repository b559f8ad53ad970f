import random
from fractions import Fraction
from math import gcd

import pytest

from dyadicl.characters import (
    CharSpec,
    char_eval,
    char_monomials,
    chi_eval,
    conductor,
    frobenius_constant,
    fundamental_discriminant,
    kronecker_symbol,
    psi_eval,
)
from dyadicl.cyclotomic import (
    cyclo_from_rational,
    mul,
    neg,
    one,
    ord2,
    root_of_unity,
    sub,
    zero,
)


def _legendre(a: int, p: int) -> int:
    """Independent oracle: Euler's criterion for an odd prime p."""
    r = pow(a % p, (p - 1) // 2, p)
    return 0 if r == 0 else (1 if r == 1 else -1)


# -- Kronecker / psi ------------------------------------------------------------


def test_kronecker_matches_euler_criterion():
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        for a in range(-30, 31):
            assert kronecker_symbol(a, p) == _legendre(a, p), (a, p)


def test_psi5_at_two_is_minus_one():
    # oracle: the squares mod 5 are {1, 4}; 2 is a non-residue
    assert psi_eval(5, 2) == -1


def test_psi_vanishes_exactly_on_discriminant_divisors():
    for d in (3, 5, 10, 15, 21):
        disc = fundamental_discriminant(d)
        for a in range(1, 3 * disc):
            assert (psi_eval(d, a) == 0) == (gcd(a, disc) > 1)


def test_psi_multiplicative_in_the_twist():
    for a in range(1, 200):
        if gcd(a, 65) == 1:
            assert psi_eval(5, a) * psi_eval(13, a) == psi_eval(65, a)


def test_psi_is_even():
    for d in (3, 5, 7, 10, 15):
        for a in range(1, 50):
            assert psi_eval(d, a) == psi_eval(d, -a)


def test_psi_rejects_non_squarefree():
    with pytest.raises(ValueError):
        psi_eval(12, 5)


# -- chi_n -----------------------------------------------------------------------


def test_chi_is_even():
    for n in range(1, 6):
        assert chi_eval(n, -1) == one(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_chi_value_forced_by_primitivity(n):
    assert chi_eval(n, 1 - (1 << (n + 1))) == cyclo_from_rational(-1, n)


def test_chi_generator_convention():
    assert chi_eval(2, 5) == root_of_unity(2, 2, 1)
    assert chi_eval(3, 5) == root_of_unity(3, 3, 1)


def test_chi_multiplicative():
    rng = random.Random(3)
    for n in (2, 3, 4, 5):
        for _ in range(50):
            a = rng.randrange(1, 1 << (n + 2), 2)
            b = rng.randrange(1, 1 << (n + 2), 2)
            assert chi_eval(n, a * b) == mul(chi_eval(n, a), chi_eval(n, b))


def test_chi_has_exact_order_two_to_n():
    for n in (1, 2, 3, 4):
        g = chi_eval(n, 5)
        acc = one(n)
        for _ in range(1 << (n - 1)):
            acc = mul(acc, g)
        assert acc == cyclo_from_rational(-1, n)
        assert mul(acc, acc) == one(n)


def test_chi_vanishes_on_even_arguments():
    assert chi_eval(3, 6).is_zero()


def test_chi_layer_zero_rejected():
    with pytest.raises(ValueError):
        chi_eval(0, 3)


def test_bulk_table_agrees_with_binary_lifting():
    for n in (1, 2, 3, 4, 5):
        spec = CharSpec(n)
        period, tab = char_monomials(spec)
        assert period == 1 << (n + 2)
        for a in range(period):
            direct = chi_eval(n, a) if a % 2 else zero(n)
            entry = tab[a]
            if entry is None:
                assert direct.is_zero()
            else:
                s, idx = entry
                coeffs = [Fraction(0)] * len(direct.coeffs)
                coeffs[idx] = Fraction(s)
                assert tuple(coeffs) == direct.coeffs


# -- product characters -----------------------------------------------------------


def test_square_twist_drops_the_sign():
    spec = CharSpec(3, 5, 2)
    for a in (2, 3, 7, 8, 13):  # psi_5 = -1 at 2,3,8,13; zero at 5,10
        expected = chi_eval(3, a) if psi_eval(5, a) != 0 else zero(3)
        assert char_eval(spec, a) == expected


def test_product_character_is_even():
    for d in (3, 5, 15):
        for n in (1, 2, 3):
            spec = CharSpec(n, d)
            big_d = (1 << (n + 2)) * d
            for a in range(1, 40):
                assert char_eval(spec, big_d - a) == char_eval(spec, a)


def test_half_period_antisymmetry():
    # chi(D/2 - a) = -chi(a) for the product character
    for d, n in ((3, 2), (5, 2), (1, 3)):
        spec = CharSpec(n, d) if d > 1 else CharSpec(n)
        big_d = (1 << (n + 2)) * d
        for a in range(1, big_d // 2, 2):
            assert char_eval(spec, big_d // 2 - a) == neg(char_eval(spec, a))


def test_quarter_shift_with_sign_character():
    # chi(D/4 - a) = chi(D/4 - 1) * (-1|a) * chi(a)
    for d, n in ((3, 2), (5, 3)):
        spec = CharSpec(n, d)
        big_d = (1 << (n + 2)) * d
        lead = char_eval(spec, big_d // 4 - 1)
        for a in range(1, 60, 2):
            lhs = char_eval(spec, big_d // 4 - a)
            rhs = mul(lead, mul(char_eval(spec, a), kronecker_symbol(-1, a)))
            assert lhs == rhs


def test_even_twist_layer_zero_only():
    spec = CharSpec(0, 10, 1, allow_even_twist=True)
    assert char_eval(spec, 3).as_rational() == psi_eval(10, 3)
    with pytest.raises(ValueError):
        CharSpec(1, 10, 1, allow_even_twist=True)
    with pytest.raises(ValueError):
        CharSpec(0, 10, 1)


def test_first_layer_chi_is_the_even_quadratic_character():
    for a in range(1, 32):
        expected = psi_eval(2, a)
        got = char_eval(CharSpec(1), a)
        assert got.as_rational() == expected


def test_first_layer_twist_matches_doubled_twist():
    # chi_1 * psi_d agrees with psi_{2d} on the common period
    for d in (3, 5, 13):
        spec = CharSpec(1, d)
        period = spec.modulus * 2
        for a in range(1, 2 * period):
            assert char_eval(spec, a).as_rational() == psi_eval(2 * d, a)


# -- conductors --------------------------------------------------------------------


def test_conductor_of_chi_n():
    for n in range(1, 6):
        assert conductor(CharSpec(n)) == 1 << (n + 2)


def test_conductor_of_quadratic_characters():
    assert conductor(CharSpec(0, 5)) == 5
    assert conductor(CharSpec(0, 3)) == 12
    assert conductor(CharSpec(0, 10, 1, allow_even_twist=True)) == 40


def test_conductor_of_products_divides_full_modulus():
    for n in (1, 2, 3):
        for d in (3, 5, 15):
            assert conductor(CharSpec(n, d)) == (1 << (n + 2)) * d


def test_conductor_of_square_twist_collapses():
    assert conductor(CharSpec(2, 15, 2)) == 16
    assert conductor(CharSpec(0)) == 1


# -- Frobenius constants -------------------------------------------------------------


@pytest.mark.parametrize(
    "p,p_star,f_p",
    [(3, -3, 0), (5, 5, 0), (7, -7, 1), (11, -11, 0), (13, 13, 0), (17, 17, 2), (31, -31, 3)],
)
def test_frobenius_spot_values(p, p_star, f_p):
    fc = frobenius_constant(p)
    assert (fc.p_star, fc.f_p) == (p_star, f_p)


def test_frobenius_rejects_bad_input():
    with pytest.raises(ValueError):
        frobenius_constant(2)
    with pytest.raises(ValueError):
        frobenius_constant(15)


def test_frobenius_controls_valuation_of_one_minus_chi():
    # ord2(1 - chi_n(p)) = 2^(1-n+f_p) once n > f_p + 1
    for p in (3, 5, 7, 17):
        f_p = frobenius_constant(p).f_p
        for n in range(f_p + 2, 7):
            v = ord2(sub(1, chi_eval(n, p)))
            assert v == Fraction(1 << f_p, 1 << (n - 1)), (p, n)
