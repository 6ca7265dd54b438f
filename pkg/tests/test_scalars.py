import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spinlf.scalars import (
    CycloValue,
    DirichletChar,
    GradedConstant,
    ParityError,
    bernoulli_recurrence,
    char_eval,
    cyclo_reduce,
    gauss_sum,
    gen_bernoulli,
    graded_mul,
    l_value_ratio,
)

TRIV = DirichletChar.trivial()
CHI4 = DirichletChar(4, 2, {3: 1})
CHI5 = DirichletChar(5, 4, {2: 1})
CHI5_QUAD = DirichletChar(5, 2, {2: 1})
ALL_CHARS = [TRIV, CHI4, CHI5, DirichletChar(5, 4, {2: 3}), CHI5_QUAD, DirichletChar(7, 6, {3: 1}), DirichletChar(8, 2, {7: 1, 5: 1})]


# --- cyclotomic reduction -----------------------------------------------------


def test_zeta4_squared():
    assert cyclo_reduce([0, 0, 1, 0], 4) == CycloValue.rational(-1)


@pytest.mark.parametrize("n", [2, 3, 4, 8, 9, 25, 27])
def test_full_root_sum_vanishes(n):
    assert cyclo_reduce([1] * n, n).is_zero()


def test_zeta2():
    assert cyclo_reduce([0, 1], 2) == CycloValue.rational(-1)


def _raw(rng, n):
    return [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)]


def _from_raw(raw, n):
    return sum((CycloValue.zeta(n, k) * c for k, c in enumerate(raw)), CycloValue.rational(0, n))


@pytest.mark.parametrize("n", [3, 4, 5, 8, 12, 20])
def test_reduce_linear_idempotent_and_multiplicative(n):
    rng = random.Random(n)
    for _ in range(200 // 6 + 1):
        a, b = _raw(rng, n), _raw(rng, n)
        ra, rb = cyclo_reduce(a, n), cyclo_reduce(b, n)
        # idempotent: re-reducing the canonical coefficients changes nothing
        padded = list(ra.coeffs) + [0] * (n - len(ra.coeffs))
        assert cyclo_reduce(padded, n) == ra
        assert cyclo_reduce([x + 3 * y for x, y in zip(a, b)], n) == ra + rb * 3
        assert _from_raw(a, n) * _from_raw(b, n) == ra * rb


def test_galois_invariant_iff_rational():
    z = CycloValue.zeta(5)
    trace = sum((z.galois(k) for k in range(1, 5)), CycloValue.rational(0))
    assert trace == CycloValue.rational(-1)
    assert not z.is_rational()


def test_inverse():
    x = CycloValue.zeta(8) * 3 + 1
    assert x * x.inverse() == CycloValue.rational(1)


# --- characters ------------------------------------------------------------------


def test_char_examples():
    assert char_eval(CHI4, 3) == CycloValue.rational(-1)
    assert char_eval(CHI5, 4) == CycloValue.rational(-1)
    assert char_eval(CHI5, 2) == CycloValue.zeta(4)
    for chi in ALL_CHARS:
        assert char_eval(chi, 1) == CycloValue.rational(1)
        if chi.modulus > 1:
            assert char_eval(chi, chi.modulus).is_zero()


@pytest.mark.parametrize("chi", ALL_CHARS, ids=lambda c: f"{c.modulus}:{c.order}")
def test_char_multiplicative(chi):
    rng = random.Random(chi.modulus * 31 + chi.order)
    units = [k for k in range(1, 200) if math.gcd(k, chi.modulus) == 1]
    for _ in range(500):
        a, b = rng.choice(units), rng.choice(units)
        assert char_eval(chi, a * b) == char_eval(chi, a) * char_eval(chi, b)


def test_parity_and_conductor():
    assert CHI4.parity() == -1
    assert CHI5.parity() == -1
    assert CHI5_QUAD.parity() == 1
    assert DirichletChar(20, 2, {11: 1}).conductor() in (4, 5)  # whichever factor carries it


def test_bad_generator_rejected():
    with pytest.raises(ValueError):
        DirichletChar(5, 4, {3: 1})


# --- Bernoulli numbers ---------------------------------------------------------------


def test_bernoulli_examples():
    assert gen_bernoulli(TRIV, 12).to_fraction() == Fraction(-691, 2730)
    assert gen_bernoulli(CHI4, 1).to_fraction() == Fraction(-1, 2)
    assert gen_bernoulli(TRIV, 3).is_zero()


def test_bernoulli_two_ways():
    for n in range(25):
        gf = gen_bernoulli(TRIV, n).to_fraction()
        if n == 1:
            # the generating function t e^t/(e^t - 1) gives +1/2, the recurrence -1/2
            assert (gf, bernoulli_recurrence(1)) == (Fraction(1, 2), Fraction(-1, 2))
        else:
            assert gf == bernoulli_recurrence(n), n


def test_gen_bernoulli_odd_char_vanishes_at_even_n():
    for n in (2, 4, 6):
        assert gen_bernoulli(CHI4, n).is_zero()
    # B_{3, chi_-4} = 3/2
    assert gen_bernoulli(CHI4, 3).to_fraction() == Fraction(3, 2)


# --- L-value ratios ------------------------------------------------------------------


def test_l_ratio_zeta12_pinned():
    # Gamma(12) zeta(12) / (2 pi i)^12 = -B_12 / 24
    assert l_value_ratio(TRIV, 12).to_fraction() == Fraction(691, 65520)


def test_l_ratio_zeta8():
    assert l_value_ratio(TRIV, 8).to_fraction() == Fraction(1, 480)


def test_l_ratio_parity_error():
    with pytest.raises(ParityError):
        l_value_ratio(TRIV, 3)
    with pytest.raises(ParityError):
        l_value_ratio(CHI4, 2)


@pytest.mark.parametrize("k", range(1, 11))
def test_l_ratio_against_float(k):
    mpmath.mp.dps = 40
    n = 2 * k
    expect = mpmath.gamma(n) * mpmath.zeta(n) / (2 * mpmath.pi) ** n * (-1) ** k
    got = l_value_ratio(TRIV, n).to_fraction()
    assert abs(mpmath.mpf(got.numerator) / got.denominator - expect) < mpmath.mpf(10) ** -12


@pytest.mark.parametrize("chi,n", [(CHI4, 3), (CHI4, 5), (CHI5, 1), (CHI5, 3), (CHI5_QUAD, 2), (CHI5_QUAD, 4)])
def test_l_ratio_nontrivial_against_float(chi, n):
    mpmath.mp.dps = 30
    f = chi.modulus
    vals = [char_eval(chi, a).to_complex() for a in range(f)]
    if n == 1:
        L = -sum(vals[a] * mpmath.digamma(mpmath.mpf(a) / f) for a in range(1, f)) / f
    else:
        L = sum(vals[a] * mpmath.zeta(n, mpmath.mpf(a) / f) for a in range(1, f)) / mpmath.mpf(f) ** n
    expect = mpmath.gamma(n) * L / (2j * mpmath.pi) ** n
    got = l_value_ratio(chi, n).to_complex()
    assert abs(complex(expect) - got) < 1e-12


def test_real_char_ratio_is_rational_times_gauss_sum():
    for n in (2, 4, 6):
        v = l_value_ratio(CHI5_QUAD, n)
        assert not v.is_rational()
        assert (v / gauss_sum(CHI5_QUAD)).is_rational()


def test_values_in_char_field():
    for n in (1, 3, 5):
        v = l_value_ratio(CHI5, n) / gauss_sum(CHI5)
        assert v.in_subfield(4)


# --- graded constants -------------------------------------------------------------------


def test_graded_examples():
    one = GradedConstant(1)
    assert graded_mul(one, one) == one
    prod = graded_mul(GradedConstant(2, -3, 1), GradedConstant(3, -1, 3))
    assert (prod.rational_part, prod.pi_exponent, prod.i_exponent) == (CycloValue.rational(6), -4, 0)
    assert GradedConstant(1, 0, 2).fold_i().rational_part == CycloValue.rational(-1)


def test_graded_odd_i_folds_into_zeta4():
    g = GradedConstant(2, 5, 3).fold_i()
    assert g.rational_part == CycloValue.zeta(4, 3) * 2 and g.i_exponent == 0


@given(st.integers(-4, 4), st.integers(0, 7), st.integers(1, 9))
def test_graded_inverse(pi, i, q):
    g = GradedConstant(Fraction(q, 7), pi, i)
    assert g * g.inverse() == GradedConstant(1)
