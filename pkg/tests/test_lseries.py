import math
from fractions import Fraction

import pytest

from spinlf import lseries as ls
from spinlf.restriction import SiegelIndex
from spinlf.scalars import CycloValue, DirichletChar

TRIV = DirichletChar.trivial()
CHI4 = DirichletChar(4, 2, {3: 1})
ONE3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def _rand_params(rng):
    def q():
        return Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 5))

    return ls.SatakeParams(q(), q(), q(), q())


# --- Euler factors ---------------------------------------------------------------------


def test_trivial_params_give_binomials():
    P = ls.spin_euler_factor(ls.SatakeParams(1, 1, 1, 1))
    assert [c.to_fraction() for c in P.coeffs] == [(-1) ** k * math.comb(8, k) for k in range(9)]


def test_b0_only():
    P = ls.spin_euler_factor(ls.SatakeParams(Fraction(3, 2)))
    assert [c.to_fraction() for c in P.coeffs] == [math.comb(8, k) * Fraction(-3, 2) ** k for k in range(9)]


def test_b0_zero_rejected():
    with pytest.raises(ValueError):
        ls.SatakeParams(0, 1, 1, 1)


def test_leading_coefficient(rng):
    for _ in range(20):
        p = _rand_params(rng)
        for chi_q in (1, -1):
            P = ls.spin_euler_factor(p, chi_q)
            assert P.coeffs[0] == CycloValue.rational(1)
            lead = (p.b0 * chi_q) ** 8 * (p.b1 * p.b2 * p.b3) ** 4
            assert P.coeffs[8] == lead


def test_root_pairing(rng):
    for _ in range(100):
        p = _rand_params(rng)
        chi_q = rng.choice([1, -1])
        roots = p.roots(chi_q)
        c = p.b0 * p.b0 * p.b1 * p.b2 * p.b3
        for J, a in roots.items():
            assert a * roots[frozenset({1, 2, 3}) - J] == c


def test_palindromic_relation(rng):
    # X^8 P(1/(cX)) c^4 = P(X) when every root pairs to c
    for _ in range(20):
        p = _rand_params(rng)
        P = ls.spin_euler_factor(p)
        c = (p.b0 * p.b0 * p.b1 * p.b2 * p.b3).to_fraction()
        for k in range(9):
            assert P.coeffs[8 - k].to_fraction() == P.coeffs[k].to_fraction() * c ** (4 - k)


def test_character_twist_is_substitution():
    p = ls.SatakeParams(2, 3, Fraction(1, 2), 5)
    assert ls.spin_euler_factor(p, -1)(Fraction(1, 7)) == ls.spin_euler_factor(p)(Fraction(-1, 7))


def test_partial_product_examples():
    params = {2: ls.SatakeParams(1, 1, 1, 1)}
    assert ls.partial_euler_product({}, TRIV, 12) == CycloValue.rational(1)
    assert ls.partial_euler_product(params, TRIV, 12) == (1 - Fraction(1, 2**12)) ** -8


def test_partial_product_multiplicative(rng):
    ps = {q: _rand_params(rng) for q in (3, 5, 7, 11)}
    a = ls.partial_euler_product({q: ps[q] for q in (3, 5)}, CHI4, 4)
    b = ls.partial_euler_product({q: ps[q] for q in (7, 11)}, CHI4, 4)
    assert ls.partial_euler_product(ps, CHI4, 4) == a * b


def test_partial_product_bound_and_level():
    ps = {2: ls.SatakeParams(1), 3: ls.SatakeParams(2)}
    only2 = ls.partial_euler_product({2: ps[2]}, TRIV, 6)
    assert ls.partial_euler_product(ps, TRIV, 6, primes_bound=2) == only2
    assert ls.partial_euler_product(ps, TRIV, 6, M=3) == only2


def test_partial_product_pole():
    with pytest.raises(ls.EulerPole, match="q = 2"):
        ls.partial_euler_product({2: ls.SatakeParams(4)}, TRIV, 2)


# --- Gamma(s, Spin) -------------------------------------------------------------------------


def test_spin_gamma_pinned():
    g = ls.spin_gamma(4, 6)
    expect = Fraction(2**4, 2**38) * math.factorial(5) * math.factorial(6) * math.factorial(7) * math.factorial(16)
    assert g.rational_part.to_fraction() == expect
    assert g.pi_exponent == -38 and g.i_exponent == 0


def test_spin_gamma_exponent_range():
    for r in range(6, 21):
        for s in range(4, r - 1):
            assert ls.spin_gamma(s, r).pi_exponent == -(4 * s + 6 * r - 14)


def test_spin_gamma_gate():
    ls.spin_gamma(3, 6)
    with pytest.raises(ValueError):
        ls.spin_gamma(0, 4)


def test_pi_power_reconciliation():
    # the s -> s - 2 shift carries Gamma(s, Spin) onto the pi-power of the algebraicity statement
    for r in range(6, 21):
        for s0 in range(4, r - 1):
            assert -ls.spin_gamma(s0 + 2, r).pi_exponent == ls.main_theorem_pi_power(s0, r)


# --- Hermite normal forms -----------------------------------------------------------------------


def test_hnf_counts():
    assert [len(ls.hnf_of_det(n)) for n in range(1, 7)] == [1, 7, 13, 35, 31, 91]


@pytest.mark.parametrize("p", [2, 3, pytest.param(5, marks=pytest.mark.slow)])
def test_hnf_prime_count_matches_exhaustive(p):
    assert len(ls.hnf_of_det(p)) == 1 + p + p * p == ls.sublattice_classes_exhaustive(p)


def test_hnf_representatives_distinct():
    # distinct HNFs span distinct column lattices
    for n in (2, 3, 4):
        spans = set()
        for m in ls.hnf_of_det(n):
            cols = tuple(sorted(tuple(m[i][k] % n for i in range(3)) for k in range(3)))
            spans.add(ls._span_mod(cols, n))
        assert len(spans) == len(ls.hnf_of_det(n))


def test_hnf_classes_det_one_passes_xi():
    (c,) = ls.hnf_classes(1, ONE3, filter="xi")
    assert c.m == ((1, 0, 0), (0, 1, 0), (0, 0, 1)) and c.xi


def test_hnf_classes_bad_args():
    with pytest.raises(ValueError):
        ls.hnf_classes(0)
    with pytest.raises(ValueError):
        ls.hnf_classes(2, filter="other")


def test_cofactor_identity(rng):
    for _ in range(50):
        m = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
        c = ls.cofactor_c(m)
        d = ls._det3(m)
        # m^t c(m) = det(m) 1
        prod = [[sum(m[k][i] * c[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        assert prod == [[d * (i == j) for j in range(3)] for i in range(3)]


def test_xi_image_determinant(rng):
    T = SiegelIndex([[2, Fraction(1, 2), 0], [Fraction(1, 2), 2, 1], [0, 1, 3]])
    detT = ls._det3(T.rows)
    for m in ls.hnf_of_det(4)[:20]:
        X = ls.xi_image(m, T)
        assert ls._det3(X.rows) == detT * 4


def test_xi_filter_is_a_subset():
    T = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    allc = ls.hnf_classes(3, T)
    passing = ls.hnf_classes(3, T, filter="xi")
    assert {c.m for c in passing} == {c.m for c in allc if c.xi}
    assert 1 < len(passing) < len(allc)


# --- Psi, L_M, constants -----------------------------------------------------------------------


def test_psi_cases():
    assert ls.psi_weight(1, 5) == Fraction(4, 5)
    assert ls.psi_weight(Fraction(1, 5), 5) == -1
    assert ls.psi_weight(Fraction(1, 3), 5) == 0
    assert ls.psi_weight(Fraction(1, 25), 5) == 0
    assert ls.psi_weight(10, 5) == Fraction(4, 5) * Fraction(1, 5) * Fraction(1, 2)
    assert ls.psi_weight(0, 5) == 0


SQUAREFREE = [1, 2, 3, 5, 6, 7, 10, 15, 30, 105]


@pytest.mark.parametrize("M", SQUAREFREE)
def test_l_correction(M):
    omega = sum(1 for p in (2, 3, 5, 7) if M % p == 0)
    for s in (0, 1, 3):
        assert ls.l_correction(M, s) == Fraction((-1) ** omega) / Fraction(M) ** (2 * s)


def test_l_correction_examples():
    assert ls.l_correction(6, 1) == Fraction(1, 36)
    assert ls.l_correction(2, 0) == -1
    with pytest.raises(ValueError, match="squarefree"):
        ls.l_correction(4, 1)


def test_implicit_constant():
    assert ls.implicit_constant([[2, 0, 0], [0, 1, 0], [0, 0, 3]]) == 216


# --- Evdokimov partial sums ----------------------------------------------------------------------


def test_evdokimov_delta_single_term():
    assert ls.evdokimov_partial(ONE3, ls.CoeffOracle.delta(ONE3), TRIV, 10, 6, 1, 1) == CycloValue.rational(1)


def test_evdokimov_delta_bounds_two():
    # det(lambda m^-1 T c(m)) = lambda^3 det(m) det(T), so only the identity term can recur
    assert ls.evdokimov_partial(ONE3, ls.CoeffOracle.delta(ONE3), TRIV, 10, 6, 2, 2) == CycloValue.rational(1)


def test_evdokimov_zero_oracle():
    assert ls.evdokimov_partial(ONE3, ls.CoeffOracle.zero(), TRIV, 10, 6, 3, 3).is_zero()


def test_evdokimov_missing_entry():
    with pytest.raises(ls.MissingOracleEntry):
        ls.evdokimov_partial(ONE3, ls.CoeffOracle({SiegelIndex(ONE3): 1}), TRIV, 10, 6, 2, 1)


def test_evdokimov_matches_direct_scan():
    # oracle a(X) = det(X), summed by hand over the same index set
    T = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    s, r = 8, 6
    table = {}
    expect = Fraction(0)
    for lam in (1, 2, 3):
        for c in ls.hnf_classes(2, T, filter="xi"):
            X = ls.xi_image(c.m, T)
            X = SiegelIndex([[lam * x for x in row] for row in X.rows])
            table[X] = ls._det3(X.rows)
            expect += Fraction(ls._det3(X.rows), lam**s) * Fraction(c.det) ** (-(s - 2 * r + 3))
    got = ls.evdokimov_partial(T, ls.CoeffOracle(table), TRIV, s, r, 3, 2)
    assert got.to_fraction() == expect


def test_evdokimov_character_and_level():
    T = [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    oracle = ls.CoeffOracle({}, default=1)
    # chi mod 4 kills even lambda det m; level 3 drops lambda = 3
    full = ls.evdokimov_partial(T, oracle, CHI4, 6, 6, 3, 1)
    assert full.to_fraction() == 1 + Fraction(-1, 3**6)
    assert ls.evdokimov_partial(T, oracle, CHI4, 6, 6, 3, 1, M=3) == CycloValue.rational(1)


def test_rescaled_oracle():
    o = ls.CoeffOracle({SiegelIndex(ONE3): 5, SiegelIndex([[2, 0, 0], [0, 2, 0], [0, 0, 2]]): 7})
    u = o.rescaled(2)
    assert u(ONE3) == CycloValue.rational(7)
    with pytest.raises(ls.MissingOracleEntry):
        u([[2, 0, 0], [0, 2, 0], [0, 0, 2]])


def test_oracle_from_json():
    o = ls.CoeffOracle.from_json([{"t": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]], "a": "3/2"}])
    assert o(ONE3) == CycloValue.rational(Fraction(3, 2))
