"""One test per acceptance criterion.  Each prints a PASS/FAIL line, collected
again in the terminal summary."""

import json
import math
import random
import time
from fractions import Fraction

import pytest
from _docs import documented_examples, run
from conftest import CriterionUnmet

from spinlf import eisenstein as es
from spinlf import group_w as gw
from spinlf import local_factors as lf
from spinlf import lseries as ls
from spinlf.jordan import HermMatrix, matmul, norm_adjoint_trace
from spinlf.quaternion import QuatAlgebra
from spinlf.restriction import SiegelIndex, fiber_brute_force, fiber_over_t
from spinlf.scalars import (
    DirichletChar,
    GaussianRational,
    ParityError,
    bernoulli_recurrence,
    gen_bernoulli,
    l_value_ratio,
)

HAM = QuatAlgebra.hamilton()
D7 = QuatAlgebra.disc7()
TRIV = DirichletChar.trivial()
CHI4 = DirichletChar(4, 2, {3: 1})
CHI5 = DirichletChar(5, 4, {2: 1})


def _frac(rng, span=5):
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def _gauss(rng):
    return GaussianRational(_frac(rng, 3), _frac(rng, 3))


def _siegel_point(rng):
    z = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(i, 3):
            im = Fraction(rng.randint(1, 4), rng.randint(1, 3)) if i == j else Fraction(rng.randint(-2, 2), 3)
            z[i][j] = z[j][i] = GaussianRational(_frac(rng, 3), im)
    return z


def _diag(alg, ell, vals):
    return HermMatrix.diag(alg, *([ell**v for v in vals] + [0] * (3 - len(vals))))


def _coeffs(poly, n):
    return [poly.coefficient(m).to_fraction() for m in range(n)]


# 1 ------------------------------------------------------------------------------------------------


def test_criterion_1_jordan_identities(criterion):
    rng = random.Random(1)
    with criterion(1, limit=2.0) as c:
        hs = [HermMatrix.from_coords((HAM, D7)[n % 2], [_frac(rng) for _ in range(15)]) for n in range(500)]
        for n in range(100):
            alg = (HAM, D7)[n % 2]
            hs.append(HermMatrix([_gauss(rng) for _ in range(3)], [alg.from_order_coords([_gauss(rng) for _ in range(4)]) for _ in range(3)]))
        for h in hs:
            N, hs_, _ = norm_adjoint_trace(h)
            scalar = (HermMatrix.identity(h.alg) * N).matrix()
            assert matmul(h.matrix(), hs_.matrix()) == scalar
            assert matmul(hs_.matrix(), h.matrix()) == scalar
            assert hs_.sharp() == h * N
            assert hs_.norm() == N * N
        c.note("500 rational + 100 Gaussian, both algebras")


# 2 ------------------------------------------------------------------------------------------------


def test_criterion_2_group_module(criterion):
    rng = random.Random(2)
    with criterion(2, limit=10.0) as c:
        els = [gw.embed_gsp6(gw.random_gsp6(rng), HAM, check=False) for _ in range(100)]
        for variant in ("n", "nbar"):
            for _ in range(5):
                X = HermMatrix.from_coords(HAM, [_frac(rng, 3) for _ in range(15)])
                els.append(gw.n_embed(X, variant, check=False))
        els += [gw.iota(j, HAM) for j in range(4)]
        els += [gw.w_M(M, HAM) for M in (1, 2, 3, 5, 7)]
        for n, g in enumerate(els):
            g.verify(n_random=50, seed=n)
        c.note(f"{len(els)} elements, 32 basis + 50 random vectors each")


# 3 ------------------------------------------------------------------------------------------------


def test_criterion_3_cocycle_and_restriction(criterion):
    rng = random.Random(3)
    with criterion(3) as c:
        triples = 0
        while triples < 50:
            g = gw.embed_gsp6(gw.random_gsp6(rng), HAM, check=False)
            h = gw.embed_gsp6(gw.random_gsp6(rng), HAM, check=False)
            Z = gw.siegel_point(HAM, _siegel_point(rng))
            try:
                lhs = gw.j_factor(g * h, Z)
                rhs = gw.j_factor(g, gw.act_on_point(h, Z)) * gw.j_factor(h, Z)
            except gw.SingularPosition:
                continue
            assert lhs == rhs
            triples += 1
        points = 0
        while points < 50:
            g6 = gw.random_gsp6(rng)
            z = _siegel_point(rng)
            try:
                j = gw.j_factor(gw.embed_gsp6(g6, HAM, check=False), gw.siegel_point(HAM, z))
            except gw.SingularPosition:
                continue
            assert j == gw.j_gsp6(g6, z)
            points += 1
        for M in (1, 2, 3, 4, 5):
            w = gw.w_M(M, HAM)
            for _ in range(4):
                v = gw.random_wvector(HAM, rng)
                img = w.apply(v)
                assert (img.a, img.b, img.c, img.d) == (-v.d, v.c * M, v.b * (-M * M), M**3 * v.a)
        c.note("50 cocycle triples, 50 GSp6 points, w_M for M <= 5")


# 4 ------------------------------------------------------------------------------------------------


def test_criterion_4_lem1_oracle(criterion):
    with criterion(4, limit=5.0) as c:
        checked = 0
        for ell in (2, 3):
            for m in (1, 2):
                for v in list(range(m + 2)) + [None]:
                    br = lf.bracket(v, m, ell)
                    assert lf.lem1_sum(D7, ell, m, v) == ell ** (2 * m) * br * br, (ell, m, v)
                    checked += 1
        c.note(f"{checked} sums over B_0/l^m, disc 7 order (2 and 3 split)")


# 5 ------------------------------------------------------------------------------------------------


def test_criterion_5_local_closed_forms(criterion):
    with criterion(5) as c:
        for ell in (2, 3, 5):
            for a in range(4):
                oracle = lf.oracle_series(1, ell, _diag(D7, ell, (a,)), a + 1)
                assert oracle == _coeffs(lf.closed_series(lf.ValProfile(1, ell, (a,))), a + 2), (1, ell, a)
        for ell in (2, 3):
            for vals in [(0, 0), (0, 1), (1, 1), (0, 2)]:
                top = sum(vals) + 2
                oracle = lf.oracle_series(2, ell, _diag(D7, ell, vals), top)
                assert oracle == _coeffs(lf.closed_series(lf.ValProfile(2, ell, vals)), top + 1), (2, ell, vals)
        t0 = time.perf_counter()
        for vals in [(0, 0, 0), (0, 0, 1)]:
            oracle = lf.oracle_series(3, 2, _diag(D7, 2, vals), 1)
            assert oracle == _coeffs(lf.closed_series(lf.ValProfile(3, 2, vals)), 2), (3, 2, vals)
        sweep = time.perf_counter() - t0
        assert sweep < 30, f"rank-3 sweeps took {sweep:.1f}s"
        c.note(f"ranks 1-3 on the disc 7 order, rank-3 sweeps {sweep:.2f}s of 30s")


# 6 ------------------------------------------------------------------------------------------------


def _criterion6_combos():
    z = D7.zero()
    hs = [
        HermMatrix.diag(D7, 1, 0, 0),
        HermMatrix.diag(D7, 2, 0, 0),
        HermMatrix.diag(D7, 1, 1, 0),
        HermMatrix.diag(D7, 1, 3, 0),
        HermMatrix.identity(D7),
        HermMatrix.diag(D7, 1, 1, 2),
        HermMatrix((2, 1, 0), (z, z, D7.one())),
    ]
    pairs = [(r, chi) for r in (6, 7, 8) for chi in (TRIV, CHI4, CHI5)]
    return [(hs[n % len(hs)], *pairs[n % len(pairs)]) for n in range(20)]


@pytest.mark.xfail(
    strict=True,
    raises=CriterionUnmet,
    reason="the mod-4 and mod-5 order-4 characters are odd; no weight-2r series exists for them",
)
def test_criterion_6_rationality(criterion):
    with criterion(6) as c:
        good, parity = [], []
        for h, r, chi in _criterion6_combos():
            try:
                k = es.kernel_coeff(h, r, chi)
                b = es.normalization_bridge(r, chi, D7)
            except ParityError:
                parity.append((r, chi.modulus))
                continue
            assert k.in_char_field(), (h, r, chi)
            assert es.in_char_field(b.fold_i().rational_part, chi)
            good.append((r, chi.modulus))
        # every even combination has to reduce; a failure there is a bug, not the known gap
        assert all(m == 1 for _, m in good) and len(good) + len(parity) == 20
        c.note(f"{len(good)}/20 reduce to Q(chi); {len(parity)} raise ParityError (odd chi)")
        if parity:
            raise CriterionUnmet(f"{len(parity)} of 20 combinations use an odd character")


# 7 ------------------------------------------------------------------------------------------------


def test_criterion_7_bernoulli(criterion):
    with criterion(7) as c:
        for k in range(1, 11):
            b_gen = gen_bernoulli(TRIV, 2 * k).to_fraction()
            b_rec = bernoulli_recurrence(2 * k)
            assert b_gen == b_rec
            assert l_value_ratio(TRIV, 2 * k).to_fraction() == -b_rec / (4 * k)
        assert bernoulli_recurrence(12) == Fraction(-691, 2730)
        c.note("k = 1..10, generating function and recurrence agree")


# 8 ------------------------------------------------------------------------------------------------


def test_criterion_8_restriction(criterion):
    with criterion(8, limit=5.0) as c:
        sizes = []
        for t in (SiegelIndex.scalar(0), SiegelIndex.scalar(1), SiegelIndex.scalar(2)):
            f = fiber_over_t(t, 1, HAM)
            assert f == fiber_brute_force(t, 1, HAM)
            assert f.symmetrization_holds(t)
            assert f.psd_holds()
            sizes.append(len(f))
        assert sizes == [1, 967, 206449]
        c.note(f"fiber sizes {sizes}")


# 9 ------------------------------------------------------------------------------------------------


def test_criterion_9_lseries(criterion):
    rng = random.Random(9)
    with criterion(9) as c:
        P = ls.spin_euler_factor(ls.SatakeParams(1, 1, 1, 1))
        assert [x.to_fraction() for x in P.coeffs] == [(-1) ** k * math.comb(8, k) for k in range(9)]
        for _ in range(100):
            p = ls.SatakeParams(*(Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9)) for _ in range(4)))
            chi_q = rng.choice([1, -1])
            roots = p.roots(chi_q)
            pair = p.b0 * p.b0 * p.b1 * p.b2 * p.b3
            assert all(a * roots[frozenset({1, 2, 3}) - J] == pair for J, a in roots.items())
        assert len(ls.hnf_of_det(2)) == 7 == ls.sublattice_classes_exhaustive(2)
        assert len(ls.hnf_of_det(3)) == 13 == ls.sublattice_classes_exhaustive(3)
        g = ls.spin_gamma(4, 6)
        fac = math.factorial
        assert g.rational_part.to_fraction() == Fraction(2**4, 2**38) * fac(5) * fac(6) * fac(7) * fac(16)
        assert g.pi_exponent == -38
        assert ls.psi_weight(1, 5) == Fraction(4, 5)
        assert ls.psi_weight(Fraction(1, 5), 5) == -1
        assert ls.psi_weight(Fraction(1, 3), 5) == 0
        for M, omega in ((1, 0), (2, 1), (3, 1), (5, 1), (6, 2), (7, 1), (10, 2), (15, 2), (30, 3), (105, 3)):
            for s in (0, 1, 2):
                assert ls.l_correction(M, s) == Fraction((-1) ** omega) / Fraction(M) ** (2 * s)
        c.note("Euler factor, 100 root pairings, HNF 7/13, Gamma pin, Psi, 10 squarefree M")


# 10 -----------------------------------------------------------------------------------------------


def test_criterion_10_cli_determinism(criterion):
    with criterion(10) as c:
        examples = documented_examples()
        for argv, shown in examples:
            c1, o1 = run(argv)
            c2, o2 = run(argv)
            assert c1 == c2 == 0 and o1.encode() == o2.encode(), argv
            if shown is not None:
                assert o1 == shown, argv
        messy = {"2,1/2,0;1/2,2,0;0,0,1": "6/4", "4/4,0,0;0,1,0;0,0,1": "2/4", "0,0,0;0,0,0;0,0,0": "-0"}
        _, once = run(["roundtrip", "--input", json.dumps(messy)])
        _, twice = run(["roundtrip", "--input", once])
        assert once == twice and json.loads(once)["1,0,0;0,1,0;0,0,1"] == "1/2"
        c.note(f"{len(examples)} documented examples, round trip idempotent")
