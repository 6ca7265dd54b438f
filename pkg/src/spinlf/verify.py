"""Quick invariant suites behind `spinlf verify`.

Each suite is a list of named checks; a check returns True, or raises / returns
False with the failure recorded.  The suites are small enough to run in a few
seconds each and are meant as a smoke test of an installation, not a
replacement for the test suite.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import eisenstein, group_w, jordan, local_factors, lseries, restriction, scalars
from .jordan import HermMatrix, matmul
from .quaternion import QuatAlgebra


def _rand_frac(rng: random.Random, span: int = 5) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, 3))


def _rand_herm(alg: QuatAlgebra, rng: random.Random) -> HermMatrix:
    return HermMatrix.from_coords(alg, [_rand_frac(rng) for _ in range(15)])


def _scalars():
    def bernoulli_two_ways():
        triv = scalars.DirichletChar.trivial()
        return all(
            scalars.gen_bernoulli(triv, n).to_fraction() == scalars.bernoulli_recurrence(n)
            for n in range(2, 21, 2)
        )

    def zeta12():
        return scalars.l_value_ratio(scalars.DirichletChar.trivial(), 12).to_fraction() == Fraction(691, 65520)

    return [("bernoulli_two_ways", bernoulli_two_ways), ("l_ratio_12", zeta12)]


def _jordan():
    rng = random.Random(7)
    alg = QuatAlgebra.hamilton()

    def adjoint_identities():
        for _ in range(40):
            h = _rand_herm(alg, rng)
            N = h.norm()
            hs = h.sharp()
            prod = matmul(h.matrix(), hs.matrix())
            target = (HermMatrix.identity(alg) * N).matrix()
            if prod != target or hs.sharp() != h * N or hs.norm() != N * N:
                return False
        return True

    def dual_volume_disc7():
        _, index, vol, dual = jordan.lattice_dual(jordan.HermLattice(QuatAlgebra.disc7(), 3))
        return dual == vol / index

    return [("adjoint_identities", adjoint_identities), ("dual_volume", dual_volume_disc7)]


def _group():
    rng = random.Random(11)
    alg = QuatAlgebra.hamilton()

    def special_preserve_forms():
        elts = [group_w.iota(j, alg) for j in range(4)] + [group_w.w_M(2, alg)]
        for g in elts:
            g.verify(n_random=4)
        return True

    def cocycle():
        Z = group_w.siegel_point(alg, [[scalars.GaussianRational(1, 2), 0, 0], [0, scalars.GaussianRational(0, 1), 0], [0, 0, scalars.GaussianRational(-1, 3)]])
        g = group_w.embed_gsp6(group_w.random_gsp6(rng), alg)
        h = group_w.embed_gsp6(group_w.random_gsp6(rng), alg)
        lhs = group_w.j_factor(g * h, Z)
        rhs = group_w.j_factor(g, group_w.act_on_point(h, Z)) * group_w.j_factor(h, Z)
        return lhs == rhs

    return [("special_elements_preserve_forms", special_preserve_forms), ("cocycle", cocycle)]


def _local():
    def rank1_closed_form():
        for ell in (2, 3):
            for v in range(3):
                h = HermMatrix.diag(QuatAlgebra.disc7(), ell**v, 0, 0)
                oracle = local_factors.oracle_series(1, ell, h, v + 1)
                closed = local_factors.closed_series(local_factors.ValProfile(1, ell, (v,)))
                if [closed.coefficient(m) for m in range(v + 2)] != [scalars.CycloValue.rational(x) for x in oracle]:
                    return False
        return True

    def lem1():
        alg = QuatAlgebra.disc7()
        for ell in (2, 3):
            for m in (1, 2):
                for lv in list(range(m + 1)) + [None]:
                    br = local_factors.bracket(lv, m, ell)
                    if local_factors.lem1_sum(alg, ell, m, lv) != ell ** (2 * m) * br * br:
                        return False
        return True

    return [("rank1_closed_form", rank1_closed_form), ("lem1", lem1)]


def _eisenstein():
    triv = scalars.DirichletChar.trivial()

    def kernel_rational():
        h = HermMatrix.diag(QuatAlgebra.hamilton(), 1, 0, 0)
        return eisenstein.kernel_coeff(h, 6, triv).value.is_rational()

    def bridge_pi_free():
        return eisenstein.normalization_bridge(6, triv).pi_exponent == 0

    return [("kernel_rational", kernel_rational), ("bridge_pi_free", bridge_pi_free)]


def _restriction():
    def brute_force_agrees():
        t = restriction.SiegelIndex.scalar(1)
        return restriction.fiber_over_t(t) == restriction.fiber_brute_force(t)

    def fiber_sound():
        t = restriction.SiegelIndex([[1, "1/2", 0], ["1/2", 1, 0], [0, 0, 1]])
        f = restriction.fiber_over_t(t)
        return f.symmetrization_holds(t) and f.psd_holds()

    return [("brute_force_agrees", brute_force_agrees), ("fiber_sound", fiber_sound)]


def _lseries():
    def trivial_satake():
        import math

        P = lseries.spin_euler_factor(lseries.SatakeParams(1))
        return [c.to_fraction() for c in P.coeffs] == [(-1) ** k * math.comb(8, k) for k in range(9)]

    def hnf_counts():
        return len(lseries.hnf_of_det(2)) == 7 and len(lseries.hnf_of_det(3)) == 13

    def gamma_pi():
        return all(
            lseries.spin_gamma(s, r).pi_exponent == -(4 * s + 6 * r - 14) for r in range(6, 12) for s in range(4, r - 1)
        )

    return [("trivial_satake", trivial_satake), ("hnf_counts", hnf_counts), ("gamma_pi", gamma_pi)]


SUITES = {
    "scalars": _scalars,
    "jordan": _jordan,
    "group": _group,
    "local": _local,
    "eisenstein": _eisenstein,
    "restriction": _restriction,
    "lseries": _lseries,
}


def run_suite(name: str) -> dict:
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise KeyError(name)
    passed, failures = 0, []
    for n in names:
        for label, check in SUITES[n]():
            try:
                ok = bool(check())
                detail = "returned False"
            except Exception as exc:  # a crash counts as a failure, with its message
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            if ok:
                passed += 1
            else:
                failures.append({"check": f"{n}.{label}", "detail": detail})
    return {"suite": name, "passed": passed, "failed": len(failures), "failures": failures}
