"""Local Fourier-coefficient factors S_l^(j) and their brute-force oracles.

The interior sum of rank j at level m is

    I_m(h) = sum over X in Lambda_j / l^m with X# = 0 mod l^m (and, for j = 3,
             N(X) = 0 mod l^{2m}) of exp(2 pi i tr(X, h) / l^m),

and the local factor is S = (1 - u) sum_m I_m u^m with u = chi(l) l^{-2r}.
The closed forms say sum_m I_m u^m = prod_{0 < iota < j} (1 - l^{2 iota} u) P(u).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .jordan import HermLattice, HermMatrix, SLOT
from .quaternion import DEFAULT_BUDGET, BudgetExceeded, QuatAlgebra
from .scalars import CycloValue, DirichletChar, char_eval, cyclo_reduce, padic_val


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get("SPINLF_BUDGET")
    return int(raw) if raw else default


class NonInvariantSum(ArithmeticError):
    pass


def bracket(val: int | None, m: int, ell: int) -> int:
    """[lambda]_m = l^min(m, v(lambda)); val None stands for lambda = 0."""
    if val is None or val == math.inf:
        return ell**m
    return ell ** min(m, val)


# ---------------------------------------------------------------------------
# profiles and polynomials in u


@dataclass(frozen=True)
class ValProfile:
    rank: int
    ell: int
    vals: tuple[int, ...]

    def __post_init__(self):
        if len(self.vals) != self.rank:
            raise ValueError(f"rank {self.rank} profile needs {self.rank} valuations")
        if any(v < 0 for v in self.vals):
            raise ValueError("valuations must be nonnegative")
        object.__setattr__(self, "vals", tuple(sorted(self.vals)))


def profile_of_diagonal(h: HermMatrix, j: int, ell: int) -> ValProfile:
    if any(not q.is_zero() for q in h.a):
        raise ValueError("profile extraction needs a diagonal matrix")
    diag = h.c[:j]
    if any(c == 0 for c in diag) or any(c != 0 for c in h.c[j:]):
        raise ValueError(f"h is not of exact rank {j} in the upper-left block")
    return ValProfile(j, ell, tuple(padic_val(c, ell) for c in diag))


@dataclass
class UPoly:
    coeffs: list = field(default_factory=list)
    var: str = "u"

    def __post_init__(self):
        self.coeffs = [c if isinstance(c, CycloValue) else CycloValue.rational(c) for c in self.coeffs]
        while len(self.coeffs) > 1 and self.coeffs[-1].is_zero():
            self.coeffs.pop()
        if not self.coeffs:
            self.coeffs = [CycloValue.rational(0)]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "UPoly") -> "UPoly":
        out = [CycloValue.rational(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for k, y in enumerate(other.coeffs):
                out[i + k] = out[i + k] + x * y
        return UPoly(out, self.var)

    def __eq__(self, other):
        return isinstance(other, UPoly) and self.coeffs == other.coeffs

    def coefficient(self, k: int) -> CycloValue:
        return self.coeffs[k] if k < len(self.coeffs) else CycloValue.rational(0)

    def __call__(self, u) -> CycloValue:
        out = CycloValue.rational(0)
        for c in reversed(self.coeffs):
            out = out * u + c
        return out

    def __str__(self) -> str:
        out = ""
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            neg = c.is_rational() and c.to_fraction() < 0
            cs = str(abs(c.to_fraction())) if c.is_rational() else f"({c!r})"
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            body = cs if not mono else (mono if cs == "1" else f"{cs}{mono}")
            if not out:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out or "0"

    def to_json(self) -> list:
        return [c.to_json() if not c.is_rational() else str(c.to_fraction()) for c in self.coeffs]


def elementary_poly(j: int, ell: int) -> UPoly:
    """prod_{0 < iota < j} (1 - l^{2 iota} u)."""
    out = UPoly([1])
    for iota in range(1, j):
        out = out * UPoly([1, -(ell ** (2 * iota))])
    return out


# ---------------------------------------------------------------------------
# alpha recursions and the closed-form P


def alpha2(m: int, vals: Sequence[int], ell: int) -> int:
    """Rank-2 kernel: l^{-m} alpha_m = sum_{i=0}^{v+v'-m} l^{2i}, v = min(m, tau)."""
    if m < 0:
        return 0
    v, w = (min(m, x) for x in vals)
    top = v + w - m
    if top < 0:
        return 0
    return ell**m * sum(ell ** (2 * i) for i in range(top + 1))


def alpha3(m: int, vals: Sequence[int], ell: int) -> Fraction:
    """Rank-3 kernel built from the rank-2 one.

    vals = (tau, tau', tau'') sorted; tau belongs to the smallest elementary
    divisor and the rank-2 kernel is evaluated on the other two, rescaled by
    l^{xi - j}.  The scale tau is taken as min(m, tau)."""
    if m < 0:
        return Fraction(0)
    t0, t1, t2 = sorted(vals)
    tau = min(m, t0)

    def a2(n: int, shift: int) -> int:
        return alpha2(n, (t1 + shift, t2 + shift), ell)

    total = Fraction(0)
    for j in range(tau + 1):
        for xi in range(max(0, j - m + tau), j + 1):
            total += Fraction(ell ** (4 * j), ell ** (5 * xi)) * a2(m - 2 * j + xi, xi - j)
    for j in range(1, tau + 1):
        for xi in range(max(0, j - m + tau), j):
            total -= Fraction(ell ** (4 * j - 2), ell ** (5 * xi)) * a2(m - 2 * j + xi, xi - j)
    return ell ** (2 * tau) * total


def alpha_kernels(level: str, m: int, profile: ValProfile) -> Fraction:
    if level in ("alpha2", "rank2", "α″"):
        if profile.rank != 2:
            raise ValueError("alpha2 needs a rank-2 profile")
        return Fraction(alpha2(m, profile.vals, profile.ell))
    if level in ("alpha3", "rank3", "α‴"):
        if profile.rank != 3:
            raise ValueError("alpha3 needs a rank-3 profile")
        return alpha3(m, profile.vals, profile.ell)
    raise ValueError(f"unknown kernel level {level!r}")


def support_bound(profile: ValProfile) -> int:
    return sum(profile.vals)


def p_poly(profile: ValProfile) -> UPoly:
    ell, vals = profile.ell, profile.vals
    if profile.rank == 0:
        return UPoly([1])
    if profile.rank == 1:
        (a,) = vals
        return UPoly([ell**m for m in range(a + 1)])
    if profile.rank == 2:
        tau, tau2 = vals
        coeffs = [0] * (tau + tau2 + 1)
        for j in range(tau + 1):
            for m in range(j, tau + tau2 - j + 1):
                coeffs[m] += ell ** (2 * j) * ell ** (3 * m)
        return UPoly(coeffs)
    if profile.rank == 3:
        top = support_bound(profile)
        coeffs = [alpha3(m, vals, ell) * ell ** (4 * m) for m in range(top + 1)]
        extra = alpha3(top + 1, vals, ell)
        if extra != 0:
            raise ArithmeticError(f"rank-3 kernel does not vanish past its support: alpha_{top + 1} = {extra}")
        if any(Fraction(c).denominator != 1 for c in coeffs):
            raise ArithmeticError("rank-3 coefficients are not integral")
        return UPoly(coeffs)
    raise ValueError("rank must be 0..3")


def p_poly_from_alpha2(profile: ValProfile) -> UPoly:
    """Rank-2 P rebuilt from alpha2: P(u) = sum_m alpha_m l^{2m} u^m."""
    top = support_bound(profile)
    return UPoly([alpha2(m, profile.vals, profile.ell) * profile.ell ** (2 * m) for m in range(top + 1)])


# ---------------------------------------------------------------------------
# oracles


def _mod_int(x: Fraction, q: int, ell: int) -> int:
    x = Fraction(x)
    if x.denominator % ell == 0:
        raise ValueError(f"pairing value {x} is not {ell}-integral; h is outside the dual lattice")
    return x.numerator * pow(x.denominator, -1, q) % q


def _pairing_vector(alg: QuatAlgebra, j: int, h: HermMatrix, q: int, ell: int) -> np.ndarray:
    """Pairings of h against Lambda_j in kernel coordinate order."""
    L = HermLattice(alg, 3)  # 15 basis vectors: c1, c2, c3, then slots (0,1),(0,2),(1,2)
    by_slot = {}
    for b in L.basis[3:]:
        idx = next(s for s in range(3) if not b.a[s].is_zero())
        by_slot.setdefault(idx, []).append(b)
    if j == 2:
        vec = [h.pair(L.basis[0]), h.pair(L.basis[1])] + [b.pair(h) for b in by_slot[2]]
    elif j == 3:
        vec = [h.pair(b) for b in L.basis[:3]]
        for s in range(3):
            vec += [b.pair(h) for b in by_slot[s]]
    else:
        vec = [h.pair(L.basis[0])]
    return np.array([_mod_int(v, q, ell) for v in vec], dtype=np.int64)


def _check_block(h: HermMatrix, j: int):
    for i in range(j, 3):
        if h.c[i] != 0:
            raise ValueError(f"h has a nonzero diagonal entry outside the {j}x{j} block")
    for (r, s), idx in SLOT.items():
        if s >= j and not h.a[idx].is_zero():
            raise ValueError(f"h has a nonzero off-diagonal entry outside the {j}x{j} block")


def _root_sum(counts: np.ndarray, q: int) -> int:
    v = cyclo_reduce([int(c) for c in counts], q)
    if not v.is_rational() or v.to_fraction().denominator != 1:
        raise NonInvariantSum(f"non-Galois-invariant sum {v!r}")
    return int(v.to_fraction())


def interior_sum_oracle(
    j: int,
    ell: int,
    m: int,
    h: HermMatrix,
    alg: QuatAlgebra | None = None,
    budget: int | None = None,
    use_numba: bool | None = None,
) -> int:
    alg = alg or h.alg
    budget = budget_from_env() if budget is None else budget
    if j not in (1, 2, 3):
        raise ValueError("rank must be 1, 2 or 3")
    _check_block(h, j)
    if m == 0:
        return 1
    q = ell**m
    p = _pairing_vector(alg, j, h, q, ell)
    if j == 1:
        counts = np.bincount((np.arange(q, dtype=np.int64) * p[0]) % q, minlength=q)
        return _root_sum(counts, q)
    G = np.array(alg.norm_gram, dtype=np.int64)
    if j == 2:
        need = q**4 + q**3
        if need > budget:
            raise BudgetExceeded(need, budget)
        return _root_sum(_kernels.rank2_counts(G, p, q, use_numba), q)
    need = q**15
    if need > budget:
        raise BudgetExceeded(need, budget)
    counts = _kernels.rank3_counts(
        np.array(alg.mult_table), np.array(alg.conj_matrix), np.array(alg.trace_vector), G, p, q, use_numba
    )
    return _root_sum(counts, q)


def lem1_sum(alg: QuatAlgebra, ell: int, m: int, lam_val: int | None, use_numba: bool | None = None) -> int:
    """sum over x in B_0/l^m of exp(2 pi i lambda n(x) / l^m), lambda = l^lam_val (None: 0)."""
    q = ell**m
    lam = 0 if lam_val is None else ell**lam_val
    return _root_sum(_kernels.norm_counts(np.array(alg.norm_gram), lam, q, use_numba), q)


def oracle_series(j: int, ell: int, h: HermMatrix, mmax: int, **kw) -> list[int]:
    return [interior_sum_oracle(j, ell, m, h, **kw) for m in range(mmax + 1)]


def closed_series(profile: ValProfile) -> UPoly:
    """The closed form for sum_m I_m u^m."""
    return elementary_poly(profile.rank, profile.ell) * p_poly(profile)


# ---------------------------------------------------------------------------
# assembled local factor


@dataclass
class LocalFactorResult:
    rank: int
    ell: int
    vals: tuple[int, ...]
    poly: UPoly
    u: CycloValue
    value: CycloValue
    ramified: bool = False

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "ell": self.ell,
            "vals": list(self.vals),
            "poly": str(self.poly),
            "poly_coeffs": self.poly.to_json(),
            "u": self.u.to_json() if not self.u.is_rational() else str(self.u.to_fraction()),
            "value": self.value.to_json() if not self.value.is_rational() else str(self.value.to_fraction()),
            "ramified": self.ramified,
        }


def u_value(chi: DirichletChar, ell: int, r: int) -> CycloValue:
    return char_eval(chi, ell) * Fraction(1, ell ** (2 * r))


def local_factor(profile: ValProfile, r: int, chi: DirichletChar, D_B: int = 1) -> LocalFactorResult:
    if 2 * r <= 10:
        raise ValueError("weight must satisfy 2r > 10")
    ell = profile.ell
    u = u_value(chi, ell, r)
    if profile.rank == 0:
        one = CycloValue.rational(1)
        return LocalFactorResult(0, ell, (), UPoly([1]), u, one, D_B % ell == 0)
    P = p_poly(profile)
    value = P(u)
    for iota in range(profile.rank):
        value = value * (1 - u * ell ** (2 * iota))
    return LocalFactorResult(profile.rank, ell, profile.vals, P, u, value, D_B % ell == 0)


def s_factor(j: int, h_or_profile, r: int, chi: DirichletChar, ell: int, D_B: int = 1) -> CycloValue:
    if isinstance(h_or_profile, ValProfile):
        profile = h_or_profile
        if profile.rank != j or profile.ell != ell:
            raise ValueError("rank mismatch between profile and j")
    elif j == 0:
        if not h_or_profile.is_zero():
            raise ValueError("rank mismatch: j = 0 needs h = 0")
        profile = ValProfile(0, ell, ())
    else:
        profile = profile_of_diagonal(h_or_profile, j, ell)
    return local_factor(profile, r, chi, D_B).value
