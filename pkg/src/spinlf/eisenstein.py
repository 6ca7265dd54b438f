"""Rational kernels of the Fourier coefficients of the holomorphic Eisenstein
series on G, with every power of pi and i carried symbolically.

The rank-j kernel at a block-diagonal index h is

    L(j)^-1 * N_j(h)^(2r-2j-1) * Vol(H_j(B_0)^dual) * prod_{l | N_j(h)} P_l(h, chi(l) l^-2r)

where L(j) is a product of normalized Dirichlet L-values.  L(j) is built from
R(n) = Gamma(n) L(chi, n) / (2 pi i)^n, which is an element of Q(chi) when the
parity of chi matches n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .jordan import HermLattice, HermMatrix, in_dual_lattice, lattice_dual
from .local_factors import ValProfile, p_poly, profile_of_diagonal, u_value
from .quaternion import QuatAlgebra
from .scalars import (
    CycloValue,
    DirichletChar,
    GradedConstant,
    char_eval,
    factorize,
    frac_str,
    l_value_ratio,
)

# "display": L(1) = R(2r-4)/16, L(2) = -R(2r-2)R(2r-4)/64, L(3) = -R(2r)R(2r-2)R(2r-4)/64,
#   the normalizers as written next to the rationality theorem.
# "euler": L(j) = (2i)^(-j(j-1)) prod_{iota<j} R(2r-2 iota), what the rank-j local
#   factors multiply out to (prod_l S_l^(j) = prod_iota L(chi, 2r-2 iota)^-1 prod P).
CONVENTIONS = ("display", "euler")


def gamma_j_symbolic(j: int, alpha: int) -> GradedConstant:
    """Gamma_j(alpha) = prod_{iota<j} (2 pi i)^alpha pi^(-2 iota) Gamma(alpha - 2 iota)."""
    if j < 0:
        raise ValueError("rank must be nonnegative")
    if j == 0:
        return GradedConstant(1, 0, 0)
    if alpha - 2 * (j - 1) < 1:
        raise ValueError(f"Gamma at nonpositive integer {alpha - 2 * (j - 1)}")
    rational = Fraction(2) ** (j * alpha)
    for iota in range(j):
        rational *= math.factorial(alpha - 2 * iota - 1)
    return GradedConstant(rational, j * alpha - j * (j - 1), j * alpha)


def c_infinity(s: int, r: int) -> GradedConstant:
    """pi^-(3s+3r-6) Gamma(s+r) Gamma(s+r-2) Gamma(s+r-4)."""
    rational = Fraction(1)
    for shift in (0, 2, 4):
        n = s + r - shift
        if n < 1:
            raise ValueError(f"Gamma at nonpositive integer {n}")
        rational *= math.factorial(n - 1)
    return GradedConstant(rational, -(3 * s + 3 * r - 6), 0)


def _check_weight(r: int):
    if 2 * r <= 10:
        raise ValueError(f"weight 2r = {2 * r} must exceed 10")


def l_normalizer(j: int, r: int, chi: DirichletChar, convention: str = "display") -> CycloValue:
    """L(j) as an exact element of Q(chi); raises ParityError when some
    L(chi, n) involved is not a Bernoulli period."""
    _check_weight(r)
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if j == 0:
        return CycloValue.rational(1)
    if j not in (1, 2, 3):
        raise ValueError("rank must be 0..3")
    if convention == "euler":
        args = tuple(2 * r - 2 * iota for iota in range(j))
        deficit = j * (j - 1)
    else:
        args = {1: (2 * r - 4,), 2: (2 * r - 2, 2 * r - 4), 3: (2 * r, 2 * r - 2, 2 * r - 4)}[j]
        # (2 pi i)^(sum args) / ((2i)^(2rj) pi^(sum args)) leaves (2i)^-deficit
        deficit = 2 * r * j - sum(args)
    # deficit is even, so (2i)^-deficit is rational
    out = CycloValue.rational(Fraction((-1) ** (deficit // 2), 2**deficit))
    for n in args:
        out = out * l_value_ratio(chi, n)
    return out


def dual_volume(alg: QuatAlgebra, j: int) -> Fraction:
    if j == 0:
        return Fraction(1)
    _, _, _, vol_dual = lattice_dual(HermLattice(alg, j))
    return Fraction(vol_dual)


def _block_rank(h: HermMatrix) -> int:
    """Size of the smallest upper-left block containing every nonzero entry."""
    j = 0
    for i in range(3):
        if h.c[i] != 0:
            j = max(j, i + 1)
    for (r, s), idx in ((0, 1), 2), ((0, 2), 1), ((1, 2), 0):
        if not h.a[idx].is_zero():
            j = max(j, s + 1)
    return j


@dataclass
class KernelCoeff:
    h: HermMatrix
    j: int
    r: int
    chi: DirichletChar
    value: CycloValue
    normalization: GradedConstant
    factors: dict = field(default_factory=dict)

    def in_char_field(self) -> bool:
        return in_char_field(self.value, self.chi)

    def to_json(self) -> dict:
        return {
            "h": self.h.to_json(),
            "rank": self.j,
            "r": self.r,
            "char": self.chi.to_json(),
            "value": cyclo_json(self.value),
            "pi_exponent": self.normalization.pi_exponent,
            "factors": self.factors,
        }


def cyclo_json(v: CycloValue):
    return frac_str(v.to_fraction()) if v.is_rational() else v.to_json()


def in_char_field(v: CycloValue, chi: DirichletChar) -> bool:
    """v lies in Q(chi) = Q(zeta_ord) with ord the order of chi."""
    return v.in_subfield(max(1, chi.order))


def kernel_coeff(
    h: HermMatrix, r: int, chi: DirichletChar, convention: str = "display", profiles: dict | None = None
) -> KernelCoeff:
    """Rank-j kernel at a block-diagonal index h.

    Local polynomials come from the elementary-divisor profile at each l | N_j(h);
    for diagonal h these are read off directly, otherwise pass profiles
    {l: ValProfile}."""
    _check_weight(r)
    alg = h.alg
    j = _block_rank(h)
    if j == 0:
        one = CycloValue.rational(1)
        return KernelCoeff(h, 0, r, chi, one, GradedConstant(1), {"Linv": "1", "Nj_power": "1", "vol": "1", "local": []})
    Nj = h.partial_norm(j)
    if Nj == 0:
        raise ValueError(f"h is not of exact rank {j} in its {j}x{j} block")
    if not in_dual_lattice(h, HermLattice(alg, j)):
        raise ValueError("h is not in the dual lattice of H_j(B_0)")
    Lj = l_normalizer(j, r, chi, convention)
    n_power = Fraction(Nj) ** (2 * r - 2 * j - 1)
    vol = dual_volume(alg, j)
    value = Lj.inverse() * (n_power * vol)
    local = []
    num = abs(Fraction(Nj).numerator)
    for ell in sorted(factorize(num)):
        if profiles and ell in profiles:
            prof = profiles[ell]
        else:
            prof = profile_of_diagonal(h, j, ell)
        P = p_poly(prof)
        pv = P(u_value(chi, ell, r))
        value = value * pv
        local.append({"ell": ell, "vals": list(prof.vals), "poly": str(P), "ramified": alg.D_B % ell == 0})
    factors = {
        "Linv": cyclo_json(Lj.inverse()),
        "Nj_power": frac_str(n_power),
        "vol": frac_str(vol),
        "local": local,
        "convention": convention,
    }
    return KernelCoeff(h, j, r, chi, value, GradedConstant(1, 0, 0), factors)


def delta_on_exponential(h: HermMatrix):
    """Eigenvalue of the differential operator on exp(2 pi i tr(Z, h)): N(h)."""
    return h.norm()


def normalization_bridge(r: int, chi: DirichletChar, alg: QuatAlgebra | None = None) -> GradedConstant:
    """D_B^r C_inf(r, r) L(chi, 2r) L^(D_B)(chi, 2r-2) L(chi, 2r-4).

    Each Gamma(n) L(chi, n) equals R(n) (2 pi i)^n, so the pi-powers of C_inf
    cancel against those of the L-values and what remains is
    D_B^r 2^(6r-6) i^(6r-6) R(2r) R(2r-2) R(2r-4) prod_{p | D_B} (1 - chi(p) p^(2-2r))."""
    _check_weight(r)
    alg = alg or QuatAlgebra.hamilton()
    D = alg.D_B
    part = CycloValue.rational(Fraction(D) ** r * 2 ** (6 * r - 6))
    for n in (2 * r, 2 * r - 2, 2 * r - 4):
        part = part * l_value_ratio(chi, n)
    for p in factorize(D):
        part = part * (1 - char_eval(chi, p) * Fraction(1, p ** (2 * r - 2)))
    c_inf = c_infinity(r, r)
    pi_exp = c_inf.pi_exponent + (2 * r) + (2 * r - 2) + (2 * r - 4)
    return GradedConstant(part, pi_exp, 6 * r - 6)
