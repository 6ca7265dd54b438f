"""The Spin L-function side: Euler factors from Satake parameters, the
archimedean factor Gamma(s, Spin), and truncations of the Dirichlet series in
Fourier coefficients a(lambda m^-1 T c(m)) indexed by Hermite normal forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .local_factors import UPoly
from .restriction import SiegelIndex
from .scalars import CycloValue, DirichletChar, GradedConstant, char_eval, factorize, padic_val


@dataclass(frozen=True)
class SatakeParams:
    b0: object
    b1: object = 1
    b2: object = 1
    b3: object = 1

    def __post_init__(self):
        for name in ("b0", "b1", "b2", "b3"):
            object.__setattr__(self, name, CycloValue.coerce(getattr(self, name)))
        if self.b0.is_zero():
            raise ValueError("b0 must be nonzero")

    def roots(self, chi_q) -> dict[frozenset, CycloValue]:
        """a_J = chi(q) b0 prod_{j in J} b_j for every J subset of {1,2,3}."""
        chi_q = CycloValue.coerce(chi_q)
        bs = {1: self.b1, 2: self.b2, 3: self.b3}
        out = {}
        for k in range(4):
            for J in itertools.combinations((1, 2, 3), k):
                v = chi_q * self.b0
                for j in J:
                    v = v * bs[j]
                out[frozenset(J)] = v
        return out


def spin_euler_factor(p: SatakeParams, chi_q=1) -> UPoly:
    """prod_J (1 - a_J X), degree 8 in X."""
    out = UPoly([1], "X")
    for a in p.roots(chi_q).values():
        out = out * UPoly([1, -a], "X")
    return out


class EulerPole(ZeroDivisionError):
    def __init__(self, q: int):
        self.q = q
        super().__init__(f"Euler factor at q = {q} vanishes at the evaluation point")


def partial_euler_product(params: dict, chi: DirichletChar, s: int, primes_bound: int | None = None, M: int = 1):
    """prod over q <= bound, q prime to M, of spin_euler_factor(q)(q^-s)^-1."""
    out = CycloValue.rational(1)
    for q in sorted(params):
        if primes_bound is not None and q > primes_bound:
            continue
        if M % q == 0:
            continue
        P = spin_euler_factor(params[q], char_eval(chi, q))
        v = P(Fraction(1, q**s) if s >= 0 else Fraction(q ** (-s)))
        if v.is_zero():
            raise EulerPole(q)
        out = out * v.inverse()
    return out


def spin_gamma(s: int, r: int) -> GradedConstant:
    """Gamma(s, Spin) = Gamma_C(s+r-4) Gamma_C(s+r-3) Gamma_C(s+r-2) Gamma_C(s+3r-5),
    with Gamma_C(x) = 2 (2 pi)^-x Gamma(x)."""
    args = (s + r - 4, s + r - 3, s + r - 2, s + 3 * r - 5)
    if min(args) < 1:
        raise ValueError(f"Gamma_C at nonpositive argument {min(args)}")
    rational = Fraction(1)
    for x in args:
        rational *= Fraction(2 * math.factorial(x - 1), 2**x)
    return GradedConstant(rational, -sum(args), 0)


def main_theorem_pi_power(s0: int, r: int) -> int:
    """Power of pi dividing the critical value L(s0, Spin) in the algebraicity statement."""
    return 4 * s0 + 6 * r - 6


# ---------------------------------------------------------------------------
# Hermite normal forms


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _adjugate(m) -> list[list[int]]:
    """Transpose of the cofactor matrix, so that m adj(m) = det(m) 1."""
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            cof[i][j] = (-1) ** (i + j) * minor
    return [[cof[j][i] for j in range(3)] for i in range(3)]


def cofactor_c(m) -> list[list[int]]:
    """c(m) = det(m) (m^-1)^t, the cofactor matrix."""
    adj = _adjugate(m)
    return [[adj[j][i] for j in range(3)] for i in range(3)]


def hnf_of_det(n: int) -> list[tuple]:
    """Representatives of M_3^+(Z) / SL_3(Z) with determinant n.

    The group acts on the right (column operations), so representatives are
    lower triangular with 0 <= m[i][k] < m[i][i] for k < i."""
    out = []
    for d1 in range(1, n + 1):
        if n % d1:
            continue
        for d2 in range(1, n // d1 + 1):
            if (n // d1) % d2:
                continue
            d3 = n // (d1 * d2)
            for x21 in range(d2):
                for x31 in range(d3):
                    for x32 in range(d3):
                        out.append(((d1, 0, 0), (x21, d2, 0), (x31, x32, d3)))
    return out


def _mat_t(T) -> list[list[Fraction]]:
    if isinstance(T, SiegelIndex):
        return [list(r) for r in T.rows]
    return [[Fraction(x) for x in r] for r in T]


def xi_image(m, T) -> SiegelIndex:
    """m^-1 T c(m) = adj(m) T adj(m)^t / det(m), a symmetric matrix."""
    T = _mat_t(T)
    adj = _adjugate(m)
    d = _det3(m)
    prod = [[sum(adj[i][k] * T[k][l] * adj[j][l] for k in range(3) for l in range(3)) / d for j in range(3)] for i in range(3)]
    return SiegelIndex(prod)


def is_half_integral(X: SiegelIndex) -> bool:
    return all(X[i, i].denominator == 1 for i in range(3)) and all(
        (2 * X[i, j]).denominator == 1 for i in range(3) for j in range(3)
    )


def xi_passes(m, T) -> bool:
    """m^-1 T c(m) lies in the lattice of half-integral matrices containing T."""
    return is_half_integral(xi_image(m, T))


@dataclass(frozen=True)
class HNFClass:
    m: tuple
    det: int
    xi: bool | None

    def to_json(self):
        out = {"m": [list(r) for r in self.m], "det": self.det}
        if self.xi is not None:
            out["xi"] = self.xi
        return out


def hnf_classes(det_bound: int, T=None, filter: str = "none") -> list[HNFClass]:
    if det_bound < 1:
        raise ValueError("det_bound must be at least 1")
    if filter not in ("none", "xi"):
        raise ValueError("filter must be 'none' or 'xi'")
    out = []
    for n in range(1, det_bound + 1):
        for m in hnf_of_det(n):
            xi = xi_passes(m, T) if T is not None else None
            if filter == "xi" and not xi:
                continue
            out.append(HNFClass(m, n, xi))
    return out


def sublattice_classes_exhaustive(n: int, box: int | None = None) -> int:
    """Number of SL_3(Z) classes of determinant n found by scanning every integer
    matrix with entries in [0, box] and identifying two matrices when they span
    the same lattice mod n (an index-n lattice contains n Z^3)."""
    box = n if box is None else box
    vals = np.arange(0, box + 1, dtype=np.int64)
    cols = np.array(list(itertools.product(vals, repeat=3)), dtype=np.int64)
    # det(c1, c2, c3) = c1 . (c2 x c3), vectorized over the (c2, c3) pairs
    cross = np.cross(cols[:, None, :], cols[None, :, :])
    seen = set()
    for c1 in cols:
        i2, i3 = np.nonzero(cross @ c1 == n)
        for a, b in zip(i2, i3):
            gens = tuple(sorted(tuple(int(x) % n for x in v) for v in (c1, cols[a], cols[b])))
            seen.add(_span_mod(gens, n))
    return len(seen)


@lru_cache(maxsize=None)
def _span_mod(gens: tuple, n: int) -> frozenset:
    span = {(0, 0, 0)}
    for g in gens:
        span = {tuple((v[i] + t * g[i]) % n for i in range(3)) for v in span for t in range(n)}
    return frozenset(span)


# ---------------------------------------------------------------------------
# local weights and the Dirichlet series


def psi_weight(lam, M: int) -> Fraction:
    """Psi(lambda) = prod_v Psi_v(lambda).

    For v | M: (1 - 1/v)|lambda|_v on Z_v, -1 on v^-1 Z_v minus Z_v, else 0.
    For v prime to M: |lambda|_v on Z_v, else 0."""
    lam = Fraction(lam)
    if lam == 0:
        return Fraction(0)
    primes = set(factorize(lam.numerator)) | set(factorize(lam.denominator)) | set(factorize(M))
    out = Fraction(1)
    for v in sorted(primes):
        e = padic_val(lam, v)
        if M % v == 0:
            if e >= 0:
                out *= Fraction(v - 1, v) * Fraction(1, v**e)
            elif e == -1:
                out *= -1
            else:
                return Fraction(0)
        else:
            if e < 0:
                return Fraction(0)
            out *= Fraction(1, v**e)
    return out


class MissingOracleEntry(KeyError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"no Fourier coefficient supplied at {key}")


class CoeffOracle:
    """Externally supplied Fourier coefficients a(T) of a Siegel form.

    With default=None every query must be present; otherwise absent indices
    read as the default.  Indices are stored under SiegelIndex keys."""

    def __init__(self, table: dict | None = None, default=None):
        self.table = {}
        for k, v in (table or {}).items():
            self.table[k if isinstance(k, SiegelIndex) else SiegelIndex(k)] = CycloValue.coerce(v)
        self.default = None if default is None else CycloValue.coerce(default)

    @classmethod
    def delta(cls, T) -> "CoeffOracle":
        return cls({T if isinstance(T, SiegelIndex) else SiegelIndex(T): 1}, default=0)

    @classmethod
    def zero(cls) -> "CoeffOracle":
        return cls({}, default=0)

    @classmethod
    def from_json(cls, entries, default=None) -> "CoeffOracle":
        return cls({SiegelIndex(e["t"]): Fraction(e["a"]) for e in entries}, default)

    def __call__(self, X) -> CycloValue:
        if not isinstance(X, SiegelIndex):
            X = SiegelIndex(X)
        if X in self.table:
            return self.table[X]
        if self.default is None:
            raise MissingOracleEntry(X.key())
        return self.default

    def rescaled(self, S: int) -> "CoeffOracle":
        """The U_S re-indexing h -> a(S h)."""
        table = {}
        for k in self.table:
            if all((x / S).denominator == 1 or (2 * x / S).denominator == 1 for r in k.rows for x in r):
                table[SiegelIndex([[x / S for x in r] for r in k.rows])] = self.table[k]
        return CoeffOracle(table, self.default)


def evdokimov_partial(T, oracle: CoeffOracle, chi: DirichletChar, s: int, r: int, lam_bound: int, det_bound: int, M: int = 1):
    """Truncated sum over 1 <= lambda <= lam_bound prime to M and HNF classes m
    of det <= det_bound passing Xi, of
        a(lambda m^-1 T c(m)) chi(lambda det m) / (lambda^s det(m)^(s-2r+3))."""
    total = CycloValue.rational(0)
    classes = hnf_classes(det_bound, T, filter="xi")
    for lam in range(1, lam_bound + 1):
        if math.gcd(lam, M) != 1:
            continue
        for cls in classes:
            X = xi_image(cls.m, T)
            a = oracle(SiegelIndex([[lam * x for x in row] for row in X.rows]))
            if a.is_zero():
                continue
            w = char_eval(chi, lam * cls.det)
            if w.is_zero():
                continue
            scale = Fraction(1, lam**s) * Fraction(cls.det) ** (-(s - 2 * r + 3))
            total = total + a * w * scale
    return total


def omega_count(M: int) -> int:
    """Number of prime divisors of M, with multiplicity."""
    return sum(factorize(M).values())


def l_correction(M: int, s: int) -> Fraction:
    """L_M(s - 2, f, chi, Spin) = (-1)^Omega(M) M^(-2s) for squarefree M."""
    if M < 1:
        raise ValueError("M must be positive")
    f = factorize(M)
    if any(e > 1 for e in f.values()):
        raise ValueError(f"M = {M} is not squarefree")
    return Fraction((-1) ** omega_count(M)) * Fraction(M) ** (-2 * s)


def implicit_constant(T) -> Fraction:
    """det(T)^3."""
    return Fraction(_det3(_mat_t(T))) ** 3
