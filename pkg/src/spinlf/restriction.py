"""Restricting q-expansions on G to the Siegel upper half-space.

Pulling exp(2 pi i tr(Z, h)) back along the diagonal embedding gives
exp(2 pi i tr(t z)) with t the entrywise symmetrization of h (off-diagonals
replaced by half their reduced trace).  The Siegel coefficient at t is then the
sum of the G-coefficients over the fiber of h above t.  Positivity bounds every
off-diagonal entry by n(a) <= c_j c_k, so the fiber is finite.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .jordan import SLOT, HermMatrix
from .quaternion import QuatAlgebra, _inverse
from .scalars import CycloValue, frac, frac_str


class MissingCoefficient(KeyError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__(f"{len(self.missing)} fiber element(s) absent from the coefficient map")


class SiegelIndex:
    """Symmetric 3x3 rational matrix, stored as a tuple of rows."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(frac(x) if not isinstance(x, Fraction) else x for x in r) for r in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("expected a 3x3 matrix")
        for i in range(3):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Siegel index must be symmetric")
        self.rows = rows

    @classmethod
    def scalar(cls, x) -> "SiegelIndex":
        x = frac(x)
        return cls([[x if i == j else 0 for j in range(3)] for i in range(3)])

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, SiegelIndex) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"SiegelIndex({self.key()})"

    def key(self) -> str:
        return ";".join(",".join(frac_str(x) for x in r) for r in self.rows)

    @classmethod
    def from_key(cls, s: str) -> "SiegelIndex":
        return cls([r.split(",") for r in s.split(";")])

    def to_json(self):
        return [[frac_str(x) for x in r] for r in self.rows]

    def is_psd(self) -> bool:
        m = self.rows
        minors = [m[i][i] for i in range(3)]
        for i, j in ((0, 1), (0, 2), (1, 2)):
            minors.append(m[i][i] * m[j][j] - m[i][j] ** 2)
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] ** 2)
            - m[0][1] * (m[0][1] * m[2][2] - m[1][2] * m[0][2])
            + m[0][2] * (m[0][1] * m[1][2] - m[1][1] * m[0][2])
        )
        return all(x >= 0 for x in minors) and det >= 0


def symmetrize(h: HermMatrix) -> SiegelIndex:
    return SiegelIndex(h.symmetrization())


@lru_cache(maxsize=None)
def _dual_frame(alg: QuatAlgebra, M: int):
    """Dual basis of B_0 scaled by 1/M, written on the order basis with a common
    denominator D: rows of the integer matrix E give D * coords(d_k / M)."""
    coords = [alg.order_coords(d) for d in alg.dual_basis]
    D = M
    for row in coords:
        for x in row:
            D = math.lcm(D, M * x.denominator)
    E = [[int(x * D / M) for x in row] for row in coords]
    return D, E


def _slot_candidates(alg: QuatAlgebra, M: int, bound: Fraction, half_trace: Fraction) -> np.ndarray:
    """Integer vectors X (order coords times D) of elements a of (1/M) B_0^dual
    with n(a) <= bound and trd(a)/2 = half_trace."""
    D, E = _dual_frame(alg, M)
    if bound < 0:
        return np.zeros((0, 4), dtype=np.int64)
    G = np.array(alg.norm_gram, dtype=np.int64)
    tv = np.array(alg.trace_vector, dtype=np.int64)
    # a = sum n_k d_k / M; the primal Gram inverts the dual one, so the box
    # |n_k| <= sqrt(2 bound M^2 G_kk) contains the whole norm ball
    radii = [math.isqrt(math.floor(2 * bound * M * M * G[k][k])) for k in range(4)]
    grid = np.stack(np.meshgrid(*(np.arange(-R, R + 1) for R in radii), indexing="ij"), -1).reshape(-1, 4)
    X = grid @ np.array(E, dtype=np.int64)
    target = 2 * half_trace * D
    if target.denominator != 1:
        return np.zeros((0, 4), dtype=np.int64)
    X = X[X @ tv == int(target)]
    nrm2 = np.einsum("is,st,it->i", X, G, X)
    # n(a) = nrm2 / (2 D^2) <= bound
    lim = bound * 2 * D * D
    return X[nrm2 * lim.denominator <= lim.numerator]


@lru_cache(maxsize=None)
def _triple_trace_tensor(alg: QuatAlgebra):
    C = np.array(alg.mult_table, dtype=np.int64)
    tv = np.array(alg.trace_vector, dtype=np.int64)
    # T[s,t,v] = trd(e_s e_t e_v)
    return np.einsum("stu,uvw,w->stv", C, C, tv)


def _diag_of(t: SiegelIndex, M: int):
    c = [t[i, i] for i in range(3)]
    if any(x < 0 for x in c) or any((x * M).denominator != 1 for x in c):
        return None
    return c


class Fiber:
    """Fiber of h above a Siegel index, held as integer arrays.

    Row n of `coords` is D times the order-basis coordinates of (a1, a2, a3);
    the diagonal is shared by every member.  Iterating yields HermMatrix."""

    def __init__(self, alg: QuatAlgebra, M: int, D: int, diag, coords: np.ndarray):
        self.alg = alg
        self.M = M
        self.D = D
        self.diag = tuple(diag)
        order = np.lexsort(coords.T[::-1]) if len(coords) else np.arange(0)
        self.coords = coords[order]

    def __len__(self):
        return len(self.coords)

    def _herm(self, row) -> HermMatrix:
        a = [self.alg.from_order_coords([Fraction(int(x), self.D) for x in row[4 * s : 4 * s + 4]]) for s in range(3)]
        return HermMatrix(self.diag, a)

    def __getitem__(self, n) -> HermMatrix:
        return self._herm(self.coords[n])

    def __iter__(self):
        for row in self.coords:
            yield self._herm(row)

    def __eq__(self, other):
        if not isinstance(other, Fiber):
            return NotImplemented
        if self.diag != other.diag or len(self) != len(other):
            return False
        # rescale to a common denominator before comparing
        L = math.lcm(self.D, other.D)
        return bool(np.array_equal(self.coords * (L // self.D), other.coords * (L // other.D)))

    def keys(self) -> set:
        return {tuple(int(x) for x in row) for row in self.coords}

    def key_of(self, h: HermMatrix):
        """Integer key of h in this fiber's coordinates, or None if h has the
        wrong diagonal or denominators."""
        if tuple(h.c) != self.diag:
            return None
        out = []
        for q in h.a:
            for x in self.alg.order_coords(q):
                y = x * self.D
                if y.denominator != 1:
                    return None
                out.append(int(y))
        return tuple(out)

    def symmetrization_holds(self, t: SiegelIndex) -> bool:
        tv = np.array(self.alg.trace_vector, dtype=np.int64)
        for (r, s), idx in SLOT.items():
            tr = self.coords[:, 4 * idx : 4 * idx + 4] @ tv
            # trd(a)/2 = tr / (2D)
            want = t[r, s] * 2 * self.D
            if want.denominator != 1 or not np.all(tr == int(want)):
                return False
        return all(self.diag[i] == t[i, i] for i in range(3))

    def psd_holds(self) -> bool:
        """All principal minors nonnegative, in exact integer arithmetic."""
        if len(self) == 0:
            return True
        c = self.diag
        if any(x < 0 for x in c):
            return False
        D, M = self.D, self.M
        G = np.array(self.alg.norm_gram, dtype=np.int64)
        A = [self.coords[:, 4 * s : 4 * s + 4] for s in range(3)]
        nrm = [np.einsum("is,st,it->i", a, G, a) for a in A]
        p = [int(x * M) for x in c]
        for idx, (r, s) in ((0, (1, 2)), (1, (0, 2)), (2, (0, 1))):
            # c_r c_s - n(a) >= 0, times 2 D^2 M^2
            if np.any(2 * D * D * p[r] * p[s] - M * M * nrm[idx] < 0):
                return False
        tri = _rowwise_triple_trace(self.alg, A[0], A[1], A[2])
        det = 2 * D**3 * p[0] * p[1] * p[2] - D * M * M * (p[0] * nrm[0] + p[1] * nrm[1] + p[2] * nrm[2]) + 2 * M**3 * tri
        return bool(np.all(det >= 0))

    def to_json(self):
        return [h.to_json() for h in self]


def _rowwise_triple_trace(alg: QuatAlgebra, A1, A2, A3) -> np.ndarray:
    """trd((a1 a2) a3) row by row, via the multiplication table."""
    C = np.array(alg.mult_table, dtype=np.int64)
    tv = np.array(alg.trace_vector, dtype=np.int64)
    prod = np.einsum("is,it,stu->iu", A1, A2, C)
    prod = np.einsum("is,it,stu->iu", prod, A3, C)
    return prod @ tv


def fiber_over_t(t, M: int = 1, alg: QuatAlgebra | None = None) -> Fiber:
    """All h in (1/M) H_3(B_0)^dual, psd, symmetrizing to t."""
    alg = alg or QuatAlgebra.hamilton()
    if not isinstance(t, SiegelIndex):
        t = SiegelIndex(t)
    D, _ = _dual_frame(alg, M)
    c = _diag_of(t, M)
    empty = np.zeros((0, 12), dtype=np.int64)
    if c is None:
        return Fiber(alg, M, D, [t[i, i] for i in range(3)], empty)
    A = []
    for (r, s), idx in sorted(SLOT.items(), key=lambda kv: kv[1]):
        A.append(_slot_candidates(alg, M, c[r] * c[s], t[r, s]))
    if any(len(a) == 0 for a in A):
        return Fiber(alg, M, D, c, empty)
    if max(int(np.abs(a).max()) for a in A) > 2**12:
        raise OverflowError("fiber enumeration exceeds the int64 fast path")
    G = np.array(alg.norm_gram, dtype=np.int64)
    # scaled norms: n(a_i) = nrm[i] / (2 D^2)
    nrm = [np.einsum("is,st,it->i", a, G, a) for a in A]
    T = _triple_trace_tensor(alg)
    # 2 D^3 M^3 N(h), with c_i = p_i / M
    p = [int(x * M) for x in c]
    pair12 = np.einsum("stv,is,jt->ijv", T, A[0], A[1])
    base12 = 2 * D**3 * p[0] * p[1] * p[2] - D * M * M * (p[0] * nrm[0][:, None] + p[1] * nrm[1][None, :])
    rows = []
    for k in range(len(A[2])):
        lhs = base12 - D * M * M * p[2] * nrm[2][k] + 2 * M**3 * (pair12 @ A[2][k])
        i, j = np.nonzero(lhs >= 0)
        if len(i):
            rows.append(np.hstack([A[0][i], A[1][j], np.broadcast_to(A[2][k], (len(i), 4))]))
    coords = np.vstack(rows) if rows else empty
    return Fiber(alg, M, D, c, coords)


def fiber_brute_force(t, M: int = 1, alg: QuatAlgebra | None = None) -> Fiber:
    """Reference search: a box in order-basis coordinates with membership tested
    by pairing against B_0, then the joint determinant computed with the
    product taken as (a1 a2) a3."""
    alg = alg or QuatAlgebra.hamilton()
    if not isinstance(t, SiegelIndex):
        t = SiegelIndex(t)
    D, _ = _dual_frame(alg, M)
    c = _diag_of(t, M)
    empty = np.zeros((0, 12), dtype=np.int64)
    if c is None:
        return Fiber(alg, M, D, [t[i, i] for i in range(3)], empty)
    G = np.array(alg.norm_gram, dtype=np.int64)
    tv = np.array(alg.trace_vector, dtype=np.int64)
    Ginv = _inverse_gram(alg)
    per_slot = {}
    for (r, s), idx in SLOT.items():
        bound = c[r] * c[s]
        # on n(x) <= bound, |x_k| <= sqrt(2 bound (G^-1)_kk) in order coordinates
        radii = [math.isqrt(math.floor(2 * bound * Ginv[k][k] * D * D)) + 1 for k in range(4)]
        X = np.stack(np.meshgrid(*(np.arange(-R, R + 1) for R in radii), indexing="ij"), -1).reshape(-1, 4)
        # x in (1/M) B_0^dual  <=>  M trd(x conj e_k) in Z for every basis e_k
        X = X[np.all((M * (X @ G)) % D == 0, axis=1)]
        want = 2 * D * t[r, s]
        X = X[X @ tv == int(want)] if want.denominator == 1 else X[:0]
        nrm2 = np.einsum("is,st,it->i", X, G, X)
        lim = bound * 2 * D * D
        per_slot[idx] = X[nrm2 * lim.denominator <= lim.numerator]
    A = [per_slot[i] for i in range(3)]
    n1, n2, n3 = (len(a) for a in A)
    if not (n1 and n2 and n3):
        return Fiber(alg, M, D, c, empty)
    C = np.array(alg.mult_table, dtype=np.int64)
    # trd(x e_v) for x on the order basis
    Tm = np.einsum("svu,u->sv", C, tv)
    I, J = (g.ravel() for g in np.meshgrid(np.arange(n1), np.arange(n2), indexing="ij"))
    prod12 = np.einsum("is,it,stu->iu", A[0][I], A[1][J], C)
    nrm = [np.einsum("is,st,it->i", a, G, a) for a in A]
    p = [int(x * M) for x in c]
    base = 2 * D**3 * p[0] * p[1] * p[2] - D * M * M * (p[0] * nrm[0][I] + p[1] * nrm[1][J])
    tr_with = prod12 @ Tm
    rows = []
    for k in range(n3):
        det = base - D * M * M * p[2] * nrm[2][k] + 2 * M**3 * (tr_with @ A[2][k])
        keep = np.nonzero(det >= 0)[0]
        rows.append(np.hstack([A[0][I[keep]], A[1][J[keep]], np.broadcast_to(A[2][k], (len(keep), 4))]))
    return Fiber(alg, M, D, c, np.vstack(rows))


@lru_cache(maxsize=None)
def _inverse_gram(alg: QuatAlgebra):
    return _inverse([[Fraction(g) for g in row] for row in alg.norm_gram])


def restrict_expansion(coeffs: dict, targets, M: int = 1, alg: QuatAlgebra | None = None, policy: str = "strict") -> dict:
    """{SiegelIndex: sum of coeffs over the fiber}.  With policy "strict" a fiber
    element missing from coeffs is an error; "zero-fill" treats it as 0 and warns."""
    if policy not in ("strict", "zero-fill"):
        raise ValueError("policy must be 'strict' or 'zero-fill'")
    if alg is None:
        alg = next(iter(coeffs)).alg if coeffs else QuatAlgebra.hamilton()
    out = {}
    for t in targets:
        if not isinstance(t, SiegelIndex):
            t = SiegelIndex(t)
        fiber = fiber_over_t(t, M, alg)
        present = {}
        for h, v in coeffs.items():
            k = fiber.key_of(h)
            if k is not None:
                present[k] = v
        fkeys = fiber.keys()
        missing = fkeys - present.keys()
        if missing and policy == "strict":
            raise MissingCoefficient(sorted(missing))
        if missing:
            warnings.warn(f"zero-filling {len(missing)} coefficient(s) above {t.key()}", stacklevel=2)
        total = CycloValue.rational(0)
        for k, v in present.items():
            if k in fkeys:
                total = total + v
        out[t] = total
    return out
