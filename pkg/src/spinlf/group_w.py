"""The 32-dimensional module W = Q + H_3(B) + H_3(B) + Q and the part of its
similitude group G that we can write down: the image of GSp_6, the unipotents
n(X) and nbar(X), the Bruhat representatives and the Atkin-Lehner elements.

Vectors are stored as 32 coordinates: a, then b and c as 15 coordinates each
(c1, c2, c3, a1[4], a2[4], a3[4] on the order basis), then d.  Group elements
act on the right by exact 32x32 matrices.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .jordan import HermMatrix
from .quaternion import QuatAlgebra, _det, _inverse
from .scalars import GaussianRational, frac, frac_str

DIM = 32
B_SLICE = slice(1, 16)
C_SLICE = slice(16, 31)


# ---------------------------------------------------------------------------
# coordinate arithmetic over any commutative coefficient ring


class _Coords:
    """Jordan operations on 15-coordinate vectors, using integral structure
    constants of the order so that integer input stays integer."""

    def __init__(self, alg: QuatAlgebra):
        self.C = alg.mult_table
        self.K = alg.conj_matrix
        self.tv = alg.trace_vector
        self.G = alg.norm_gram
        # sparse forms of the tables; these loops run millions of times
        self._mul = [
            [(4 * s + t, self.C[s][t][u]) for s in range(4) for t in range(4) if self.C[s][t][u]] for u in range(4)
        ]
        self._conj = [[(s, self.K[s][u]) for s in range(4) if self.K[s][u]] for u in range(4)]
        self._tr = [(s, t) for s, t in enumerate(self.tv) if t]
        self._bil = [(s, t, self.G[s][t]) for s in range(4) for t in range(4) if self.G[s][t]]
        self._nrm = [(i, i, self.G[i][i] // 2) for i in range(4) if self.G[i][i]]
        self._nrm += [(i, k, self.G[i][k]) for i in range(4) for k in range(i + 1, 4) if self.G[i][k]]

    def qmul(self, x, y):
        x0, x1, x2, x3 = x
        p = [x0 * v for v in y] + [x1 * v for v in y] + [x2 * v for v in y] + [x3 * v for v in y]
        out = []
        for terms in self._mul:
            acc = 0
            for i, c in terms:
                acc = acc + c * p[i] if c != 1 else acc + p[i]
            out.append(acc)
        return out

    def qconj(self, x):
        out = []
        for terms in self._conj:
            acc = 0
            for s, c in terms:
                acc = acc + c * x[s]
            out.append(acc)
        return out

    def qtrace(self, x):
        acc = 0
        for s, t in self._tr:
            acc = acc + t * x[s]
        return acc

    def bil(self, x, y):
        # trd(x conj y)
        acc = 0
        for s, t, g in self._bil:
            acc = acc + g * x[s] * y[t]
        return acc

    def qnorm(self, x):
        acc = 0
        for i, k, g in self._nrm:
            acc = acc + g * x[i] * x[k]
        return acc

    @staticmethod
    def split(h):
        return h[0], h[1], h[2], h[3:7], h[7:11], h[11:15]

    def pair(self, x, y):
        c1, c2, c3, a1, a2, a3 = self.split(x)
        d1, d2, d3, b1, b2, b3 = self.split(y)
        return c1 * d1 + c2 * d2 + c3 * d3 + self.bil(a1, b1) + self.bil(a2, b2) + self.bil(a3, b3)

    def sharp(self, x):
        c1, c2, c3, a1, a2, a3 = self.split(x)
        s1 = [p - c1 * q for p, q in zip(self.qconj(self.qmul(a2, a3)), a1)]
        s2 = [p - c2 * q for p, q in zip(self.qconj(self.qmul(a3, a1)), a2)]
        s3 = [p - c3 * q for p, q in zip(self.qconj(self.qmul(a1, a2)), a3)]
        return [c2 * c3 - self.qnorm(a1), c1 * c3 - self.qnorm(a2), c1 * c2 - self.qnorm(a3)] + s1 + s2 + s3

    def norm(self, x):
        c1, c2, c3, a1, a2, a3 = self.split(x)
        tr = self.qtrace(self.qmul(self.qmul(a1, a2), a3))
        return c1 * c2 * c3 - c1 * self.qnorm(a1) - c2 * self.qnorm(a2) - c3 * self.qnorm(a3) + tr

    def cross(self, x, y):
        s = [p + q for p, q in zip(x, y)]
        return [p - q - r for p, q, r in zip(self.sharp(s), self.sharp(x), self.sharp(y))]


@lru_cache(maxsize=None)
def _coords_for(alg: QuatAlgebra) -> _Coords:
    return _Coords(alg)


# ---------------------------------------------------------------------------
# vectors


class WVector:
    __slots__ = ("alg", "coords")

    def __init__(self, alg: QuatAlgebra, coords: Sequence):
        if len(coords) != DIM:
            raise ValueError(f"W has {DIM} coordinates, got {len(coords)}")
        self.alg = alg
        self.coords = tuple(coords)

    @classmethod
    def from_parts(cls, alg: QuatAlgebra, a, b: HermMatrix, c: HermMatrix, d) -> "WVector":
        return cls(alg, (a,) + tuple(b.coords()) + tuple(c.coords()) + (d,))

    @classmethod
    def basis(cls, alg: QuatAlgebra, s: int) -> "WVector":
        v = [0] * DIM
        v[s] = 1
        return cls(alg, v)

    @classmethod
    def e(cls, alg: QuatAlgebra) -> "WVector":
        return cls.basis(alg, 0)

    @classmethod
    def f(cls, alg: QuatAlgebra) -> "WVector":
        return cls.basis(alg, DIM - 1)

    @property
    def a(self):
        return self.coords[0]

    @property
    def d(self):
        return self.coords[-1]

    @property
    def b(self) -> HermMatrix:
        return HermMatrix.from_coords(self.alg, self.coords[B_SLICE])

    @property
    def c(self) -> HermMatrix:
        return HermMatrix.from_coords(self.alg, self.coords[C_SLICE])

    def __add__(self, o: "WVector") -> "WVector":
        return WVector(self.alg, [x + y for x, y in zip(self.coords, o.coords)])

    def __sub__(self, o: "WVector") -> "WVector":
        return WVector(self.alg, [x - y for x, y in zip(self.coords, o.coords)])

    def scale(self, lam) -> "WVector":
        return WVector(self.alg, [lam * x for x in self.coords])

    def __eq__(self, o):
        return isinstance(o, WVector) and self.alg == o.alg and all(x == y for x, y in zip(self.coords, o.coords))

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"WVector({list(self.coords)})"

    def to_json(self) -> list:
        return [frac_str(x) if not isinstance(x, GaussianRational) else repr(x) for x in self.coords]


def symplectic(u: WVector, v: WVector):
    """<u, v> = a d' - tr(b, c') + tr(c, b') - d a'."""
    K = _coords_for(u.alg)
    x, y = u.coords, v.coords
    return x[0] * y[-1] - K.pair(x[B_SLICE], y[C_SLICE]) + K.pair(x[C_SLICE], y[B_SLICE]) - x[-1] * y[0]


def quartic(u: WVector):
    K = _coords_for(u.alg)
    x = u.coords
    a, b, c, d = x[0], x[B_SLICE], x[C_SLICE], x[-1]
    t = a * d - K.pair(b, c)
    return t * t + 4 * a * K.norm(c) + 4 * d * K.norm(b) - 4 * K.pair(K.sharp(b), K.sharp(c))


def forms(u: WVector, v: WVector):
    return symplectic(u, v), quartic(u)


@lru_cache(maxsize=None)
def symplectic_gram(alg: QuatAlgebra) -> np.ndarray:
    basis = [WVector.basis(alg, s) for s in range(DIM)]
    return np.array([[int(symplectic(x, y)) for y in basis] for x in basis], dtype=object)


def random_wvector(alg: QuatAlgebra, rng: random.Random, bound: int = 3) -> WVector:
    return WVector(alg, [rng.randint(-bound, bound) for _ in range(DIM)])


# ---------------------------------------------------------------------------
# group elements


class FormViolation(ArithmeticError):
    pass


def _as_fraction_rows(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(frac(x) if not isinstance(x, Fraction) else x for x in r) for r in rows)


def _integer_scaled(rows) -> tuple[np.ndarray, int]:
    den = 1
    for r in rows:
        for x in r:
            den = lcm(den, x.denominator)
    num = np.array([[int(x * den) for x in r] for r in rows], dtype=object)
    return num, den


class GElement:
    """An element of G(Q) acting on the right: w -> w M, with similitude nu."""

    CHECK_RANDOM = 8

    def __init__(self, alg: QuatAlgebra, rows, nu, label: str = "", inverse: "GElement | None" = None, check=True):
        rows = _as_fraction_rows(rows)
        if len(rows) != DIM or any(len(r) != DIM for r in rows):
            raise ValueError("action matrix must be 32 x 32")
        num, den = _integer_scaled(rows)
        self._setup(alg, num, den, nu, label, inverse, check)
        self._rows = rows

    @classmethod
    def from_scaled(cls, alg, num, den: int, nu, label: str = "", inverse=None, check=True) -> "GElement":
        """The element with matrix num / den, num an integer array."""
        num = np.asarray(num, dtype=object)
        if num.shape != (DIM, DIM):
            raise ValueError("action matrix must be 32 x 32")
        g = gcd(den, *(int(x) for x in num.flat))
        if den < 0:
            g = -g
        self = cls.__new__(cls)
        self._setup(alg, num // g, den // g, nu, label, inverse, check)
        self._rows = None
        return self

    def _setup(self, alg, num, den, nu, label, inverse, check):
        self.alg = alg
        self.nu = frac(nu)
        self.label = label
        self._inv = inverse
        self._num, self._den = num, int(den)
        self._rows = self._rows_cache = None
        if self.nu == 0:
            raise ValueError("similitude must be nonzero")
        if check:
            self.verify(n_random=self.CHECK_RANDOM)

    @property
    def rows(self) -> tuple:
        if self._rows is None:
            d = self._den
            self._rows = tuple(tuple(Fraction(int(v), d) for v in r) for r in self._num)
        return self._rows

    # --- checks -------------------------------------------------------------
    def symplectic_defect(self) -> np.ndarray:
        Om = symplectic_gram(self.alg)
        lhs = self._num.dot(Om).dot(self._num.T)
        nu = self.nu
        rhs = Om * (nu.numerator * self._den * self._den)
        return lhs * nu.denominator - rhs

    def preserves_symplectic(self) -> bool:
        return not np.any(self.symplectic_defect() != 0)

    def preserves_quartic(self, vectors: Sequence[WVector]) -> bool:
        d4 = self._den**4
        nu2 = self.nu * self.nu
        for w in vectors:
            q0 = quartic(w)
            img = self.apply_scaled(w)
            if Fraction(quartic(img)) / d4 != nu2 * q0:
                return False
        return True

    def verify(self, n_random: int = 8, seed: int = 0):
        if not self.preserves_symplectic():
            raise FormViolation(f"{self.label or 'element'} does not scale the symplectic form by nu = {self.nu}")
        rng = random.Random(seed)
        vecs = [WVector.basis(self.alg, s) for s in range(DIM)]
        vecs += [random_wvector(self.alg, rng) for _ in range(n_random)]
        if not self.preserves_quartic(vecs):
            raise FormViolation(f"{self.label or 'element'} does not scale the quartic form by nu^2")

    # --- action ---------------------------------------------------------------
    def apply_scaled(self, w: WVector) -> WVector:
        """den * (w g), computed with the integer matrix (integral when w is)."""
        out = [0] * DIM
        rows = self._sparse_rows()
        for k, xk in enumerate(w.coords):
            if xk != 0:
                for t, m in rows[k]:
                    out[t] = out[t] + xk * m
        return WVector(self.alg, out)

    def _sparse_rows(self):
        if self._rows_cache is None:
            self._rows_cache = [[(t, int(m)) for t, m in enumerate(row) if m] for row in self._num]
        return self._rows_cache

    def apply(self, w: WVector) -> WVector:
        img = self.apply_scaled(w)
        return WVector(self.alg, [Fraction(v, self._den) if isinstance(v, int) else v * Fraction(1, self._den) for v in img.coords])

    def __mul__(self, other: "GElement") -> "GElement":
        """(g h) acts as w -> (w g) h."""
        num = self._num.dot(other._num)
        g = GElement.from_scaled(self.alg, num, self._den * other._den, self.nu * other.nu, f"({self.label})({other.label})", check=False)
        if self._inv is not None and other._inv is not None:
            g._inv = lambda: other.inverse() * self.inverse()
        return g

    def inverse(self) -> "GElement":
        if callable(self._inv):
            self._inv = self._inv()
        if self._inv is None:
            inv_rows = _inverse([list(r) for r in self.rows])
            self._inv = GElement(self.alg, inv_rows, 1 / self.nu, f"({self.label})^-1", inverse=self, check=False)
        return self._inv

    def __eq__(self, o):
        # num / den is kept in lowest terms, so this compares the matrices
        return isinstance(o, GElement) and self._den == o._den and self.nu == o.nu and bool((self._num == o._num).all())

    def __hash__(self):
        return hash((self._den, tuple(self._num.flat), self.nu))

    def is_identity(self) -> bool:
        return self.nu == 1 and self._den == 1 and bool((self._num == np.eye(DIM, dtype=int)).all())

    def __repr__(self):
        return f"GElement({self.label or '?'}, nu={self.nu})"

    def to_json(self) -> dict:
        return {"nu": frac_str(self.nu), "rows": [[frac_str(x) for x in r] for r in self.rows]}


def _from_linear_map(alg: QuatAlgebra, fn, nu, label, inverse=None, check=True) -> GElement:
    rows = [fn(WVector.basis(alg, s)).coords for s in range(DIM)]
    return GElement(alg, rows, nu, label, inverse=inverse, check=check)


def identity(alg: QuatAlgebra) -> GElement:
    return _from_linear_map(alg, lambda w: w, 1, "1", check=False)


# ---------------------------------------------------------------------------
# n(X) and nbar(X)


def _herm_coords(X: HermMatrix):
    return list(X.coords())


def _n_action(alg: QuatAlgebra, X):
    K = _coords_for(alg)
    Xs = K.sharp(X)
    NX = K.norm(X)

    def act(w: WVector) -> WVector:
        x = w.coords
        a, b, c, d = x[0], list(x[B_SLICE]), list(x[C_SLICE]), x[-1]
        bX = K.cross(b, X)
        b2 = [p + a * q for p, q in zip(b, X)]
        c2 = [p + q + a * r for p, q, r in zip(c, bX, Xs)]
        d2 = d + K.pair(c, X) + K.pair(b, Xs) + a * NX
        return WVector(alg, [a] + b2 + c2 + [d2])

    return act


def _nbar_action(alg: QuatAlgebra, X):
    K = _coords_for(alg)
    Xs = K.sharp(X)
    NX = K.norm(X)

    def act(w: WVector) -> WVector:
        x = w.coords
        a, b, c, d = x[0], list(x[B_SLICE]), list(x[C_SLICE]), x[-1]
        cX = K.cross(c, X)
        a2 = a + K.pair(b, X) + K.pair(c, Xs) + d * NX
        b2 = [p + q + d * r for p, q, r in zip(b, cX, Xs)]
        c2 = [p + d * q for p, q in zip(c, X)]
        return WVector(alg, [a2] + b2 + c2 + [d])

    return act


def n_embed(X: HermMatrix, variant: str = "n", check: bool = True) -> GElement:
    alg = X.alg
    coords = _herm_coords(X)
    neg = [-v for v in coords]
    if variant == "n":
        act, inv_act = _n_action(alg, coords), _n_action(alg, neg)
    elif variant in ("nbar", "n̄"):
        act, inv_act = _nbar_action(alg, coords), _nbar_action(alg, neg)
    else:
        raise ValueError("variant must be 'n' or 'nbar'")
    g = _from_linear_map(alg, act, 1, f"{variant}(X)", check=check)
    g._inv = _from_linear_map(alg, inv_act, 1, f"{variant}(-X)", inverse=g, check=False)
    return g


# ---------------------------------------------------------------------------
# GSp_6 through the third exterior power

J6 = tuple(tuple(v) for v in [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1],
                              [-1, 0, 0, 0, 0, 0], [0, -1, 0, 0, 0, 0], [0, 0, -1, 0, 0, 0]])

IOTA = {
    0: [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]],
    1: [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, -1, 0, 0, 0]],
    2: [[1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0], [0, -1, 0, 0, 0, 0], [0, 0, -1, 0, 0, 0]],
    3: [list(r) for r in J6],
}

_TRIPLES = list(itertools.combinations(range(6), 3))
_TRIPLE_INDEX = {t: k for k, t in enumerate(_TRIPLES)}


def _sorted_sign(idx):
    """(sorted triple, sign of the sorting permutation)."""
    idx = list(idx)
    sign = 1
    for i in range(len(idx)):
        for k in range(len(idx) - 1 - i):
            if idx[k] > idx[k + 1]:
                idx[k], idx[k + 1] = idx[k + 1], idx[k]
                sign = -sign
    return tuple(idx), sign


def _slot_triples():
    """Positions of e_i* ^ f_j (for b) and f_i* ^ e_j (for c) in the sorted basis."""
    b_pos, c_pos = {}, {}
    for i in range(3):
        p, q = (i + 1) % 3, (i + 2) % 3
        for j in range(3):
            b_pos[(i, j)] = _sorted_sign((p, q, 3 + j))
            c_pos[(i, j)] = _sorted_sign((3 + p, 3 + q, j))
    return b_pos, c_pos


_B_POS, _C_POS = _slot_triples()


def similitude_6(g) -> Fraction:
    g = [[frac(x) for x in r] for r in g]
    if len(g) != 6 or any(len(r) != 6 for r in g):
        raise ValueError("GSp_6 element must be 6 x 6")
    prod = [[sum(g[i][k] * J6[k][l] for k in range(6)) for l in range(6)] for i in range(6)]
    gJgt = [[sum(prod[i][l] * g[j][l] for l in range(6)) for j in range(6)] for i in range(6)]
    nu = gJgt[0][3]
    if nu == 0 or any(gJgt[i][j] != nu * J6[i][j] for i in range(6) for j in range(6)):
        raise ValueError("matrix is not a symplectic similitude: g J g^t != nu J")
    return nu


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@lru_cache(maxsize=None)
def _wedge_frame(alg: QuatAlgebra):
    """Linear maps between W and wedge^3 W_6 (x) B, the latter with 80
    coordinates (triple, quaternion coefficient in 1, i, j, k).

    Returns (P, p_den, R, r_den, H): W -> wedge is P / p_den, wedge -> W is
    R / r_den read from the upper triangle, and the columns of H are the
    linear conditions (scalar extremes and diagonal, Hermitian symmetry)
    an image must satisfy to lie in W."""
    top, bottom = _TRIPLE_INDEX[(0, 1, 2)], _TRIPLE_INDEX[(3, 4, 5)]
    P = [[Fraction(0)] * 80 for _ in range(DIM)]
    for s in range(DIM):
        w = WVector.basis(alg, s)
        P[s][4 * top] += w.a
        P[s][4 * bottom] += w.d
        for part, pos in ((w.b, _B_POS), (w.c, _C_POS)):
            M = part.matrix()
            for (i, j), (trip, sign) in pos.items():
                k = _TRIPLE_INDEX[trip]
                for t in range(4):
                    P[s][4 * k + t] += sign * frac(M[i][j].coeffs[t])
    binv = alg._basis_inv  # standard coordinates -> order coordinates
    R = [[Fraction(0)] * DIM for _ in range(80)]
    H = []
    R[4 * top][0] = Fraction(1)
    R[4 * bottom][DIM - 1] = Fraction(1)
    for k in (top, bottom):
        H += [{4 * k + t: 1} for t in (1, 2, 3)]
    for offset, pos in ((1, _B_POS), (16, _C_POS)):
        col = {}
        for (i, j), (trip, sign) in pos.items():
            col[(i, j)] = (4 * _TRIPLE_INDEX[trip], sign)
        for i in range(3):
            base, sign = col[(i, i)]
            R[base][offset + i] = Fraction(sign)
            H += [{base + t: 1} for t in (1, 2, 3)]
        for slot, (i, j) in enumerate([(1, 2), (2, 0), (0, 1)]):
            base, sign = col[(i, j)]
            for t in range(4):
                for u in range(4):
                    R[base + t][offset + 3 + 4 * slot + u] += sign * binv[t][u]
            # entry (j, i) must be the conjugate of entry (i, j)
            base2, sign2 = col[(j, i)]
            for t in range(4):
                cj = 1 if t == 0 else -1
                H.append({base2 + t: sign2, base + t: -cj * sign})
    p_num, p_den = _integer_scaled(P)
    r_num, r_den = _integer_scaled(R)
    Hm = np.zeros((80, len(H)), dtype=object)
    for c, entries in enumerate(H):
        for r, v in entries.items():
            Hm[r, c] += v
    return p_num, p_den, r_num, r_den, Hm


def wedge3(g) -> list[list[Fraction]]:
    """Matrix of the right action of g on wedge^3 W_6 in the sorted-triple basis."""
    g = [[frac(x) for x in r] for r in g]
    return [[_det3([[g[i][j] for j in J] for i in I]) for J in _TRIPLES] for I in _TRIPLES]


def _embed_rows(alg: QuatAlgebra, g, nu):
    g = [[frac(x) for x in r] for r in g]
    dg = lcm(*(x.denominator for r in g for x in r))
    gi = [[int(x * dg) for x in r] for r in g]
    W3 = np.array([[_det3([[gi[i][j] for j in J] for i in I]) for J in _TRIPLES] for I in _TRIPLES], dtype=object)
    P, p_den, R, r_den, H = _wedge_frame(alg)
    P3 = P.reshape(DIM, 20, 4)
    out = np.stack([P3[:, :, t].dot(W3) for t in range(4)], axis=2).reshape(DIM, 80)
    if np.any(out.dot(H) != 0):
        raise FormViolation("wedge^3 image leaves W: not Hermitian or not scalar on the diagonal")
    # num / (den * nu) is the action matrix
    return out.dot(R), p_den * r_den * dg**3


def _embedded(alg, scaled, nu, label, inverse, check) -> GElement:
    num, den = scaled
    nu = frac(nu)
    # divide by nu = p/q: multiply num by q, den by p
    return GElement.from_scaled(alg, num * nu.denominator, den * nu.numerator, nu, label, inverse, check)


def _inverse6(g) -> list[list[Fraction]]:
    return _inverse([[frac(x) for x in r] for r in g])


def embed_gsp6(g, alg: QuatAlgebra | None = None, label: str = "gsp6", check: bool = True) -> GElement:
    alg = alg or QuatAlgebra.hamilton()
    nu = similitude_6(g)
    el = _embedded(alg, _embed_rows(alg, g, nu), nu, label, None, check)
    el.gsp6 = tuple(tuple(frac(x) for x in r) for r in g)
    ginv = _inverse6(g)

    def build_inverse():
        inv = _embedded(alg, _embed_rows(alg, ginv, 1 / nu), 1 / nu, f"{label}^-1", el, False)
        inv.gsp6 = tuple(tuple(r) for r in ginv)
        return inv

    el._inv = build_inverse
    return el


# ---------------------------------------------------------------------------
# Bruhat representatives and Atkin-Lehner elements


def iota(j: int, alg: QuatAlgebra | None = None) -> GElement:
    if j not in IOTA:
        raise ValueError("iota_j needs j in 0..3")
    return embed_gsp6(IOTA[j], alg, label=f"iota{j}")


def w_M(M: int, alg: QuatAlgebra | None = None) -> GElement:
    """(a, b, c, d) -> (-d, M c, -M^2 b, M^3 a), similitude M^3."""
    if M < 1:
        raise ValueError("w_M needs M >= 1")
    alg = alg or QuatAlgebra.hamilton()

    def act(w):
        x = w.coords
        return WVector(alg, [-x[-1]] + [M * v for v in x[C_SLICE]] + [-M * M * v for v in x[B_SLICE]] + [M**3 * x[0]])

    def act_inv(w):
        x = w.coords
        return WVector(
            alg,
            [Fraction(x[-1], M**3)] + [Fraction(-v, M * M) for v in x[C_SLICE]] + [Fraction(v, M) for v in x[B_SLICE]] + [-x[0]],
        )

    g = _from_linear_map(alg, act, M**3, f"w_{M}")
    g._inv = _from_linear_map(alg, act_inv, Fraction(1, M**3), f"w_{M}^-1", inverse=g)
    return g


def special_elements(which: str, M: int = 1, alg: QuatAlgebra | None = None) -> GElement:
    if which.startswith("iota"):
        return iota(int(which[4:]), alg)
    if which in ("w", "w_M"):
        return w_M(M, alg)
    raise ValueError(f"unknown special element {which!r}")


# ---------------------------------------------------------------------------
# the point r(Z) and the factor of automorphy


def r_vector(Z: HermMatrix) -> WVector:
    """r(Z) = e n(Z) = (1, -Z, Z#, -N(Z))."""
    return WVector.from_parts(Z.alg, 1, -Z, Z.sharp(), -Z.norm())


class SingularPosition(ZeroDivisionError):
    pass


def _translate(g: GElement, Z: HermMatrix):
    v = g.inverse().apply(r_vector(Z))
    j = v.a
    if j == 0:
        raise SingularPosition("Z in singular position for g")
    gZ_coords = [-x / j for x in v.coords[B_SLICE]]
    return j, HermMatrix.from_coords(Z.alg, gZ_coords), v


def j_factor(g: GElement, Z: HermMatrix):
    """j(g, Z) = <r(Z) g^-1, f>."""
    return _translate(g, Z)[0]


def act_on_point(g: GElement, Z: HermMatrix) -> HermMatrix:
    """gZ, read off from r(Z) g^-1 = j(g, Z) r(gZ)."""
    j, gZ, v = _translate(g, Z)
    expected = r_vector(gZ).scale(j)
    if expected != v:
        raise ArithmeticError("r(Z) g^-1 is not a multiple of a point r(gZ)")
    return gZ


def j_gsp6(g, z: Sequence[Sequence]) -> GaussianRational:
    """nu(g)^-2 det(Cz + D) for a 3x3 complex symmetric z."""
    nu = similitude_6(g)
    g = [[frac(x) for x in r] for r in g]
    C = [r[:3] for r in g[3:]]
    D = [r[3:] for r in g[3:]]
    M = [[sum((C[i][k] * z[k][j] for k in range(3)), GaussianRational(0)) + D[i][j] for j in range(3)] for i in range(3)]
    det = (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )
    return det * (1 / (nu * nu))


def siegel_point(alg: QuatAlgebra, z: Sequence[Sequence]) -> HermMatrix:
    """Embed a complex symmetric 3x3 matrix into H_3(B) (entries in the center)."""
    zero = GaussianRational(0)
    a1 = alg.elt(z[1][2], zero, zero, zero)
    a2 = alg.elt(z[2][0], zero, zero, zero)
    a3 = alg.elt(z[0][1], zero, zero, zero)
    return HermMatrix((z[0][0], z[1][1], z[2][2]), (a1, a2, a3))


# ---------------------------------------------------------------------------
# random elements from generators


def gsp6_generators(rng: random.Random, bound: int = 2) -> list:
    """A random symplectic-similitude generator: a unipotent, a Levi element,
    J, or a similitude torus element."""
    kind = rng.choice(["upper", "lower", "levi", "J", "torus"])
    I3 = [[int(i == j) for j in range(3)] for i in range(3)]
    Z3 = [[0] * 3 for _ in range(3)]
    if kind in ("upper", "lower"):
        S = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                S[i][j] = S[j][i] = rng.randint(-bound, bound)
        blocks = (I3, S, Z3, I3) if kind == "upper" else (I3, Z3, S, I3)
    elif kind == "levi":
        m = [row[:] for row in I3]
        i, j = rng.sample(range(3), 2)
        m[i][j] = rng.randint(-bound, bound)
        if rng.random() < 0.5:
            m[i] = [-v for v in m[i]]
        minv = _inverse([[Fraction(v) for v in r] for r in m])
        blocks = (m, Z3, Z3, [[minv[j][i] for j in range(3)] for i in range(3)])
    elif kind == "J":
        return [list(r) for r in J6]
    else:
        nu = rng.choice([2, 3, Fraction(1, 2)])
        blocks = (I3, Z3, Z3, [[nu * v for v in r] for r in I3])
    A, B, C, D = blocks
    return [A[i] + B[i] for i in range(3)] + [C[i] + D[i] for i in range(3)]


def mat6_mul(x, y):
    return [[sum(frac(x[i][k]) * frac(y[k][j]) for k in range(6)) for j in range(6)] for i in range(6)]


def random_gsp6(rng: random.Random, length: int = 3) -> list:
    g = IOTA[0]
    for _ in range(length):
        g = mat6_mul(g, gsp6_generators(rng))
    return g
