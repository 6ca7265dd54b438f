"""The cubic Jordan algebra H_3(B (x) K) of 3x3 Hermitian quaternionic matrices.

Layout::

    [[c1,  a3,  a2*],
     [a3*, c2,  a1 ],
     [a2,  a1*, c3 ]]
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .quaternion import QuatAlgebra, QuatElement, _det, _inverse
from .scalars import frac, frac_str, factorize, padic_val

# off-diagonal slot (row, col) -> index of a_i holding it (upper triangle)
SLOT = {(0, 1): 2, (0, 2): 1, (1, 2): 0}


class HermMatrix:
    __slots__ = ("c", "a")

    def __init__(self, c: Sequence, a: Sequence[QuatElement]):
        self.c = tuple(Fraction(x) if isinstance(x, (int, str)) else x for x in c)
        self.a = tuple(a)

    @property
    def alg(self) -> QuatAlgebra:
        return self.a[0].alg

    # --- constructors -------------------------------------------------------
    @classmethod
    def diag(cls, alg: QuatAlgebra, c1, c2, c3) -> "HermMatrix":
        z = alg.zero()
        return cls((c1, c2, c3), (z, z, z))

    @classmethod
    def identity(cls, alg: QuatAlgebra) -> "HermMatrix":
        return cls.diag(alg, 1, 1, 1)

    @classmethod
    def zero(cls, alg: QuatAlgebra) -> "HermMatrix":
        return cls.diag(alg, 0, 0, 0)

    @classmethod
    def from_coords(cls, alg: QuatAlgebra, coords: Sequence) -> "HermMatrix":
        """Inverse of coords(): (c1, c2, c3, a1[4], a2[4], a3[4]) on the order basis."""
        coords = list(coords)
        a = tuple(alg.from_order_coords(coords[3 + 4 * s : 7 + 4 * s]) for s in range(3))
        return cls(coords[:3], a)

    def coords(self) -> tuple:
        alg = self.alg
        out = list(self.c)
        for q in self.a:
            out.extend(alg.order_coords(q))
        return tuple(out)

    # --- ring structure -----------------------------------------------------
    def __add__(self, o: "HermMatrix") -> "HermMatrix":
        return HermMatrix([x + y for x, y in zip(self.c, o.c)], [x + y for x, y in zip(self.a, o.a)])

    def __sub__(self, o: "HermMatrix") -> "HermMatrix":
        return HermMatrix([x - y for x, y in zip(self.c, o.c)], [x - y for x, y in zip(self.a, o.a)])

    def __neg__(self) -> "HermMatrix":
        return HermMatrix([-x for x in self.c], [-x for x in self.a])

    def scale(self, lam) -> "HermMatrix":
        return HermMatrix([lam * x for x in self.c], [q * lam for q in self.a])

    def __mul__(self, lam) -> "HermMatrix":
        if isinstance(lam, HermMatrix):
            raise TypeError("use matrix() for the associative product")
        return self.scale(lam)

    __rmul__ = __mul__

    def map(self, fn) -> "HermMatrix":
        """Apply fn to every coefficient (change of coefficient ring)."""
        return HermMatrix([fn(x) for x in self.c], [q.map(fn) for q in self.a])

    def conj_entries(self) -> "HermMatrix":
        return HermMatrix(self.c, [q.conj() for q in self.a])

    def __eq__(self, o):
        if not isinstance(o, HermMatrix):
            return NotImplemented
        return all(x == y for x, y in zip(self.c, o.c)) and all(x == y for x, y in zip(self.a, o.a))

    def key(self) -> tuple:
        return self.c + tuple(q.coeffs for q in self.a)

    def __hash__(self):
        return hash(self.key())

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.c) and all(q.is_zero() for q in self.a)

    def __repr__(self):
        return f"HermMatrix(c={list(self.c)}, a={list(self.a)})"

    # --- cubic norm structure -----------------------------------------------
    def norm(self):
        c1, c2, c3 = self.c
        a1, a2, a3 = self.a
        return (
            c1 * c2 * c3
            - c1 * a1.norm()
            - c2 * a2.norm()
            - c3 * a3.norm()
            + (a1 * a2 * a3).trace()
        )

    def trace(self):
        return self.c[0] + self.c[1] + self.c[2]

    def sharp(self) -> "HermMatrix":
        c1, c2, c3 = self.c
        a1, a2, a3 = self.a
        return HermMatrix(
            (c2 * c3 - a1.norm(), c1 * c3 - a2.norm(), c1 * c2 - a3.norm()),
            (
                (a2 * a3).conj() - a1 * c1,
                (a3 * a1).conj() - a2 * c2,
                (a1 * a2).conj() - a3 * c3,
            ),
        )

    def pair(self, o: "HermMatrix"):
        """tr(x, y) = (1/2) tr(xy + yx)."""
        s = self.c[0] * o.c[0] + self.c[1] * o.c[1] + self.c[2] * o.c[2]
        for p, q in zip(self.a, o.a):
            s = s + (p * q.conj()).trace()
        return s

    def cross(self, o: "HermMatrix") -> "HermMatrix":
        return (self + o).sharp() - self.sharp() - o.sharp()

    def partial_norm(self, j: int):
        if j == 0:
            return Fraction(1)
        if j == 1:
            return self.c[0]
        if j == 2:
            return self.c[0] * self.c[1] - self.a[2].norm()
        if j == 3:
            return self.norm()
        raise ValueError("j must be in 0..3")

    def rank(self) -> int:
        if self.norm() != 0:
            return 3
        if not self.sharp().is_zero():
            return 2
        if not self.is_zero():
            return 1
        return 0

    def symmetrization(self) -> list[list]:
        """(h + h^t)/2 as a symmetric 3x3 matrix over K."""
        t = [[None] * 3 for _ in range(3)]
        for i in range(3):
            t[i][i] = self.c[i]
        for (r, s), idx in SLOT.items():
            v = self.a[idx].trace() * Fraction(1, 2)
            t[r][s] = t[s][r] = v
        return t

    # --- explicit matrices (used as an independent check) --------------------
    def matrix(self) -> list[list[QuatElement]]:
        alg = self.alg
        c1, c2, c3 = (alg.zero() + x for x in self.c)
        a1, a2, a3 = self.a
        return [[c1, a3, a2.conj()], [a3.conj(), c2, a1], [a2, a1.conj(), c3]]

    def to_json(self) -> dict:
        alg = self.alg
        return {
            "diag": [frac_str(x) for x in self.c],
            "offdiag": [[frac_str(x) for x in alg.order_coords(q)] for q in self.a],
        }

    @classmethod
    def from_json(cls, alg: QuatAlgebra, obj) -> "HermMatrix":
        diag = [frac(x) for x in obj["diag"]]
        off = obj.get("offdiag", [[0] * 4] * 3)
        return cls(diag, [alg.from_order_coords([frac(x) for x in row]) for row in off])


def matmul(x: list[list[QuatElement]], y: list[list[QuatElement]]) -> list[list[QuatElement]]:
    n = len(x)
    return [[sum((x[i][k] * y[k][j] for k in range(n)), x[0][0] * 0) for j in range(n)] for i in range(n)]


def norm_adjoint_trace(h: HermMatrix):
    return h.norm(), h.sharp(), h.trace()


def pair_cross(x: HermMatrix, y: HermMatrix):
    return x.pair(y), x.cross(y)


def rank(h: HermMatrix) -> int:
    return h.rank()


def psd_test(h: HermMatrix) -> bool:
    c1, c2, c3 = h.c
    a1, a2, a3 = h.a
    return (
        c1 >= 0
        and c2 >= 0
        and c3 >= 0
        and c1 * c2 - a3.norm() >= 0
        and c2 * c3 - a1.norm() >= 0
        and c1 * c3 - a2.norm() >= 0
        and h.norm() >= 0
    )


# ---------------------------------------------------------------------------
# valuations and kappa


def herm_valuation(X: HermMatrix, ell: int) -> float | int:
    vals = [padic_val(c, ell) for c in X.coords() if c != 0]
    return min(vals) if vals else math.inf


def _denominator_primes(values) -> set[int]:
    out: set[int] = set()
    for v in values:
        out.update(factorize(Fraction(v).denominator))
    return out


def kappa_local(X: HermMatrix, ell: int) -> int:
    S = X.sharp()
    N = X.norm()
    vN = padic_val(N, ell) if N != 0 else math.inf
    e = min(0, herm_valuation(X, ell), herm_valuation(S, ell), vN)
    return ell ** int(-e)


def kappa(X: HermMatrix) -> int:
    S = X.sharp()
    N = X.norm()
    primes = _denominator_primes(list(X.coords()) + list(S.coords()) + [N])
    out = 1
    for p in sorted(primes):
        out *= kappa_local(X, p)
    return out


# ---------------------------------------------------------------------------
# the lattices H_j(B_0) and their duals


class HermLattice:
    """H_j(B_0) inside the upper-left j x j block, with the Gram matrix of tr(,)."""

    def __init__(self, alg: QuatAlgebra, j: int):
        if j not in (1, 2, 3):
            raise ValueError("rank must be 1, 2 or 3")
        self.alg = alg
        self.j = j
        basis = []
        zero = [Fraction(0)] * 15
        for i in range(j):
            v = list(zero)
            v[i] = Fraction(1)
            basis.append(HermMatrix.from_coords(alg, v))
        for (r, s), idx in sorted(SLOT.items()):
            if s < j:
                for t in range(4):
                    v = list(zero)
                    v[3 + 4 * idx + t] = Fraction(1)
                    basis.append(HermMatrix.from_coords(alg, v))
        self.basis = basis
        self.gram = [[x.pair(y) for y in basis] for x in basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def offdiag_slots(self) -> int:
        return self.j * (self.j - 1) // 2

    def volume(self) -> Fraction:
        return self.alg.covolume ** self.offdiag_slots()


def lattice_dual(L: HermLattice):
    """(dual basis, index |det Gram|, vol(L), vol(L^dual))."""
    det = _det([list(r) for r in L.gram])
    if det == 0:
        raise ValueError("degenerate Gram matrix")
    inv = _inverse([list(r) for r in L.gram])
    dual = []
    for row in inv:
        h = HermMatrix.zero(L.alg)
        for coef, b in zip(row, L.basis):
            h = h + b.scale(coef)
        dual.append(h)
    index = abs(det)
    vol = L.volume()
    return dual, index, vol, vol / index


def in_dual_lattice(h: HermMatrix, L: HermLattice) -> bool:
    return all(Fraction(b.pair(h)).denominator == 1 for b in L.basis)
