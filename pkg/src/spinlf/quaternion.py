"""Definite quaternion algebras over Q, a fixed maximal order, and residue
enumeration of the order modulo l^m."""

from __future__ import annotations

import itertools
import math
import numbers
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .scalars import frac, frac_str, padic_val


class BudgetExceeded(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"enumeration needs {required} classes, budget is {budget}")
        self.required = required
        self.budget = budget


DEFAULT_BUDGET = 50_000_000


def _det(m: list[list[Fraction]]) -> Fraction:
    m = [list(r) for r in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(map(Fraction, r)) + [Fraction(int(i == k)) for k in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        aug[c] = [x / p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [r[n:] for r in aug]


class QuatAlgebra:
    """B = (a, b | Q) with i^2 = a, j^2 = b, ij = k = -ji, and a maximal order
    given by the rows of order_basis (coordinates in 1, i, j, k)."""

    def __init__(self, a, b, D_B: int, order_basis: Sequence[Sequence]):
        self.a = frac(a)
        self.b = frac(b)
        self.D_B = int(D_B)
        self.order_basis = tuple(tuple(frac(x) for x in row) for row in order_basis)
        # integral structure constants stay ints so integer arithmetic stays fast
        self.ai = int(self.a) if self.a.denominator == 1 else self.a
        self.bi = int(self.b) if self.b.denominator == 1 else self.b
        if self.a >= 0 or self.b >= 0:
            raise ValueError("algebra must be definite: need a < 0 and b < 0")
        if len(self.order_basis) != 4 or any(len(r) != 4 for r in self.order_basis):
            raise ValueError("order basis must be 4x4")
        if _det([list(r) for r in self.order_basis]) == 0:
            raise ValueError("order basis is singular")
        self._basis_inv = _inverse([list(r) for r in self.order_basis])
        self._check_order()

    @classmethod
    def hamilton(cls) -> "QuatAlgebra":
        h = Fraction(1, 2)
        return cls(-1, -1, 2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [h, h, h, h]])

    @classmethod
    def disc7(cls) -> "QuatAlgebra":
        """(-1,-7) with its maximal order; ramified only at 7, so 2, 3, 5 are split."""
        h = Fraction(1, 2)
        return cls(-1, -7, 7, [[1, 0, 0, 0], [0, 1, 0, 0], [h, 0, h, 0], [0, h, 0, h]])

    @classmethod
    def named(cls, name: str) -> "QuatAlgebra":
        table = {"hamilton": cls.hamilton, "disc7": cls.disc7}
        if name not in table:
            raise ValueError(f"unknown algebra {name!r}; choose from {sorted(table)}")
        return table[name]()

    def key(self):
        return (self.a, self.b, self.D_B, self.order_basis)

    def __eq__(self, other):
        return isinstance(other, QuatAlgebra) and self.key() == other.key()

    def __hash__(self):
        # lru_cache lookups keyed on the algebra hash it constantly
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = hash(self.key())
        return h

    def __repr__(self):
        return f"QuatAlgebra(a={self.a}, b={self.b}, D_B={self.D_B})"

    # --- element constructors -------------------------------------------------
    def elt(self, w=0, x=0, y=0, z=0) -> "QuatElement":
        return QuatElement(self, w, x, y, z)

    def zero(self, ring_zero=Fraction(0)) -> "QuatElement":
        return QuatElement(self, ring_zero, ring_zero, ring_zero, ring_zero)

    def one(self) -> "QuatElement":
        return QuatElement(self, Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    def basis_elt(self, t: int) -> "QuatElement":
        return QuatElement(self, *self.order_basis[t])

    def from_order_coords(self, coords: Sequence) -> "QuatElement":
        out = [Fraction(0)] * 4
        for c, row in zip(coords, self.order_basis):
            if isinstance(c, (str, numbers.Integral)):
                c = frac(c)
            for t in range(4):
                out[t] += c * row[t]
        return QuatElement(self, *out)

    def order_coords(self, q: "QuatElement") -> tuple[Fraction, ...]:
        v = q.coeffs
        return tuple(sum((v[s] * self._basis_inv[s][t] for s in range(4)), Fraction(0)) for t in range(4))

    # --- structure of the order ----------------------------------------------
    def _check_order(self):
        basis = [self.basis_elt(t) for t in range(4)]
        one = self.order_coords(self.one())
        if any(c.denominator != 1 for c in one):
            raise ValueError("order does not contain 1")
        for x in basis:
            for y in basis:
                if any(c.denominator != 1 for c in self.order_coords(x * y)):
                    raise ValueError("order basis is not closed under multiplication")
        gram = [[(x * y.conj()).trace() for y in basis] for x in basis]
        if abs(_det(gram)) != self.D_B**2:
            raise ValueError(
                f"order has reduced discriminant {abs(_det(gram))} != D_B^2 = {self.D_B ** 2}; not maximal"
            )

    @cached_property
    def mult_table(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """Integer structure constants: e_s * e_t = sum_u C[s][t][u] e_u."""
        basis = [self.basis_elt(t) for t in range(4)]
        return tuple(
            tuple(tuple(int(c) for c in self.order_coords(x * y)) for y in basis) for x in basis
        )

    @cached_property
    def conj_matrix(self) -> tuple[tuple[int, ...], ...]:
        """conj(e_s) = sum_u K[s][u] e_u."""
        return tuple(
            tuple(int(c) for c in self.order_coords(self.basis_elt(s).conj())) for s in range(4)
        )

    @cached_property
    def trace_vector(self) -> tuple[int, ...]:
        return tuple(int(self.basis_elt(s).trace()) for s in range(4))

    @cached_property
    def norm_gram(self) -> tuple[tuple[int, ...], ...]:
        """Gram matrix of trd(x conj y) on the order basis (so n(x) = x^T G x / 2)."""
        basis = [self.basis_elt(t) for t in range(4)]
        return tuple(tuple(int((x * y.conj()).trace()) for y in basis) for x in basis)

    @cached_property
    def covolume(self) -> Fraction:
        """Covolume of B_0 for the measure self-dual for (x, y) -> trd(x conj y)/2."""
        d = _det([[Fraction(g, 2) for g in row] for row in self.norm_gram])
        num, den = d.numerator, d.denominator
        rn, rd = math.isqrt(num), math.isqrt(den)
        if rn * rn != num or rd * rd != den:
            raise ValueError("covolume is irrational for this order")
        return Fraction(rn, rd)

    @cached_property
    def dual_basis(self) -> tuple["QuatElement", ...]:
        """Z-basis of the dual of B_0 under (x, y) -> trd(x conj y)."""
        inv = _inverse([[Fraction(g) for g in row] for row in self.norm_gram])
        basis = [self.basis_elt(t) for t in range(4)]
        out = []
        for s in range(4):
            q = self.zero()
            for t in range(4):
                q = q + basis[t] * inv[s][t]
            out.append(q)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "a": frac_str(self.a),
            "b": frac_str(self.b),
            "D_B": self.D_B,
            "order_basis": [[frac_str(x) for x in row] for row in self.order_basis],
        }

    @classmethod
    def from_json(cls, obj) -> "QuatAlgebra":
        return cls(obj["a"], obj["b"], obj["D_B"], obj["order_basis"])


def _scaled(cs):
    """(integer numerators, common denominator) when every entry is rational."""
    d = 1
    for c in cs:
        t = type(c)
        if t is Fraction:
            q = c.denominator
            if d % q:
                d = d * q // math.gcd(d, q)
        elif t is not int:
            return None, None
    if d == 1:
        return [int(c) for c in cs], 1
    return [c.numerator * (d // c.denominator) for c in cs], d


def _mul_scaled(alg, n1, n2, D, a, b):
    # Fraction arithmetic dominates the Jordan and W computations; one
    # integer product and four reductions replace about thirty Fraction ops
    w1, x1, y1, z1 = n1
    w2, x2, y2, z2 = n2
    out = (
        w1 * w2 + a * (x1 * x2) + b * (y1 * y2) - a * b * (z1 * z2),
        w1 * x2 + x1 * w2 - b * (y1 * z2 - z1 * y2),
        w1 * y2 + y1 * w2 + a * (x1 * z2 - z1 * x2),
        w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
    )
    if D == 1:
        return _quat(alg, out)
    res = []
    for n in out:
        g = math.gcd(n, D)
        res.append(n // g if g == D else Fraction(n // g, D // g, _normalize=False))
    return _quat(alg, tuple(res))


def _quat(alg, coeffs: tuple) -> "QuatElement":
    # trusted constructor: coeffs is already a 4-tuple of ring elements
    q = object.__new__(QuatElement)
    q.alg = alg
    q.coeffs = coeffs
    return q


class QuatElement:
    """w + x i + y j + z k with coefficients in a commutative ring K."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: QuatAlgebra, w=0, x=0, y=0, z=0):
        self.alg = alg
        self.coeffs = tuple(Fraction(c) if isinstance(c, str) else c for c in (w, x, y, z))

    def _check(self, other: "QuatElement"):
        if other.alg is not self.alg and other.alg != self.alg:
            raise ValueError("quaternions from different algebras")

    def __add__(self, other):
        if isinstance(other, QuatElement):
            self._check(other)
            w1, x1, y1, z1 = self.coeffs
            w2, x2, y2, z2 = other.coeffs
            return _quat(self.alg, (w1 + w2, x1 + x2, y1 + y2, z1 + z2))
        w, x, y, z = self.coeffs
        return QuatElement(self.alg, w + other, x, y, z)

    __radd__ = __add__

    def __neg__(self):
        w, x, y, z = self.coeffs
        return _quat(self.alg, (-w, -x, -y, -z))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QuatElement):
            return QuatElement(self.alg, *(c * other for c in self.coeffs))
        self._check(other)
        a, b = self.alg.ai, self.alg.bi
        if type(a) is int and type(b) is int:
            s1, d1 = _scaled(self.coeffs)
            if s1 is not None:
                s2, d2 = _scaled(other.coeffs)
                if s2 is not None:
                    return _mul_scaled(self.alg, s1, s2, d1 * d2, a, b)
        w1, x1, y1, z1 = self.coeffs
        w2, x2, y2, z2 = other.coeffs
        ab = a * b
        return _quat(
            self.alg,
            (
                w1 * w2 + a * (x1 * x2) + b * (y1 * y2) - ab * (z1 * z2),
                w1 * x2 + x1 * w2 - b * (y1 * z2 - z1 * y2),
                w1 * y2 + y1 * w2 + a * (x1 * z2 - z1 * x2),
                w1 * z2 + z1 * w2 + x1 * y2 - y1 * x2,
            ),
        )

    def __rmul__(self, other):
        # scalars are central
        return QuatElement(self.alg, *(other * c for c in self.coeffs))

    def conj(self) -> "QuatElement":
        w, x, y, z = self.coeffs
        return _quat(self.alg, (w, -x, -y, -z))

    def norm(self):
        a, b = self.alg.ai, self.alg.bi
        w, x, y, z = self.coeffs
        return w * w - a * (x * x) - b * (y * y) + (a * b) * (z * z)

    def trace(self):
        return 2 * self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def map(self, fn) -> "QuatElement":
        return QuatElement(self.alg, *(fn(c) for c in self.coeffs))

    def __eq__(self, other):
        if isinstance(other, QuatElement):
            return self.alg == other.alg and all(p == q for p, q in zip(self.coeffs, other.coeffs))
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        w, x, y, z = self.coeffs
        return f"Quat({w}, {x}, {y}, {z})"


def quat_arith(op: str, x: QuatElement, y: QuatElement | None = None):
    if op == "mul":
        return x * y
    if op == "conj":
        return x.conj()
    if op == "norm":
        return x.norm()
    if op == "trace":
        return x.trace()
    raise ValueError(f"unknown quaternion operation {op!r}")


def quat_valuation(x: QuatElement, ell: int) -> int:
    """min of the l-adic valuations of the order-basis coordinates of x."""
    coords = x.alg.order_coords(x)
    vals = [padic_val(c, ell) for c in coords if c != 0]
    if not vals:
        raise ValueError("valuation of zero")
    return min(vals)


class ResidueIndex(tuple):
    """(l, m, coords) with coords in [0, l^m)^4 on the order basis."""

    __slots__ = ()

    def __new__(cls, ell: int, m: int, coords: tuple[int, ...]):
        return super().__new__(cls, (ell, m, tuple(coords)))

    @property
    def ell(self) -> int:
        return self[0]

    @property
    def m(self) -> int:
        return self[1]

    @property
    def coords(self) -> tuple[int, ...]:
        return self[2]


def order_residues(
    alg: QuatAlgebra, ell: int, m: int, budget: int = DEFAULT_BUDGET
) -> Iterator[tuple[ResidueIndex, QuatElement]]:
    """Every class of B_0 / l^m B_0 with its canonical lift."""
    q = ell**m
    count = q**4
    if count > budget:
        raise BudgetExceeded(count, budget)
    for coords in itertools.product(range(q), repeat=4):
        yield ResidueIndex(ell, m, coords), alg.from_order_coords(coords)


def norm_mod(alg: QuatAlgebra, coords: Sequence[int], modulus: int) -> int:
    """n(x) mod modulus for x with integer order-basis coordinates."""
    g = alg.norm_gram
    s = sum(coords[i] * g[i][k] * coords[k] for i in range(4) for k in range(4))
    return (s // 2) % modulus
