"""Exact scalars: rationals, cyclotomic field elements, Dirichlet characters,
generalized Bernoulli numbers and normalized L-value ratios."""

from __future__ import annotations

import cmath
import math
import numbers
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction, "CycloValue"]


class ParityError(ValueError):
    """Raised when an L-value is requested at an argument of the wrong parity."""


def frac(x) -> Fraction:
    """Parse ints, Fractions and "p/q" strings into a reduced Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    raise TypeError(f"cannot read {x!r} as an exact rational")


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def padic_val(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# ---------------------------------------------------------------------------
# cyclotomic polynomials and the field Q(zeta_n)


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; lists are low-degree first
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    dd = len(den) - 1
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            q[k - dd] = c
            for i, d in enumerate(den):
                num[k - dd + i] -= c * d
    return q, num[:dd]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_poly(d)))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


def _reduce_raw(raw: Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    # fold powers modulo x^n - 1 first, then modulo Phi_n
    buf = [Fraction(0)] * max(n, deg)
    for k, c in enumerate(raw):
        if c:
            buf[k % n] += c
    for k in range(len(buf) - 1, deg - 1, -1):
        c = buf[k]
        if c:
            buf[k] = Fraction(0)
            for i in range(deg):
                if phi[i]:
                    buf[k - deg + i] -= c * phi[i]
    return tuple(buf[:deg])


class CycloValue:
    """Element of Q(zeta_n) in the power basis of Q[x]/Phi_n(x)."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Iterable):
        if n < 1:
            raise ValueError("conductor must be positive")
        raw = [frac(c) for c in coeffs]
        self.n = n
        if len(raw) == euler_phi(n):
            self.coeffs = tuple(raw)
        else:
            self.coeffs = _reduce_raw(raw, n)

    @classmethod
    def rational(cls, x, n: int = 1) -> "CycloValue":
        return cls(n, [frac(x)] + [0] * (euler_phi(n) - 1))

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "CycloValue":
        raw = [Fraction(0)] * n
        raw[k % n] = Fraction(1)
        return cls(n, _reduce_raw(raw, n))

    @classmethod
    def coerce(cls, x) -> "CycloValue":
        if isinstance(x, CycloValue):
            return x
        return cls.rational(x)

    def lift(self, N: int) -> "CycloValue":
        if N % self.n:
            raise ValueError(f"cannot embed Q(zeta_{self.n}) into Q(zeta_{N})")
        if N == self.n:
            return self
        step = N // self.n
        raw = [Fraction(0)] * (step * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            raw[k * step] = c
        return CycloValue(N, _reduce_raw(raw, N))

    def _common(self, other) -> tuple["CycloValue", "CycloValue"]:
        other = CycloValue.coerce(other)
        if other.n == self.n:
            return self, other
        N = math.lcm(self.n, other.n)
        return self.lift(N), other.lift(N)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            c = list(self.coeffs)
            c[0] += other
            return CycloValue(self.n, c)
        if not isinstance(other, CycloValue):
            return NotImplemented
        a, b = self._common(other)
        return CycloValue(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloValue(self.n, [-x for x in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, (int, Fraction, CycloValue)):
            return NotImplemented
        return self + (-CycloValue.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloValue(self.n, [x * other for x in self.coeffs])
        if not isinstance(other, CycloValue):
            return NotImplemented
        a, b = self._common(other)
        if b.is_rational():
            return a * b.coeffs[0]
        if a.is_rational():
            return b * a.coeffs[0]
        raw = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for k, y in enumerate(b.coeffs):
                    if y:
                        raw[i + k] += x * y
        return CycloValue(a.n, _reduce_raw(raw, a.n))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CycloValue.rational(1, self.n)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "CycloValue":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycloValue.rational(1 / self.coeffs[0], self.n)
        # extended Euclid in Q[x] against Phi_n
        a = _trim(list(self.coeffs))
        b = [Fraction(c) for c in cyclotomic_poly(self.n)]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        while len(b) > 1 or b[0] != 0:
            q, r = _poly_divmod_frac(a, b)
            a, b = b, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # a is a nonzero constant
        inv = [c / a[0] for c in s0]
        return CycloValue(self.n, _reduce_raw(inv, self.n))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * CycloValue.coerce(other).inverse()

    def __rtruediv__(self, other):
        return CycloValue.coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycloValue):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        z = self.to_complex()
        return hash((round(z.real, 8), round(z.imag, 8)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def galois(self, k: int) -> "CycloValue":
        """Apply the automorphism zeta -> zeta^k (k prime to n)."""
        if math.gcd(k, self.n) != 1:
            raise ValueError("Galois exponent must be a unit")
        raw = [Fraction(0)] * self.n
        for e, c in enumerate(self.coeffs):
            raw[(e * k) % self.n] += c
        return CycloValue(self.n, _reduce_raw(raw, self.n))

    def in_subfield(self, d: int) -> bool:
        """True when the value lies in Q(zeta_d), d dividing the conductor
        after lifting: fixed by every zeta -> zeta^k with k = 1 mod d."""
        N = math.lcm(self.n, d)
        v = self.lift(N)
        return all(v.galois(k) == v for k in range(1, N, d) if math.gcd(k, N) == 1)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.n)
        return sum(complex(float(c)) * z**k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return f"CycloValue({frac_str(self.coeffs[0])})"
        return f"CycloValue(n={self.n}, {[frac_str(c) for c in self.coeffs]})"

    def to_json(self) -> dict:
        return {"n": self.n, "coeffs": [frac_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycloValue":
        if isinstance(obj, (str, int)):
            return cls.rational(frac(obj))
        return cls(int(obj["n"]), [frac(c) for c in obj["coeffs"]])


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for k, y in enumerate(b):
            out[i + k] += x * y
    return _trim(out)


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _poly_divmod_frac(a, b):
    a = list(a)
    b = _trim(list(b))
    if len(a) < len(b):
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, y in enumerate(b):
                a[k + i] -= c * y
    return _trim(q), _trim(a[: len(b) - 1] or [Fraction(0)])


def cyclo_reduce(raw: Sequence, n: int) -> CycloValue:
    """Canonical residue of sum raw[k] x^k modulo Phi_n."""
    if n < 1:
        raise ValueError("n must be positive")
    return CycloValue(n, _reduce_raw([frac(c) for c in raw], n))


def as_cyclo(x) -> CycloValue:
    return CycloValue.coerce(x)


# ---------------------------------------------------------------------------
# Gaussian rationals: Q with a central square root of -1


class GaussianRational:
    # stored as (a + b i) / d with d > 0 and math.gcd(a, b, d) = 1
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re, im = frac(re), frac(im)
        d = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _make(cls, a: int, b: int, d: int) -> "GaussianRational":
        g = math.gcd(a, b, d)
        if d < 0:
            g = -g
        out = object.__new__(cls)
        if g == 1:
            out._a, out._b, out._d = a, b, d
        else:
            out._a, out._b, out._d = a // g, b // g, d // g
        return out

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @staticmethod
    def _c(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(x, 0)

    def __add__(self, o):
        if isinstance(o, int):
            return GaussianRational._make(self._a + o * self._d, self._b, self._d)
        if isinstance(o, Fraction):
            n, q = o.numerator, o.denominator
            return GaussianRational._make(self._a * q + n * self._d, self._b * q, self._d * q)
        if not isinstance(o, GaussianRational):
            return NotImplemented
        d, e = self._d, o._d
        if d == e:
            return GaussianRational._make(self._a + o._a, self._b + o._b, d)
        return GaussianRational._make(self._a * e + o._a * d, self._b * e + o._b * d, d * e)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._make(-self._a, -self._b, self._d)

    def __sub__(self, o):
        if not isinstance(o, (int, Fraction, GaussianRational)):
            return NotImplemented
        return self + (-self._c(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, int):
            return GaussianRational._make(self._a * o, self._b * o, self._d)
        if isinstance(o, Fraction):
            n, q = o.numerator, o.denominator
            return GaussianRational._make(self._a * n, self._b * n, self._d * q)
        if not isinstance(o, GaussianRational):
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        return GaussianRational._make(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._c(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(o.re / d, -o.im / d)

    def __rtruediv__(self, o):
        return self._c(o) / self

    def __pow__(self, e: int):
        out = GaussianRational(1)
        base = self if e >= 0 else GaussianRational(1) / self
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self._b == 0 and self.re == o
        if not isinstance(o, GaussianRational):
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        return hash((self.re, self.im)) if self._b else hash(self.re)

    def __bool__(self):
        return bool(self._a or self._b)

    def __repr__(self):
        return f"({frac_str(self.re)} + {frac_str(self.im)}i)"


I = GaussianRational(0, 1)


# ---------------------------------------------------------------------------
# Dirichlet characters


def _primitive_root(pe: int, p: int) -> int:
    phi = euler_phi(pe)
    primes = list(factorize(phi))
    for g in range(2, pe):
        if g % p and all(pow(g, phi // q, pe) != 1 for q in primes):
            return g
    raise ArithmeticError(f"no primitive root mod {pe}")


def _crt_lift(residue: int, pe: int, M: int) -> int:
    # x = residue mod pe, x = 1 mod M/pe
    rest = M // pe
    if rest == 1:
        return residue % M
    t = ((residue - 1) * pow(rest, -1, pe)) % pe
    return (1 + rest * t) % M


@lru_cache(maxsize=None)
def unit_generators(M: int) -> tuple[tuple[int, int, int, int], ...]:
    """Generators of (Z/M)^x from its CRT decomposition.

    Each entry is (generator mod M, its order, prime, prime power)."""
    gens = []
    for p, e in sorted(factorize(M).items()):
        pe = p**e
        if p == 2:
            if e >= 2:
                gens.append((_crt_lift(pe - 1, pe, M), 2, 2, pe))
            if e >= 3:
                gens.append((_crt_lift(5, pe, M), pe // 4, 2, pe))
        else:
            g = _primitive_root(pe, p)
            gens.append((_crt_lift(g, pe, M), euler_phi(pe), p, pe))
    return tuple(gens)


@lru_cache(maxsize=None)
def _dlog_table(g: int, pe: int) -> dict[int, int]:
    table, x = {}, 1
    for t in range(euler_phi(pe)):
        table.setdefault(x, t)
        x = x * g % pe
    return table


def unit_log(M: int, k: int) -> tuple[int, ...] | None:
    """Exponents of k on unit_generators(M), or None when k is not a unit."""
    if math.gcd(k, M) != 1:
        return None
    out = []
    seen_two = False
    for _gen, _order, p, pe in unit_generators(M):
        if p != 2:
            out.append(_dlog_table(_primitive_root(pe, p), pe)[k % pe])
        elif not seen_two:
            # (Z/2^e)^x = <-1> x <5>; both generators share one pass
            seen_two = True
            r = k % pe
            sign = 0 if r % 4 == 1 else 1
            out.append(sign)
            if pe >= 8:
                out.append(_dlog_table(5, pe)[r if sign == 0 else (-r) % pe])
    return tuple(out)


class DirichletChar:
    """A Dirichlet character mod M with values in mu_n, given on generators."""

    def __init__(self, modulus: int, order: int, images: dict[int, int] | None = None):
        if modulus < 1 or order < 1:
            raise ValueError("modulus and order must be positive")
        self.modulus = modulus
        self.order = order
        gens = unit_generators(modulus)
        images = {int(g) % modulus if modulus > 1 else int(g): int(e) for g, e in (images or {}).items()}
        known = {g for g, *_ in gens}
        extra = set(images) - known
        if extra:
            raise ValueError(
                f"images given on non-generators {sorted(extra)}; generators mod {modulus} are {sorted(known)}"
            )
        self.images = {g: images.get(g, 0) % order for g, *_ in gens}
        for g, gord, *_ in gens:
            if (self.images[g] * gord) % order:
                raise ValueError(f"image of generator {g} does not respect its order {gord}")

    @classmethod
    def trivial(cls, modulus: int = 1) -> "DirichletChar":
        return cls(modulus, 1, {})

    def exponent(self, k: int) -> int | None:
        logs = unit_log(self.modulus, k)
        if logs is None:
            return None
        gens = unit_generators(self.modulus)
        return sum(self.images[g] * t for (g, *_), t in zip(gens, logs)) % self.order

    def __call__(self, k: int) -> CycloValue:
        return char_eval(self, k)

    def is_trivial(self) -> bool:
        return not any(self.images.values())

    def is_real(self) -> bool:
        return all((2 * e) % self.order == 0 for e in self.images.values())

    def parity(self) -> int:
        return 1 if self.exponent(self.modulus - 1) == 0 else -1

    def conjugate(self) -> "DirichletChar":
        return DirichletChar(self.modulus, self.order, {g: -e for g, e in self.images.items()})

    def conductor(self) -> int:
        M = self.modulus
        for f in sorted(d for d in range(1, M + 1) if M % d == 0):
            if all(
                self.exponent(a) == 0
                for a in range(1, M, f)
                if math.gcd(a, M) == 1
            ):
                return f
        return M

    def primitive(self) -> "DirichletChar":
        f = self.conductor()
        if f == self.modulus:
            return self
        imgs = {}
        for g, *_ in unit_generators(f):
            a = g
            while math.gcd(a, self.modulus) != 1:
                a += f
            imgs[g] = self.exponent(a)
        return DirichletChar(f, self.order, imgs)

    def key(self):
        return (self.modulus, self.order, tuple(sorted(self.images.items())))

    def __eq__(self, other):
        return isinstance(other, DirichletChar) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"DirichletChar(modulus={self.modulus}, order={self.order}, images={self.images})"

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "order": self.order,
            "images": {str(g): e for g, e in sorted(self.images.items())},
        }

    @classmethod
    def from_json(cls, obj) -> "DirichletChar":
        if obj == "trivial" or obj is None:
            return cls.trivial()
        return cls(int(obj["modulus"]), int(obj["order"]), {int(g): int(e) for g, e in obj.get("images", {}).items()})


def char_eval(chi: DirichletChar, k: int) -> CycloValue:
    e = chi.exponent(k)
    if e is None:
        return CycloValue.rational(0)
    if e == 0:
        return CycloValue.rational(1)
    return CycloValue.zeta(chi.order, e)


# ---------------------------------------------------------------------------
# Bernoulli numbers


@lru_cache(maxsize=None)
def bernoulli_recurrence(n: int) -> Fraction:
    """Classical B_n (B_1 = -1/2) from sum_{k<=n} C(n+1,k) B_k = 0."""
    if n == 0:
        return Fraction(1)
    s = sum(math.comb(n + 1, k) * bernoulli_recurrence(k) for k in range(n))
    return -s / (n + 1)


def gen_bernoulli(chi: DirichletChar, n: int) -> CycloValue:
    """B_{n,chi} from sum_a chi(a) t e^{at} / (e^{Mt} - 1), by series division."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    M, order = chi.modulus, chi.order
    by_exp: dict[int, list[int]] = {}
    for a in range(1, M + 1):
        e = chi.exponent(a % M if M > 1 else 1)
        if e is not None:
            by_exp.setdefault(e, []).append(a)
    terms = n + 2
    # numerator coefficients as vectors over the exponents of zeta_order
    num = []
    for k in range(terms):
        vec = [Fraction(0)] * order
        for e, avals in by_exp.items():
            vec[e] += Fraction(sum(a**k for a in avals), math.factorial(k))
        num.append(vec)
    den = [Fraction(M ** (k + 1), math.factorial(k + 1)) for k in range(terms)]
    quo: list[list[Fraction]] = []
    for k in range(n + 1):
        vec = list(num[k])
        for i in range(k):
            if den[k - i]:
                vec = [x - y * den[k - i] for x, y in zip(vec, quo[i])]
        quo.append([x / den[0] for x in vec])
    return cyclo_reduce([x * math.factorial(n) for x in quo[n]], order)


def gauss_sum(chi: DirichletChar) -> CycloValue:
    """tau(chi) = sum_a chi(a) zeta_M^a, in Q(zeta_lcm(M, order))."""
    M = chi.modulus
    N = math.lcm(M, chi.order)
    raw = [Fraction(0)] * N
    for a in range(M):
        e = chi.exponent(a) if M > 1 else 0
        if e is None:
            continue
        raw[(a * (N // M) + e * (N // chi.order)) % N] += 1
    return cyclo_reduce(raw, N)


def l_value_ratio(chi: DirichletChar, n: int) -> CycloValue:
    """Gamma(n) L(chi, n) / (2 pi i)^n as an exact cyclotomic number.

    Uses the primitive character chi* of conductor f, for which
    L(chi*, n) = (-1)^{1+(n-a)/2} tau(chi*) (2 pi / f)^n B_{n, conj chi*} / (2 i^a n!)
    when chi*(-1) = (-1)^a = (-1)^n, then restores the Euler factors at
    primes dividing the modulus but not the conductor."""
    if n < 1:
        raise ValueError("n must be positive")
    sign = chi.parity()
    if sign != (-1) ** n:
        raise ParityError(
            f"L-value not a Bernoulli period: chi(-1) = {sign} but n = {n}"
        )
    prim = chi.primitive()
    f = prim.modulus
    a = 0 if sign == 1 else 1
    N = math.lcm(f, prim.order, 4)
    tau = gauss_sum(prim)
    bern = gen_bernoulli(prim.conjugate(), n)
    i_pow = CycloValue.zeta(4, (-(a + n)) % 4)
    value = tau * bern * i_pow * Fraction((-1) ** (1 + (n - a) // 2), 2 * n * f**n)
    value = value.lift(math.lcm(N, value.n))
    for p in factorize(chi.modulus):
        if f % p:
            value = value * (1 - char_eval(prim, p) * Fraction(1, p**n))
    return value


# ---------------------------------------------------------------------------
# pi/i graded constants


class GradedConstant:
    """rational_part * pi^pi_exponent * i^i_exponent with pi kept symbolic."""

    __slots__ = ("rational_part", "pi_exponent", "i_exponent")

    def __init__(self, rational_part, pi_exponent: int = 0, i_exponent: int = 0):
        self.rational_part = CycloValue.coerce(rational_part)
        self.pi_exponent = int(pi_exponent)
        self.i_exponent = int(i_exponent) % 4

    def __mul__(self, other):
        if not isinstance(other, GradedConstant):
            other = GradedConstant(other)
        return graded_mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "GradedConstant":
        return GradedConstant(self.rational_part.inverse(), -self.pi_exponent, -self.i_exponent)

    def fold_i(self) -> "GradedConstant":
        e = self.i_exponent
        if e % 2 == 0:
            part = self.rational_part * (1 if e == 0 else -1)
        else:
            v = self.rational_part
            part = v.lift(math.lcm(v.n, 4)) * CycloValue.zeta(4, e)
        return GradedConstant(part, self.pi_exponent, 0)

    def __eq__(self, other):
        if not isinstance(other, GradedConstant):
            return NotImplemented
        a, b = self.fold_i(), other.fold_i()
        return a.pi_exponent == b.pi_exponent and a.rational_part == b.rational_part

    def __hash__(self):
        f = self.fold_i()
        return hash((f.rational_part, f.pi_exponent))

    def __repr__(self):
        return f"GradedConstant({self.rational_part!r}, pi^{self.pi_exponent}, i^{self.i_exponent})"

    def to_json(self) -> dict:
        return {
            "rational_part": self.rational_part.to_json(),
            "pi_exponent": self.pi_exponent,
            "i_exponent": self.i_exponent,
        }


def graded_mul(a: GradedConstant, b: GradedConstant) -> GradedConstant:
    return GradedConstant(
        a.rational_part * b.rational_part,
        a.pi_exponent + b.pi_exponent,
        a.i_exponent + b.i_exponent,
    )
