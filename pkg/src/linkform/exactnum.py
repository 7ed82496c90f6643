"""Exact arithmetic in cyclotomic fields Q(zeta_N) with certified signs.

Elements are stored in the power basis of zeta_N reduced modulo the N-th
cyclotomic polynomial, so equality of elements is equality of coordinates.
Signs of real elements are decided by evaluating at zeta_N = exp(2 pi i / N)
with ball arithmetic, after an exact zero test, doubling the working precision
until the enclosure excludes zero.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
from flint import acb, acb_poly, arb, fmpq, fmpq_poly, fmpz_poly

from .errors import ConductorCapExceeded, ConductorMismatch, InvalidInput, NotReal

CAP_VARIABLE = "LINKFORM_CONDUCTOR_CAP"
START_PRECISION = 64


@dataclass(frozen=True, order=False)
class RootOfUnity:
    """The complex number exp(2 pi i num / den) in canonical form."""

    num: int
    den: int = 1

    def __post_init__(self):
        num, den = int(self.num), int(self.den)
        if den < 1:
            raise InvalidInput(f"root of unity needs a positive denominator, got {den}")
        num %= den
        g = math.gcd(num, den)
        if num == 0:
            num, den = 0, 1
        else:
            num, den = num // g, den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_angle(cls, turns) -> RootOfUnity:
        turns = Fraction(turns)
        return cls(turns.numerator, turns.denominator)

    @property
    def angle(self) -> Fraction:
        """Argument as a fraction of a full turn, in [0, 1)."""
        return Fraction(self.num, self.den)

    @property
    def order(self) -> int:
        return self.den

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity.from_angle(self.angle + other.angle)

    def __truediv__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity.from_angle(self.angle - other.angle)

    def __pow__(self, e: int) -> RootOfUnity:
        return RootOfUnity.from_angle(self.angle * e)

    def inverse(self) -> RootOfUnity:
        return RootOfUnity.from_angle(-self.angle)

    conj = inverse

    def is_real(self) -> bool:
        return self.den <= 2

    def imag_sign(self) -> int:
        if self.is_real():
            return 0
        return 1 if self.angle < Fraction(1, 2) else -1

    def __lt__(self, other: RootOfUnity) -> bool:
        return self.angle < other.angle

    def __str__(self) -> str:
        return "1" if self.num == 0 else f"e(2pi i*{self.num}/{self.den})"

    def to_complex(self) -> complex:
        return complex(math.cos(2 * math.pi * self.num / self.den), math.sin(2 * math.pi * self.num / self.den))


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def conductor_for(*orders: int) -> int:
    """Smallest conductor divisible by 4 that contains every given root order."""
    return lcm(4, *orders)


def conductor_cap() -> int | None:
    raw = os.environ.get(CAP_VARIABLE)
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidInput(f"{CAP_VARIABLE} must be an integer, got {raw!r}") from exc


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> fmpq_poly:
    return fmpq_poly(fmpz_poly.cyclotomic(n))


def totient(n: int) -> int:
    return _cyclotomic(n).degree()


def check_cap(n: int) -> None:
    cap = conductor_cap()
    if cap is not None and totient(n) > cap:
        raise ConductorCapExceeded(
            f"field Q(zeta_{n}) has degree {totient(n)}, above {CAP_VARIABLE}={cap}"
        )


class FieldContext:
    """The cyclotomic field Q(zeta_N); N must be a multiple of 4."""

    __slots__ = ("N", "degree", "modulus", "_zeta_cache", "_zero", "_one")
    _instances: dict[int, FieldContext] = {}

    def __new__(cls, N: int):
        N = int(N)
        if N in cls._instances:
            return cls._instances[N]
        if N < 4 or N % 4:
            raise InvalidInput(f"conductor must be a positive multiple of 4, got {N}")
        check_cap(N)
        self = super().__new__(cls)
        self.N = N
        self.modulus = _cyclotomic(N)
        self.degree = self.modulus.degree()
        self._zeta_cache = {}
        self._zero = FieldElement(self, fmpq_poly())
        self._one = FieldElement(self, fmpq_poly([1]))
        cls._instances[N] = self
        return self

    def __reduce__(self):
        return (FieldContext, (self.N,))

    def __repr__(self) -> str:
        return f"FieldContext({self.N})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldContext) and other.N == self.N

    def __hash__(self) -> int:
        return hash(("FieldContext", self.N))

    @property
    def zero(self) -> FieldElement:
        return self._zero

    @property
    def one(self) -> FieldElement:
        return self._one

    def __call__(self, value) -> FieldElement:
        """Coerce an integer, fraction, string "p/q" or element into this field."""
        if isinstance(value, FieldElement):
            if value.ctx is self:
                return value
            return value.lift(self)
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            value = fmpq(value.numerator, value.denominator)
        return FieldElement(self, fmpq_poly([value]))

    def zeta(self, j: int = 1) -> FieldElement:
        """zeta_N ** j."""
        j %= self.N
        cached = self._zeta_cache.get(j)
        if cached is None:
            coeffs = [0] * (j + 1)
            coeffs[j] = 1
            cached = FieldElement(self, fmpq_poly(coeffs) % self.modulus)
            self._zeta_cache[j] = cached
        return cached

    @property
    def i(self) -> FieldElement:
        return self.zeta(self.N // 4)

    def from_coeffs(self, coeffs) -> FieldElement:
        values = [fmpq(Fraction(c).numerator, Fraction(c).denominator) for c in coeffs]
        return FieldElement(self, fmpq_poly(values) % self.modulus)

    def contains(self, root: RootOfUnity) -> bool:
        return self.N % root.den == 0


def field(N: int) -> FieldContext:
    return FieldContext(N)


class FieldElement:
    """An element of Q(zeta_N), immutable."""

    __slots__ = ("ctx", "poly")

    def __init__(self, ctx: FieldContext, poly: fmpq_poly):
        self.ctx = ctx
        self.poly = poly

    # coercion helpers
    def _other(self, other) -> fmpq_poly:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ConductorMismatch(f"cannot combine Q(zeta_{self.ctx.N}) with Q(zeta_{other.ctx.N})")
            return other.poly
        if isinstance(other, (int, fmpq)):
            return fmpq_poly([other])
        if isinstance(other, Fraction):
            return fmpq_poly([fmpq(other.numerator, other.denominator)])
        return NotImplemented

    def __add__(self, other):
        p = self._other(other)
        if p is NotImplemented:
            return p
        return FieldElement(self.ctx, self.poly + p)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._other(other)
        if p is NotImplemented:
            return p
        return FieldElement(self.ctx, self.poly - p)

    def __rsub__(self, other):
        p = self._other(other)
        if p is NotImplemented:
            return p
        return FieldElement(self.ctx, p - self.poly)

    def __neg__(self):
        return FieldElement(self.ctx, -self.poly)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ConductorMismatch(f"cannot combine Q(zeta_{self.ctx.N}) with Q(zeta_{other.ctx.N})")
            if other.poly.degree() <= 0 or self.poly.degree() <= 0:
                return FieldElement(self.ctx, self.poly * other.poly)
            return FieldElement(self.ctx, (self.poly * other.poly) % self.ctx.modulus)
        p = self._other(other)
        if p is NotImplemented:
            return p
        return FieldElement(self.ctx, self.poly * p)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.poly.degree() == 0:
            return FieldElement(self.ctx, fmpq_poly([1 / self.poly[0]]))
        g, s, _ = self.poly.xgcd(self.ctx.modulus)
        return FieldElement(self.ctx, (s / g[0]) % self.ctx.modulus)

    def __truediv__(self, other):
        if isinstance(other, FieldElement):
            return self * other.inverse()
        if isinstance(other, int):
            other = fmpq(other)
        elif isinstance(other, Fraction):
            other = fmpq(other.numerator, other.denominator)
        return FieldElement(self.ctx, self.poly / other)

    def __rtruediv__(self, other):
        return self.ctx(other) * self.inverse()

    def __pow__(self, e: int) -> FieldElement:
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.poly == other.poly
        if isinstance(other, (int, Fraction)):
            return self.poly == self._other(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ctx.N, tuple(self.poly.coeffs())))

    def __bool__(self) -> bool:
        return not self.poly.is_zero()

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree() <= 0

    def conj(self) -> FieldElement:
        """Image under zeta_N -> zeta_N^{-1}."""
        coeffs = self.poly.coeffs()
        if len(coeffs) <= 1:
            return self
        N = self.ctx.N
        spread = [0] * N
        for j, c in enumerate(coeffs):
            if c:
                spread[(N - j) % N] = c
        return FieldElement(self.ctx, fmpq_poly(spread) % self.ctx.modulus)

    def is_real(self) -> bool:
        return self.conj() == self

    def real_part(self) -> FieldElement:
        return (self + self.conj()) / 2

    def imag_part(self) -> FieldElement:
        """(x - conj x) / (2i), a real element."""
        return (self - self.conj()) * self.ctx.i.inverse() / 2

    def coefficients(self) -> list[Fraction]:
        """Rational coordinates in the power basis, padded to the field degree."""
        out = [Fraction(int(c.p), int(c.q)) for c in self.poly.coeffs()]
        return out + [Fraction(0)] * (self.ctx.degree - len(out))

    def lift(self, target: FieldContext) -> FieldElement:
        """Embed into a larger cyclotomic field containing this one."""
        if target is self.ctx:
            return self
        if target.N % self.ctx.N:
            raise ConductorMismatch(f"Q(zeta_{self.ctx.N}) is not contained in Q(zeta_{target.N})")
        step = target.N // self.ctx.N
        coeffs = self.poly.coeffs()
        spread = [0] * (step * max(len(coeffs) - 1, 0) + 1)
        for j, c in enumerate(coeffs):
            spread[j * step] = c
        return FieldElement(target, fmpq_poly(spread) % target.modulus)

    def enclosure(self, prec: int) -> acb:
        with flint.ctx.workprec(prec):
            z = acb(arb(fmpq(2, self.ctx.N))).exp_pi_i()
            return acb_poly(self.poly.coeffs())(z)

    def to_complex(self) -> complex:
        value = self.enclosure(80)
        return complex(float(value.real.mid()), float(value.imag.mid()))

    def __repr__(self) -> str:
        return f"FieldElement(N={self.ctx.N}, {self.poly})"

    def __str__(self) -> str:
        return str(self.poly).replace("x", f"z{self.ctx.N}")


def embed_root(ctx: FieldContext, root: RootOfUnity) -> FieldElement:
    """The image of exp(2 pi i num/den) in Q(zeta_N)."""
    if ctx.N % root.den:
        raise ConductorMismatch(f"a root of order {root.den} does not live in Q(zeta_{ctx.N})")
    return ctx.zeta((ctx.N // root.den) * root.num)


def _sign_of_real_part(x: FieldElement) -> int:
    prec = START_PRECISION
    while True:
        re = x.enclosure(prec).real
        if re > 0:
            return 1
        if re < 0:
            return -1
        prec *= 2


def real_sign(x: FieldElement) -> int:
    """Exact sign of a real element of Q(zeta_N)."""
    if x.is_rational():
        c = x.poly[0]
        return (c > 0) - (c < 0)
    if x.conj() != x:
        raise NotReal(f"{x} is not fixed by complex conjugation")
    return _sign_of_real_part(x)


def imag_sign(x: FieldElement) -> int:
    """Exact sign of the imaginary part of x."""
    return real_sign(x.imag_part())


def compare(a: FieldElement, b: FieldElement) -> int:
    """Sign of a - b for real elements."""
    return real_sign(a - b)
