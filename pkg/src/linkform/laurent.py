"""Laurent polynomials over a cyclotomic field, with the involution #.

A Laurent polynomial is a finitely supported map exponent -> FieldElement.
The involution sends sum a_i t^i to sum conj(a_i) t^{-i}.  Euclidean
operations (division, gcd) work in F[t] after clearing powers of t, which is
legitimate because powers of t are units of the Laurent ring.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, Mapping

from flint import fmpq_poly

from .errors import ConductorMismatch, DivisionByZero, InvalidInput, RealModeHalfPlane, ZeroPolynomial
from .exactnum import FieldContext, FieldElement, RootOfUnity, embed_root


class Mode(enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


class LaurentPoly:
    """Immutable Laurent polynomial; ``terms`` never stores zero coefficients."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: FieldContext, terms: Mapping[int, FieldElement] | None = None):
        self.ctx = ctx
        clean = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, FieldElement):
                    c = ctx(c)
                elif c.ctx is not ctx:
                    raise ConductorMismatch("coefficient from a different field")
                if c:
                    clean[int(e)] = c
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, ctx: FieldContext) -> LaurentPoly:
        return cls(ctx)

    @classmethod
    def one(cls, ctx: FieldContext) -> LaurentPoly:
        return cls(ctx, {0: ctx.one})

    @classmethod
    def constant(cls, ctx: FieldContext, c) -> LaurentPoly:
        return cls(ctx, {0: ctx(c)})

    @classmethod
    def monomial(cls, ctx: FieldContext, c, e: int) -> LaurentPoly:
        return cls(ctx, {e: ctx(c)})

    @classmethod
    def t(cls, ctx: FieldContext) -> LaurentPoly:
        return cls(ctx, {1: ctx.one})

    @classmethod
    def from_list(cls, ctx: FieldContext, coeffs: Iterable, low: int = 0) -> LaurentPoly:
        """Coefficients listed from exponent ``low`` upward."""
        return cls(ctx, {low + i: ctx(c) for i, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, ctx, terms) -> LaurentPoly:
        out = cls.__new__(cls)
        out.ctx = ctx
        out.terms = terms
        out._hash = None
        return out

    # basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def low(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no valuation")
        return min(self.terms)

    def high(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no degree")
        return max(self.terms)

    def width(self) -> int:
        """Degree of the associated polynomial with nonzero constant term."""
        return self.high() - self.low()

    def is_unit(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def coeff(self, e: int) -> FieldElement:
        return self.terms.get(e, self.ctx.zero)

    def leading(self) -> FieldElement:
        return self.terms[self.high()]

    def trailing(self) -> FieldElement:
        return self.terms[self.low()]

    # arithmetic
    def _coerce(self, other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            if other.ctx is not self.ctx:
                raise ConductorMismatch("Laurent polynomials over different fields")
            return other
        if isinstance(other, (FieldElement, int, Fraction)):
            return LaurentPoly.constant(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return LaurentPoly._raw(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: FieldElement) -> LaurentPoly:
        if not c:
            return LaurentPoly(self.ctx)
        return LaurentPoly._raw(self.ctx, {e: v * c for e, v in self.terms.items()})

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by t**k."""
        return LaurentPoly._raw(self.ctx, {e + k: c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int, Fraction)):
            return self.scale(self.ctx(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return LaurentPoly(self.ctx)
        if len(self.terms) == 1:
            (e0, c0), = self.terms.items()
            return LaurentPoly._raw(self.ctx, {e0 + e: c0 * c for e, c in other.terms.items()})
        if len(other.terms) == 1:
            (e0, c0), = other.terms.items()
            return LaurentPoly._raw(self.ctx, {e0 + e: c * c0 for e, c in self.terms.items()})
        acc: dict[int, fmpq_poly] = {}
        for e1, c1 in self.terms.items():
            p1 = c1.poly
            for e2, c2 in other.terms.items():
                e = e1 + e2
                prod = p1 * c2.poly
                prev = acc.get(e)
                acc[e] = prod if prev is None else prev + prod
        modulus = self.ctx.modulus
        terms = {}
        for e, p in acc.items():
            if p.degree() >= self.ctx.degree:
                p = p % modulus
            if not p.is_zero():
                terms[e] = FieldElement(self.ctx, p)
        return LaurentPoly._raw(self.ctx, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if not self.is_unit():
                raise InvalidInput("negative power of a non-unit Laurent polynomial")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.ctx, {e * n: c ** n})
        result = LaurentPoly.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.ctx is other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted((e, hash(c)) for e, c in self.terms.items())))
        return self._hash

    # involution and evaluation
    def sharp(self) -> LaurentPoly:
        return LaurentPoly._raw(self.ctx, {-e: c.conj() for e, c in self.terms.items()})

    def conj_coefficients(self) -> LaurentPoly:
        return LaurentPoly._raw(self.ctx, {e: c.conj() for e, c in self.terms.items()})

    def is_symmetric(self) -> bool:
        return self.sharp() == self

    def is_real(self) -> bool:
        """Every coefficient is fixed by conjugation."""
        return all(c.conj() == c for c in self.terms.values())

    def evaluate(self, z: FieldElement) -> FieldElement:
        if not self.terms:
            return self.ctx.zero
        lo = self.low()
        acc = self.ctx.zero
        for e in range(self.high(), lo - 1, -1):
            acc = acc * z
            c = self.terms.get(e)
            if c is not None:
                acc = acc + c
        if lo:
            acc = acc * z ** lo
        return acc

    def at(self, root: RootOfUnity) -> FieldElement:
        return self.evaluate(embed_root(self.ctx, root))

    def lift(self, target: FieldContext) -> LaurentPoly:
        if target is self.ctx:
            return self
        return LaurentPoly._raw(target, {e: c.lift(target) for e, c in self.terms.items()})

    # normal forms
    def as_polynomial(self) -> tuple[int, list[FieldElement]]:
        """(valuation, coefficient list) with a nonzero constant term."""
        lo = self.low()
        return lo, [self.terms.get(e, self.ctx.zero) for e in range(lo, self.high() + 1)]

    def unit_part(self) -> LaurentPoly:
        """The unit c*t^k such that self = unit * normalized()."""
        return LaurentPoly.monomial(self.ctx, self.leading(), self.low())

    def normalized(self) -> LaurentPoly:
        """Monic polynomial with nonzero constant term, associate to self."""
        if not self.terms:
            return self
        lo = self.low()
        inv = self.leading().inverse()
        if lo == 0 and self.leading() == 1:
            return self
        return LaurentPoly._raw(self.ctx, {e - lo: c * inv for e, c in self.terms.items()})

    def is_associate(self, other: LaurentPoly) -> bool:
        return self.normalized() == other.normalized()

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            cs = str(c)
            if e == 0:
                parts.append(f"({cs})")
            else:
                parts.append(f"({cs})*t^{e}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# operations


def sharp(p: LaurentPoly) -> LaurentPoly:
    return p.sharp()


def from_roots(ctx: FieldContext, roots: Iterable[FieldElement]) -> LaurentPoly:
    out = LaurentPoly.one(ctx)
    for r in roots:
        out = out * LaurentPoly(ctx, {1: ctx.one, 0: -r})
    return out


def linear(ctx: FieldContext, root: FieldElement) -> LaurentPoly:
    """t - root."""
    return LaurentPoly(ctx, {1: ctx.one, 0: -root})


def basic_poly(mode: Mode, xi: RootOfUnity, ctx: FieldContext) -> LaurentPoly:
    """The basic polynomial vanishing at the root of unity xi."""
    z = embed_root(ctx, xi)
    if mode is Mode.COMPLEX:
        return linear(ctx, z)
    if xi.is_real():
        return linear(ctx, z)
    if xi.imag_sign() < 0:
        raise RealModeHalfPlane(f"real basic polynomials are indexed by roots with Im >= 0, got {xi}")
    # (t - xi)(1 - conj(xi) t^{-1}) = t - 2 Re(xi) + t^{-1}
    return LaurentPoly(ctx, {1: ctx.one, 0: -(z + z.conj()), -1: ctx.one})


def divmod_field(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """a = q*b + r, with the remainder contract of division in F[t]."""
    if b.is_zero():
        raise DivisionByZero("division by the zero Laurent polynomial")
    ctx = a.ctx
    if a.is_zero():
        return LaurentPoly(ctx), LaurentPoly(ctx)
    la, lb = a.low(), b.low()
    db = b.high() - lb
    if db == 0:
        inv = b.leading().inverse()
        return a.scale(inv).shift(-lb), LaurentPoly(ctx)
    # work with polynomial coefficient lists
    rem = {e - la: c for e, c in a.terms.items()}
    bcoef = {e - lb: c for e, c in b.terms.items()}
    inv = bcoef[db].inverse()
    quot = {}
    top = max(rem) if rem else -1
    while rem and top >= db:
        c = rem[top] * inv
        s = top - db
        quot[s] = c
        for e, v in bcoef.items():
            key = e + s
            nv = rem.get(key)
            nv = -(c * v) if nv is None else nv - c * v
            if nv:
                rem[key] = nv
            else:
                rem.pop(key, None)
        rem.pop(top, None)
        top = max(rem) if rem else -1
    q = LaurentPoly._raw(ctx, {e + la - lb: c for e, c in quot.items()})
    r = LaurentPoly._raw(ctx, {e + la: c for e, c in rem.items()})
    return q, r


def rem(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """The canonical representative of a modulo b: exponents in [0, deg b).

    Two Laurent polynomials are congruent modulo b exactly when their
    canonical representatives are equal.
    """
    if b.is_zero():
        raise DivisionByZero("division by the zero Laurent polynomial")
    if a.is_zero():
        return a
    bn = b.normalized()
    if bn.high() == 0:
        return LaurentPoly(a.ctx)
    low = a.low()
    body = _poly_rem(a.shift(-low), bn) if low else _poly_rem(a, bn)
    if low == 0 or body.is_zero():
        return body
    return _poly_rem(body * _t_power_mod(bn, low), bn)


def _poly_rem(a: LaurentPoly, bn: LaurentPoly) -> LaurentPoly:
    """Remainder of ordinary polynomial division; a has no negative exponents, bn is monic."""
    d = bn.high()
    if a.is_zero() or a.high() < d:
        return a
    work = dict(a.terms)
    lower = [(e, c) for e, c in bn.terms.items() if e < d]
    for top in range(a.high(), d - 1, -1):
        c = work.pop(top, None)
        if c is None or not c:
            continue
        s = top - d
        for e, v in lower:
            key = e + s
            nv = work.get(key)
            nv = -(c * v) if nv is None else nv - c * v
            if nv:
                work[key] = nv
            else:
                work.pop(key, None)
    return LaurentPoly._raw(a.ctx, work)


def _t_power_mod(bn: LaurentPoly, n: int) -> LaurentPoly:
    """t^n modulo a normalized b (nonzero constant term), as a polynomial."""
    ctx = bn.ctx
    if n >= 0:
        base = LaurentPoly.t(ctx)
    else:
        # t * (c1 + c2 t + ...) = -c0 modulo b
        c0 = bn.coeff(0)
        base = LaurentPoly(ctx, {e - 1: -c / c0 for e, c in bn.terms.items() if e > 0})
    result = LaurentPoly.one(ctx)
    base = _poly_rem(base, bn)
    n = abs(n)
    while n:
        if n & 1:
            result = _poly_rem(result * base, bn)
        n >>= 1
        if n:
            base = _poly_rem(base * base, bn)
    return result


def exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    q, r = divmod_field(a, b)
    if r:
        raise InvalidInput("division is not exact")
    return q


def divides(b: LaurentPoly, a: LaurentPoly) -> bool:
    if b.is_zero():
        return a.is_zero()
    return divmod_field(a, b)[1].is_zero()


def gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd with nonzero constant term (zero only if both inputs vanish)."""
    while b:
        a, b = b, divmod_field(a, b)[1]
    return a.normalized()


def xgcd(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """(g, s, u) with s*a + u*b = g and g normalized."""
    ctx = a.ctx
    r0, r1 = a, b
    s0, s1 = LaurentPoly.one(ctx), LaurentPoly(ctx)
    u0, u1 = LaurentPoly(ctx), LaurentPoly.one(ctx)
    while r1:
        q, r = divmod_field(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    if r0.is_zero():
        return r0, s0, u0
    unit_inv = r0.unit_part() ** -1
    return r0 * unit_inv, s0 * unit_inv, u0 * unit_inv


def inverse_mod(a: LaurentPoly, f: LaurentPoly) -> LaurentPoly:
    """b with a*b = 1 modulo f; a must be coprime to f."""
    g, s, _ = xgcd(a, f)
    if g.width() != 0:
        raise InvalidInput("element is not invertible modulo the annihilator")
    return rem(s, f)


def order_at(p: LaurentPoly, xi) -> tuple[int, LaurentPoly]:
    """Multiplicity k of (t - xi) in p, and the cofactor p0 with p = (t-xi)^k p0."""
    if p.is_zero():
        raise ZeroPolynomial("order of the zero polynomial is undefined")
    z = embed_root(p.ctx, xi) if isinstance(xi, RootOfUnity) else xi
    k = 0
    cur = p
    while True:
        q, r = _synthetic_division(cur, z)
        if r:
            return k, cur
        k += 1
        cur = q


def _synthetic_division(p: LaurentPoly, z: FieldElement) -> tuple[LaurentPoly, FieldElement]:
    """p = (t - z) q + r with r a constant (after clearing the valuation)."""
    lo, coeffs = p.as_polynomial()
    n = len(coeffs) - 1
    if n == 0:
        return LaurentPoly(p.ctx), coeffs[0]
    out = [None] * n
    acc = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = coeffs[i] + acc * z
    q = LaurentPoly(p.ctx, {lo + i: c for i, c in enumerate(out)})
    return q, acc


def substitute(p: LaurentPoly, eta: RootOfUnity, w: int = 1, ctx: FieldContext | None = None) -> LaurentPoly:
    """p(eta * t**w), optionally lifted into a larger field first."""
    if w == 0:
        raise InvalidInput("substitution exponent must be nonzero")
    ctx = ctx or p.ctx
    src = p.lift(ctx)
    z = embed_root(ctx, eta)
    return LaurentPoly(ctx, {w * e: c * z ** e for e, c in src.terms.items()})


def symmetric_unit(p: LaurentPoly) -> LaurentPoly | None:
    """The unit u = c t^k with sharp(p) = u p, or None when p is not weakly symmetric."""
    if p.is_zero():
        return LaurentPoly.one(p.ctx)
    s = p.sharp()
    u = LaurentPoly.monomial(p.ctx, s.leading() / p.leading(), s.high() - p.high())
    return u if u * p == s else None


def is_weakly_symmetric(p: LaurentPoly) -> bool:
    return symmetric_unit(p) is not None


def cyclotomic_sum(ctx: FieldContext, k: int) -> LaurentPoly:
    """P_k(t) = 1 + t + ... + t^k."""
    return LaurentPoly(ctx, {e: ctx.one for e in range(k + 1)})
