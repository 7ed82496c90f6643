"""Linking forms over F[t, t^-1] and their isometry classification.

A linking form is given as an orthogonal sum of cyclic pairings (f, h), each
meaning the pairing on F[t, t^-1]/(f) with lambda(1, 1) = h/f.  ``classify``
splits every cyclic pairing into primary pieces and reads off the basic form
E(n, k, eps, xi) (roots on the unit circle) or F((a, b), k, xi) (roots off it).
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import (
    InvalidInput,
    NotHermitian,
    NotPrimary,
    SingularForm,
    SingularMatrix,
    UnfactorableAnnihilator,
)
from .exactnum import FieldContext, FieldElement, RootOfUnity, embed_root, imag_sign, real_sign
from .laurent import (
    LaurentPoly,
    Mode,
    basic_poly,
    divmod_field,
    exact_div,
    gcd,
    inverse_mod,
    linear,
    order_at,
    rem,
    substitute,
)
from .plinalg import LaurentMatrix, determinant, hermitian_check, smith_normal_form

# ---------------------------------------------------------------------------
# basic forms and decompositions


@dataclass(frozen=True)
class EForm:
    """Basic form at a root of unity: e(n, k, eps, xi)."""

    n: int
    k: int
    eps: int
    xi: RootOfUnity

    def sort_key(self):
        return (0, self.xi.angle, self.n, self.k, self.eps)

    def negated(self) -> EForm:
        return EForm(self.n, self.k, -self.eps, self.xi)

    def __str__(self) -> str:
        return f"E({self.n},{self.k},{self.eps:+d},{self.xi.num}/{self.xi.den})"


@dataclass(frozen=True)
class FForm:
    """Basic form at a pair of roots off the unit circle: f^w((a, b), k, xi), |xi| < 1."""

    a: int
    b: int
    k: int
    xi: FieldElement

    def sort_key(self):
        return (1, tuple(self.xi.coefficients()), self.a, self.b, self.k)

    def negated(self) -> FForm:
        # -f is isometric to f: the off-circle forms carry no sign
        return self

    def __str__(self) -> str:
        return f"F(({self.a},{self.b}),{self.k},{self.xi})"


BasicForm = EForm | FForm


class Decomposition:
    """A multiset of basic forms together with the mode it was computed in."""

    __slots__ = ("mode", "forms")

    def __init__(self, mode: Mode, forms: Iterable[BasicForm] = ()):
        self.mode = mode
        self.forms = tuple(sorted(forms, key=lambda f: f.sort_key()))

    def __iter__(self):
        return iter(self.forms)

    def __len__(self) -> int:
        return len(self.forms)

    def __eq__(self, other) -> bool:
        return isinstance(other, Decomposition) and self.mode == other.mode and self.forms == other.forms

    def __hash__(self) -> int:
        return hash((self.mode, self.forms))

    def counter(self) -> Counter:
        return Counter(self.forms)

    def __add__(self, other: Decomposition) -> Decomposition:
        if self.mode != other.mode:
            raise InvalidInput("cannot add decompositions of different modes")
        return Decomposition(self.mode, self.forms + other.forms)

    def negated(self) -> Decomposition:
        return Decomposition(self.mode, [f.negated() for f in self.forms])

    def e_forms(self) -> list[EForm]:
        return [f for f in self.forms if isinstance(f, EForm)]

    def __repr__(self) -> str:
        return f"Decomposition({self.mode.value}, [{', '.join(map(str, self.forms))}])"


def is_nonsingular(d: Decomposition) -> bool:
    for f in d:
        if f.k != 0:
            return False
        if isinstance(f, FForm) and f.a != f.b:
            return False
    return True


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    EQUAL_DECOMPOSITIONS_ONLY = "equal-decompositions-only"
    UNDETERMINED = "undetermined"


def _module_type(d: Decomposition) -> Counter:
    out = Counter()
    for f in d:
        if isinstance(f, EForm):
            out[("E", f.xi, f.n)] += 1
        else:
            out[("F", f.xi, f.a, f.b)] += 1
    return out


def isometric(d1: Decomposition, d2: Decomposition) -> Verdict:
    """Compare two decompositions.

    Non-singular decompositions are unique up to permutation, so multiset
    equality decides isometry.  For singular ones equal multisets only give
    sufficiency; differing underlying modules still prove non-isometry.
    """
    if d1.mode != d2.mode:
        raise InvalidInput("decompositions live in different modes")
    equal = d1.counter() == d2.counter()
    if is_nonsingular(d1) and is_nonsingular(d2):
        return Verdict.YES if equal else Verdict.NO
    if equal:
        return Verdict.EQUAL_DECOMPOSITIONS_ONLY
    if _module_type(d1) != _module_type(d2):
        return Verdict.NO
    return Verdict.UNDETERMINED


# ---------------------------------------------------------------------------
# cyclic pairings and linking forms


@dataclass
class CyclicPairing:
    """lambda(1, 1) = h/f on F[t, t^-1]/(f)."""

    f: LaurentPoly
    h: LaurentPoly
    mode: Mode = Mode.COMPLEX

    def __post_init__(self):
        if self.f.is_zero():
            raise InvalidInput("annihilator must be nonzero")
        self.h = rem(self.h, self.f)

    @property
    def ctx(self) -> FieldContext:
        return self.f.ctx

    def is_hermitian(self) -> bool:
        """h/f equals its image under # modulo the ring."""
        f, h = self.f, self.h
        diff = h.sharp() * f - h * f.sharp()
        return divmod_field(diff, f * f.sharp())[1].is_zero()

    def negated(self) -> CyclicPairing:
        return CyclicPairing(self.f, -self.h, self.mode)


@dataclass
class LinkingForm:
    """Orthogonal sum of cyclic pairings over one field."""

    ctx: FieldContext
    mode: Mode
    summands: list[CyclicPairing] = dc_field(default_factory=list)
    off_circle_roots: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        for c in self.summands:
            if c.f.ctx is not self.ctx:
                raise InvalidInput("summands must share the field of the form")
            if c.mode is not self.mode:
                raise InvalidInput("summands must share the mode of the form")
            if self.mode is Mode.REAL and not (c.f.is_real() and c.h.is_real()):
                raise InvalidInput("real-mode pairings need conjugation-invariant coefficients")


def direct_sum(F1: LinkingForm, F2: LinkingForm) -> LinkingForm:
    if F1.mode is not F2.mode or F1.ctx is not F2.ctx:
        raise InvalidInput("direct sum needs matching mode and field")
    roots = tuple(dict.fromkeys(F1.off_circle_roots + F2.off_circle_roots))
    return LinkingForm(F1.ctx, F1.mode, F1.summands + F2.summands, roots)


def negate(F: LinkingForm) -> LinkingForm:
    return LinkingForm(F.ctx, F.mode, [c.negated() for c in F.summands], F.off_circle_roots)


def substitute_form(F: LinkingForm, eta: RootOfUnity, w: int = 1, ctx: FieldContext | None = None) -> LinkingForm:
    """Replace t by eta * t**w in every annihilator and numerator; the result is complex."""
    ctx = ctx or F.ctx
    summands = [
        CyclicPairing(substitute(c.f, eta, w, ctx), substitute(c.h, eta, w, ctx), Mode.COMPLEX) for c in F.summands
    ]
    return LinkingForm(ctx, Mode.COMPLEX, summands)


# ---------------------------------------------------------------------------
# factorization into basic polynomials


@dataclass(frozen=True)
class PrimaryKey:
    """Identifies a basic polynomial: a root of unity, or an off-circle root with |xi| < 1."""

    root: RootOfUnity | None = None
    off: FieldElement | None = None

    def is_circle(self) -> bool:
        return self.root is not None


def _off_circle_factors(ctx: FieldContext, mode: Mode, xi: FieldElement) -> tuple[LaurentPoly, LaurentPoly]:
    """(F_plus, F_minus) for an off-circle root, as Laurent polynomials."""
    plus = linear(ctx, xi)
    minus = LaurentPoly(ctx, {-1: ctx.one, 0: -xi.conj()})
    if mode is Mode.REAL and not xi.is_real():
        plus = plus * linear(ctx, xi.conj())
        minus = minus * LaurentPoly(ctx, {-1: ctx.one, 0: -xi})
    return plus, minus


def _normalize_off_root(xi: FieldElement) -> FieldElement:
    norm = xi * xi.conj()
    s = real_sign(norm - 1)
    if s == 0:
        raise InvalidInput("declared off-circle roots must not lie on the unit circle")
    return xi if s < 0 else xi.conj().inverse()


def _real_circle_roots(N: int) -> list[RootOfUnity]:
    return [RootOfUnity(j, N) for j in range(N) if RootOfUnity(j, N).imag_sign() >= 0]


def factor_annihilator(
    f: LaurentPoly, mode: Mode, off_roots: Sequence[FieldElement] = ()
) -> list[tuple[PrimaryKey, int, LaurentPoly]]:
    """Split f into basic-polynomial powers: a list of (key, exponent, power)."""
    ctx = f.ctx
    N = ctx.N
    rest = f
    out = []
    if rest.is_unit():
        return out
    candidates = [RootOfUnity(j, N) for j in range(N)] if mode is Mode.COMPLEX else _real_circle_roots(N)
    for xi in candidates:
        if rest.is_unit():
            break
        z = embed_root(ctx, xi)
        if rest.evaluate(z):
            continue
        B = basic_poly(mode, xi, ctx)
        n = 0
        while True:
            q, r = divmod_field(rest, B)
            if r:
                break
            rest = q
            n += 1
        out.append((PrimaryKey(root=xi), n, B ** n))
    for raw in off_roots:
        if rest.is_unit():
            break
        xi = _normalize_off_root(raw.lift(ctx) if raw.ctx is not ctx else raw)
        plus, minus = _off_circle_factors(ctx, mode, xi)
        a = b = 0
        power = LaurentPoly.one(ctx)
        for fac, which in ((plus, "a"), (minus, "b")):
            while True:
                q, r = divmod_field(rest, fac)
                if r:
                    break
                rest = q
                power = power * fac
                if which == "a":
                    a += 1
                else:
                    b += 1
        if a or b:
            out.append((PrimaryKey(off=xi), (a, b), power))
    if not rest.is_unit():
        raise UnfactorableAnnihilator(f"annihilator factor {rest.normalized()} has no declared root")
    return out


def crt_split(c: CyclicPairing, off_roots: Sequence[FieldElement] = ()) -> list[tuple[PrimaryKey, CyclicPairing]]:
    """One primary cyclic pairing per basic factor of the annihilator.

    The primary summand for the factor p of f is generated by (f/p) * 1, on
    which the pairing takes the value h (f/p)^# / p.
    """
    pieces = []
    for key, _, p in factor_annihilator(c.f, c.mode, off_roots):
        cof = exact_div(c.f, p)
        pieces.append((key, CyclicPairing(p, c.h * cof.sharp(), c.mode)))
    return pieces


# ---------------------------------------------------------------------------
# classification of primary cyclic pairings


def _eps_from_value(mode: Mode, xi: RootOfUnity, n: int, k: int, ratio: FieldElement) -> int:
    """Sign recipe; ``ratio`` is h0(xi)/g0(xi) where f = B^n g0 and h = B^k h0."""
    ctx = ratio.ctx
    d = n - k
    if mode is Mode.REAL:
        s = real_sign(ratio)
        if s == 0:
            raise InvalidInput("degenerate sign test")
        if xi.is_real():
            if d % 2:
                raise InvalidInput("real forms at +-1 need n - k even")
            return s * (-1) ** (d // 2)
        return s
    z = embed_root(ctx, xi)
    w = -(z.conj() ** 2)
    if d % 2 == 0:
        value = ratio * w ** (d // 2)
        s = real_sign(value)
        if s == 0:
            raise InvalidInput("degenerate sign test")
        return s
    r0 = ratio * w ** ((d - 1) // 2)
    probe = z.conj() * r0
    if real_sign(probe.real_part()) != 0:
        raise NotPrimary("pairing is not Hermitian at the root: residue test has a real part")
    return 1 if imag_sign(probe) < 0 else -1


def classify_primary(c: CyclicPairing, key: PrimaryKey) -> BasicForm:
    """Identify the basic form of a primary cyclic pairing."""
    ctx = c.ctx
    if key.is_circle():
        xi = key.root
        z = embed_root(ctx, xi)
        n, g0_lin = order_at(c.f, z)
        if n == 0:
            raise NotPrimary(f"annihilator does not vanish at {xi}")
        B = basic_poly(c.mode, xi, ctx)
        g0 = exact_div(c.f, B ** n)
        if not g0.is_unit() and not g0.evaluate(z):
            raise NotPrimary("annihilator has a repeated factor beyond the basic polynomial power")
        if c.mode is Mode.REAL and not xi.is_real() and g0.at(xi.conj()) == 0:
            raise NotPrimary("annihilator is not a power of the real basic polynomial")
        if c.h.is_zero():
            return EForm(n, n, 1, xi)
        k, _ = order_at(c.h, z)
        if k >= n:
            return EForm(n, n, 1, xi)
        h0 = c.h
        for _ in range(k):
            h0 = exact_div(h0, B)
        ratio = h0.evaluate(z) / g0.evaluate(z)
        return EForm(n, k, _eps_from_value(c.mode, xi, n, k, ratio), xi)
    xi = key.off
    plus, minus = _off_circle_factors(ctx, c.mode, xi)
    a = _multiplicity(c.f, plus)
    b = _multiplicity(c.f, minus)
    if a + b == 0:
        raise NotPrimary("annihilator does not vanish at the declared root")
    if c.h.is_zero():
        return FForm(a, b, min(a, b), xi)
    reduced_den = exact_div(c.f, gcd(c.f, c.h))
    cden = _multiplicity(reduced_den, plus)
    return FForm(a, b, min(a, b) - cden, xi)


def _multiplicity(p: LaurentPoly, fac: LaurentPoly) -> int:
    n = 0
    while True:
        q, r = divmod_field(p, fac)
        if r:
            return n
        p = q
        n += 1


def classify(F: LinkingForm) -> Decomposition:
    """Isometry invariant of a weakly split linking form as a multiset of basic forms."""
    out = []
    for c in F.summands:
        for key, piece in crt_split(c, F.off_circle_roots):
            out.append(classify_primary(piece, key))
    return Decomposition(F.mode, out)


# ---------------------------------------------------------------------------
# values in F(t)/F[t, t^-1]


class Fraction_:
    """A class num/den in F(t)/F[t, t^-1], kept with den normalized and num reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if den.is_zero():
            raise InvalidInput("zero denominator")
        unit = den.unit_part()
        den = den.normalized()
        num = num * unit ** -1
        if num:
            g = gcd(num, den)
            if g.width():
                num = exact_div(num, g)
                den = exact_div(den, g)
                unit = den.unit_part()
                den = den.normalized()
                num = num * unit ** -1
            num = rem(num, den)
        if not num or den.width() == 0:
            num = LaurentPoly(den.ctx)
            den = LaurentPoly.one(den.ctx)
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: Fraction_) -> Fraction_:
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            return Fraction_(self.num + other.num, self.den)
        g = gcd(self.den, other.den)
        a = exact_div(other.den, g)
        b = exact_div(self.den, g)
        return Fraction_(self.num * a + other.num * b, self.den * a)

    def __neg__(self) -> Fraction_:
        return Fraction_(-self.num, self.den)

    def __sub__(self, other: Fraction_) -> Fraction_:
        return self + (-other)

    def times(self, p: LaurentPoly) -> Fraction_:
        return Fraction_(self.num * p, self.den)

    def sharp(self) -> Fraction_:
        return Fraction_(self.num.sharp(), self.den.sharp())

    def __eq__(self, other) -> bool:
        return isinstance(other, Fraction_) and self.den == other.den and self.num == other.num

    def __repr__(self) -> str:
        return f"({self.num})/({self.den})"


def _order_exponent(den: LaurentPoly, B: LaurentPoly) -> int:
    return _multiplicity(den, B) if den.width() else 0


def _split_primary(
    key: PrimaryKey,
    B: LaurentPoly,
    orders: list[int],
    gram: list[list[Fraction_]],
    mode: Mode,
) -> list[CyclicPairing]:
    """Orthogonalize a B-primary Gram matrix into cyclic pairings (B^n, h)."""
    ctx = B.ctx
    one = LaurentPoly.one(ctx)
    t = LaurentPoly.t(ctx)
    combos = [one, t, one + t]
    if mode is Mode.COMPLEX:
        combos.insert(1, LaurentPoly.constant(ctx, ctx.i))
        combos.append(one + LaurentPoly.constant(ctx, ctx.i))
    gens = list(range(len(orders)))
    G = [row[:] for row in gram]
    n_of = list(orders)
    out = []
    while gens:
        top = max(n_of[i] for i in gens)
        tops = [i for i in gens if n_of[i] == top]

        def full(value: Fraction_) -> bool:
            return _order_exponent(value.den, B) == top

        chosen = next((i for i in tops if full(G[i][i])), None)
        if chosen is None:
            for i in tops:
                for j in tops:
                    if i == j or chosen is not None:
                        continue
                    for c in combos:
                        value = G[i][i] + G[j][i].times(c) + G[i][j].times(c.sharp()) + G[j][j].times(c * c.sharp())
                        if full(value):
                            _combine(G, i, j, c)
                            chosen = i
                            break
            if chosen is None:
                raise SingularForm("primary part is degenerate; no generator of full order pairs non-trivially")
        x = chosen
        fx = B ** top
        gxx = G[x][x]
        h = _numerator_over(gxx, fx)
        out.append(CyclicPairing(fx, h, mode))
        inv = inverse_mod(h, fx)
        others = [u for u in gens if u != x]
        coeff = {}
        for u in others:
            # lambda(u, x) = q / fx; subtract c x with c = q * h^{-1}
            q = _numerator_over(G[u][x], fx)
            coeff[u] = rem(q * inv, fx)
        for u in others:
            for v in others:
                cu, cv = coeff[u], coeff[v]
                G[u][v] = (
                    G[u][v] - G[x][v].times(cu) - G[u][x].times(cv.sharp()) + G[x][x].times(cu * cv.sharp())
                )
            G[u][x] = Fraction_(LaurentPoly(ctx), one)
            G[x][u] = Fraction_(LaurentPoly(ctx), one)
        gens = others
    return out


def _combine(G, i, j, c):
    """Replace generator i by x_i + c x_j in the Gram matrix (linear in the first slot)."""
    n = len(G)
    new_row = [G[i][v] + G[j][v].times(c) for v in range(n)]
    for v in range(n):
        G[i][v] = new_row[v]
    for u in range(n):
        if u != i:
            G[u][i] = G[u][i] + G[u][j].times(c.sharp())
    G[i][i] = G[i][i] + G[i][j].times(c.sharp())


def _numerator_over(value: Fraction_, f: LaurentPoly) -> LaurentPoly:
    """h with value = h/f in F(t)/F[t, t^-1]; the denominator must divide f."""
    if value.is_zero():
        return LaurentPoly(f.ctx)
    q, r = divmod_field(f, value.den)
    if r:
        raise InvalidInput("value is not annihilated by the given order")
    return rem(value.num * q, f)


def split_gram(
    ctx: FieldContext,
    mode: Mode,
    orders: Sequence[LaurentPoly],
    gram: Sequence[Sequence[Fraction_]],
    off_roots: Sequence[FieldElement] = (),
) -> LinkingForm:
    """Weakly split an arbitrary presentation sum Lambda/(d_i) with a Gram matrix.

    ``gram[i][j]`` is lambda(g_i, g_j), linear in the first argument.  The
    output is an orthogonal sum of primary cyclic pairings.
    """
    by_key: dict[PrimaryKey, list] = {}
    for i, d in enumerate(orders):
        for key, expo, p in factor_annihilator(d, mode, off_roots):
            cof = exact_div(d, p)
            by_key.setdefault(key, []).append((i, expo, p, cof))
    summands = []
    for key, items in sorted(by_key.items(), key=lambda kv: _key_order(kv[0])):
        if not key.is_circle():
            # off-circle primary parts: keep the cyclic generators as they are
            for i, _, p, cof in items:
                summands.append(CyclicPairing(p, _numerator_over(gram[i][i].times(cof * cof.sharp()), p), mode))
            continue
        B = basic_poly(mode, key.root, ctx)
        local_gram = [
            [gram[i][j].times(ci * cj.sharp()) for (j, _, _, cj) in items] for (i, _, _, ci) in items
        ]
        summands.extend(_split_primary(key, B, [e for _, e, _, _ in items], local_gram, mode))
    return LinkingForm(ctx, mode, summands, tuple(off_roots))


def _key_order(key: PrimaryKey):
    if key.is_circle():
        return (0, key.root.angle)
    return (1, tuple(key.off.coefficients()))


def from_matrix(A: LaurentMatrix, mode: Mode | None = None) -> LinkingForm:
    """The form ([x], [y]) -> x^T A^{-1} y^# on Lambda^n / A^T Lambda^n, weakly split."""
    if not hermitian_check(A):
        raise NotHermitian("matrix is not Hermitian")
    det = determinant(A)
    if det.is_zero():
        raise SingularMatrix("matrix is singular over the fraction field")
    if mode is None:
        mode = Mode.REAL if all(e.is_real() for row in A.entries for e in row) else Mode.COMPLEX
    ctx = A.ctx
    snf = smith_normal_form(A.transpose())
    diag = snf.diagonal
    # Gram of the generators U e_i: (1/d_i) (V^{-T} U^#)_{ij}
    W = snf.V_inv.transpose() * LaurentMatrix(ctx, [[e.sharp() for e in row] for row in snf.U.entries])
    keep = [i for i, d in enumerate(diag) if d.width() > 0]
    gram = [[Fraction_(W.entries[i][j], diag[i]) for j in keep] for i in keep]
    return split_gram(ctx, mode, [diag[i] for i in keep], gram)


def gram_is_hermitian(gram: Sequence[Sequence[Fraction_]]) -> bool:
    n = len(gram)
    return all(gram[i][j] == gram[j][i].sharp() for i in range(n) for j in range(n))


# ---------------------------------------------------------------------------
# reference forms


def reference_pairing(ctx: FieldContext, mode: Mode, form: EForm) -> CyclicPairing:
    """A cyclic pairing realizing the basic form, built from the defining formulas."""
    xi = form.xi
    z = embed_root(ctx, xi)
    B = basic_poly(mode, xi, ctx)
    f = B ** form.n
    d = form.n - form.k
    eps = form.eps
    if mode is Mode.REAL:
        if xi.is_real():
            # B(t^{-1}) = -xi t^{-1} B, so the denominator is a unit times B^{n-k}
            unit = LaurentPoly.monomial(ctx, -z, -1)
            h = LaurentPoly.constant(ctx, eps) * B ** form.k * unit ** (-(d // 2))
            return CyclicPairing(f, h, mode)
        return CyclicPairing(f, LaurentPoly.constant(ctx, eps) * B ** form.k, mode)
    Csharp_unit = LaurentPoly.monomial(ctx, -z.conj(), -1)  # t^{-1} - conj(xi) = unit * (t - xi)
    if d % 2 == 0:
        h = LaurentPoly.constant(ctx, eps) * B ** form.k * Csharp_unit ** (-(d // 2))
        return CyclicPairing(f, h, mode)
    r = positive_linear(ctx, xi)
    h = LaurentPoly.constant(ctx, eps) * r * B ** form.k * Csharp_unit ** (-((d - 1) // 2))
    return CyclicPairing(f, h, mode)


def positive_linear(ctx: FieldContext, xi: RootOfUnity) -> LaurentPoly:
    """A linear xi-positive polynomial, checked by the residue criterion."""
    z = embed_root(ctx, xi)
    t = LaurentPoly.t(ctx)
    if xi.is_real():
        # -i (t + 1) at xi = 1, -i (t - 1) at xi = -1
        r = (t + LaurentPoly.constant(ctx, z)) * LaurentPoly.constant(ctx, -ctx.i)
    else:
        r = LaurentPoly.one(ctx) - t.scale(z)
        if xi.imag_sign() < 0:
            r = -r
    probe = z.conj() * r.evaluate(z)
    if real_sign(probe.real_part()) != 0 or imag_sign(probe) >= 0:
        raise AssertionError(f"constructed polynomial is not positive at {xi}")
    return r
