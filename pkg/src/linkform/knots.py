"""Twisted Blanchfield forms of T(2, 2k+1) from an explicit chain complex.

The fundamental group of the zero-surgery on T(2, 2k+1) is presented as

    G0 = < a, b | a^(2k+1) b^2,  (a^k b)^(2k+1) a^(2k+1) (a^k b)^(2k+1) >

with meridian mu = (a^k b)^-1.  Boundary maps of the universal cover and the
duality chain map are group-ring matrices obtained by Fox calculus.  A
representation turns them into Laurent matrices; the cohomological pairing
is then computed by Smith normal forms and reduced into a weakly split form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import CharacterOrderMismatch, InvalidInput, NonTorsion, NotHermitian, UnsolvableLift
from .exactnum import FieldContext, RootOfUnity, conductor_for, field, real_sign
from .forms import (
    CyclicPairing,
    Decomposition,
    EForm,
    Fraction_,
    LinkingForm,
    classify,
    gram_is_hermitian,
    split_gram,
    substitute_form,
)
from .laurent import LaurentPoly, Mode, basic_poly, cyclotomic_sum
from .plinalg import LaurentMatrix, block_matrix, smith_normal_form
from .signatures import WittClass, witt_normal_form

# ---------------------------------------------------------------------------
# free groups and Fox calculus

Letter = tuple[str, int]


class GroupWord:
    """A freely reduced word; letters are (generator, +1 or -1)."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        out: list[Letter] = []
        for g, e in letters:
            if e not in (1, -1):
                raise InvalidInput("letters carry exponent +1 or -1")
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        self.letters = tuple(out)

    @classmethod
    def gen(cls, name: str) -> GroupWord:
        return cls(((name, 1),))

    def __mul__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> GroupWord:
        return GroupWord((g, -e) for g, e in reversed(self.letters))

    def __pow__(self, n: int) -> GroupWord:
        base = self if n >= 0 else self.inverse()
        return GroupWord(base.letters * abs(n))

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def substitute(self, images: Mapping[str, GroupWord]) -> GroupWord:
        out: list[Letter] = []
        for g, e in self.letters:
            if g in images:
                out.extend((images[g] if e == 1 else images[g].inverse()).letters)
            else:
                out.append((g, e))
        return GroupWord(out)

    def __repr__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^-1" for g, e in self.letters)


IDENTITY = GroupWord()


class GroupRingElement:
    """A finite integer combination of group words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[GroupWord, int] | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def of(cls, word: GroupWord, coeff: int = 1) -> GroupRingElement:
        return cls({word: coeff})

    def __add__(self, other: GroupRingElement) -> GroupRingElement:
        acc = Counter(self.terms)
        for w, c in other.terms.items():
            acc[w] += c
        return GroupRingElement(acc)

    def __neg__(self) -> GroupRingElement:
        return GroupRingElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: GroupRingElement) -> GroupRingElement:
        return self + (-other)

    def left(self, word: GroupWord) -> GroupRingElement:
        """word * self."""
        acc = Counter()
        for w, c in self.terms.items():
            acc[word * w] += c
        return GroupRingElement(acc)

    def substitute(self, images: Mapping[str, GroupWord]) -> GroupRingElement:
        acc = Counter()
        for w, c in self.terms.items():
            acc[w.substitute(images)] += c
        return GroupRingElement(acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*({w})" for w, c in self.terms.items())


def fox_derivative(word: GroupWord, gen: str) -> GroupRingElement:
    """Left Fox derivative: d(uv) = du + u dv, d(x^-1) = -x^-1."""
    acc = Counter()
    prefix: list[Letter] = []
    for g, e in word.letters:
        if g == gen:
            if e == 1:
                acc[GroupWord(prefix)] += 1
            else:
                acc[GroupWord(prefix + [(g, e)])] -= 1
        prefix.append((g, e))
    return GroupRingElement(acc)


# ---------------------------------------------------------------------------
# the presentation of the zero-surgery on T(2, 2k+1)

A, B = GroupWord.gen("a"), GroupWord.gen("b")


def relator(k: int) -> GroupWord:
    return A ** (2 * k + 1) * B ** 2


def longitude(k: int) -> GroupWord:
    akb = A ** k * B
    return akb ** (2 * k + 1) * A ** (2 * k + 1) * akb ** (2 * k + 1)


def meridian(k: int) -> GroupWord:
    return (A ** k * B).inverse()


def presentation_identity(k: int) -> GroupWord:
    """The identity of the presentation, a word in a, b and relator symbols r1, r2."""
    mu = meridian(k)
    r1, r2 = GroupWord.gen("r1"), GroupWord.gen("r2")
    x = mu ** (-2 * k) * A ** k
    return mu * r2 * mu.inverse() * r2.inverse() * mu ** (-2 * k - 1) * r1 * mu ** (2 * k + 1) * x * r1.inverse() * x.inverse()


def relator_images(k: int) -> dict[str, GroupWord]:
    return {"r1": relator(k), "r2": longitude(k)}


@dataclass
class ChainData:
    """Group-ring matrices of the cellular chain complex and of the duality map."""

    k: int
    d1: list[list[GroupRingElement]]
    d2: list[list[GroupRingElement]]
    d3: list[list[GroupRingElement]]
    phi: list[list[GroupRingElement]]
    d3_from_identity: list[list[GroupRingElement]]


def build_complex(k: int) -> ChainData:
    if k < 1:
        raise InvalidInput("k must be positive")
    one = GroupRingElement.of(IDENTITY)
    ga, gb = GroupRingElement.of(A), GroupRingElement.of(B)
    r, lam, mu = relator(k), longitude(k), meridian(k)
    d1 = [[ga - one], [gb - one]]
    d2 = [[fox_derivative(r, "a"), fox_derivative(r, "b")], [fox_derivative(lam, "a"), fox_derivative(lam, "b")]]
    x = mu ** (-2 * k) * A ** k
    d3 = [[GroupRingElement.of(mu ** (-2 * k - 1)) - GroupRingElement.of(x), GroupRingElement.of(mu) - one]]
    ident = presentation_identity(k)
    images = relator_images(k)
    d3_id = [[fox_derivative(ident, "r1").substitute(images), fox_derivative(ident, "r2").substitute(images)]]
    mu_up, mu_down = mu ** (2 * k + 1), mu ** (-2 * k - 1)
    back = A ** (-k) * mu ** (2 * k)
    phi = [
        [
            fox_derivative(mu_down, g).left(mu_up) - fox_derivative(x, g).left(back)
            for g in ("a", "b")
        ],
        [fox_derivative(mu, g).left(mu.inverse()) for g in ("a", "b")],
    ]
    return ChainData(k, d1, d2, d3, phi, d3_id)


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Metabelian:
    """rho_theta = alpha(2, chi_theta) on G0 for T(2, 2k+1)."""

    k: int
    theta: int

    def __post_init__(self):
        if self.k < 1 or not 0 <= self.theta <= 2 * self.k:
            raise InvalidInput("metabelian representation needs k >= 1 and 0 <= theta <= 2k")


@dataclass(frozen=True)
class Abelian1:
    """The abelianization a -> t^2, b -> t^(-2k-1), so mu -> t."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput("k must be positive")


@dataclass(frozen=True)
class General:
    """gamma(n, chi) images of a and b: each a pair (j, character values mod m).

    A generator (t^j, v) maps to C^j diag(xi_m^chi(v), ..., xi_m^chi(t^(n-1) v)),
    C the companion matrix of t^n.
    """

    k: int
    n: int
    m: int
    images: tuple[tuple[str, int, tuple[int, ...]], ...]

    def __post_init__(self):
        names = {g for g, _, _ in self.images}
        if names != {"a", "b"}:
            raise InvalidInput("images for exactly a and b are required")
        for _, _, chars in self.images:
            if len(chars) != self.n:
                raise InvalidInput("character vector length must equal n")


RepSpec = Metabelian | Abelian1 | General


def as_general(spec: RepSpec) -> General:
    if isinstance(spec, General):
        return spec
    k = spec.k
    if isinstance(spec, Abelian1):
        return General(k, 1, 1, (("a", 2, (0,)), ("b", -2 * k - 1, (0,))))
    th = spec.theta
    m = 2 * k + 1
    return General(k, 2, m, (("a", 2, (-th % m, th % m)), ("b", -2 * k - 1, ((-k * th) % m, (k * th) % m))))


def rep_field(spec: RepSpec) -> FieldContext:
    g = as_general(spec)
    return field(conductor_for(g.m, 2 * (2 * g.k + 1)))


def _companion_power(ctx: FieldContext, n: int, j: int) -> LaurentMatrix:
    t = LaurentPoly.t(ctx)
    C = LaurentMatrix.zeros(ctx, n, n)
    Cinv = LaurentMatrix.zeros(ctx, n, n)
    if n == 1:
        C.entries[0][0] = t
        Cinv.entries[0][0] = LaurentPoly.monomial(ctx, ctx.one, -1)
    else:
        for i in range(n - 1):
            C.entries[i][i + 1] = LaurentPoly.one(ctx)
            Cinv.entries[i + 1][i] = LaurentPoly.one(ctx)
        C.entries[n - 1][0] = t
        Cinv.entries[0][n - 1] = LaurentPoly.monomial(ctx, ctx.one, -1)
    base = C if j >= 0 else Cinv
    out = LaurentMatrix.identity(ctx, n)
    for _ in range(abs(j)):
        out = out * base
    return out


class Representation:
    """A representation of the free group on a, b into unitary Laurent matrices.

    Word images are memoized, so evaluating every Fox term of one long word
    costs one multiplication per letter.
    """

    def __init__(self, spec: RepSpec, ctx: FieldContext | None = None):
        self.spec = spec
        g = as_general(spec)
        self.general = g
        self.ctx = ctx or rep_field(spec)
        self.size = g.n
        ctx = self.ctx
        root_step = ctx.N // g.m
        self.letter_images: dict[Letter, LaurentMatrix] = {}
        for name, j, chars in g.images:
            diag = LaurentMatrix.diagonal(ctx, [LaurentPoly.constant(ctx, ctx.zeta(root_step * c)) for c in chars])
            M = _companion_power(ctx, g.n, j) * diag
            self.letter_images[(name, 1)] = M
            self.letter_images[(name, -1)] = M.sharp_transpose()
        ident = LaurentMatrix.identity(ctx, self.size)
        for M_pos in (self.letter_images[("a", 1)], self.letter_images[("b", 1)]):
            if M_pos * M_pos.sharp_transpose() != ident:
                raise InvalidInput("representation images must be unitary")
        self._cache: dict[tuple, LaurentMatrix] = {(): ident}

    def word(self, w: GroupWord) -> LaurentMatrix:
        letters = w.letters
        cache = self._cache
        if letters in cache:
            return cache[letters]
        n = len(letters)
        start = n
        while start > 0 and letters[:start] not in cache:
            start -= 1
        M = cache[letters[:start]]
        for i in range(start, n):
            M = M * self.letter_images[letters[i]]
            cache[letters[: i + 1]] = M
        return M

    def element(self, x: GroupRingElement) -> LaurentMatrix:
        out = LaurentMatrix.zeros(self.ctx, self.size, self.size)
        for w, c in x.terms.items():
            out = out + self.word(w).scale(self.ctx(c))
        return out

    def matrix(self, rows: Sequence[Sequence[GroupRingElement]]) -> LaurentMatrix:
        return block_matrix(self.ctx, [[self.element(x) for x in row] for row in rows])


def apply_rep(spec_or_rep, item):
    """Image of a word, a group-ring element or a matrix of them under a representation."""
    rep = spec_or_rep if isinstance(spec_or_rep, Representation) else Representation(spec_or_rep)
    if isinstance(item, GroupWord):
        return rep.word(item)
    if isinstance(item, GroupRingElement):
        return rep.element(item)
    return rep.matrix(item)


# ---------------------------------------------------------------------------
# twisted cochains, cohomology and the pairing


@dataclass
class TwistedComplex:
    rep: Representation
    D1: LaurentMatrix
    D2: LaurentMatrix
    D3: LaurentMatrix
    Phi: LaurentMatrix

    def boundaries_compose_to_zero(self) -> bool:
        ctx = self.rep.ctx
        z32 = self.D3 * self.D2
        z21 = self.D2 * self.D1
        return z32 == LaurentMatrix.zeros(ctx, z32.rows, z32.cols) and z21 == LaurentMatrix.zeros(ctx, z21.rows, z21.cols)


def twisted_complex(spec: RepSpec) -> TwistedComplex:
    rep = Representation(spec)
    data = build_complex(as_general(spec).k)
    return TwistedComplex(rep, rep.matrix(data.d1), rep.matrix(data.d2), rep.matrix(data.d3), rep.matrix(data.phi))


@dataclass
class CohomologyPresentation:
    """H^2 as a sum of cyclic modules Lambda/(orders[j]) generated by cocycles."""

    complex: TwistedComplex
    orders: list[LaurentPoly]
    generators: list[list[LaurentPoly]]
    lifts: list[list[LaurentPoly]]

    @property
    def order(self) -> LaurentPoly:
        out = LaurentPoly.one(self.complex.rep.ctx)
        for d in self.orders:
            out = out * d
        return out


def _row_times(row: Sequence[LaurentPoly], M: LaurentMatrix) -> list[LaurentPoly]:
    return (LaurentMatrix(M.ctx, [list(row)]) * M).entries[0]


def twisted_cohomology(spec: RepSpec, cx: TwistedComplex | None = None) -> CohomologyPresentation:
    cx = cx or twisted_complex(spec)
    ctx = cx.rep.ctx
    D2c = cx.D2.sharp_transpose()
    D3c = -cx.D3.sharp_transpose()
    snf3 = smith_normal_form(D3c)
    rank3 = snf3.rank
    size = D3c.rows
    kernel = [snf3.U_inv.entries[i] for i in range(rank3, size)]
    m = len(kernel)
    if m == 0:
        return CohomologyPresentation(cx, [], [], [])
    coords = (D2c * snf3.U).submatrix(range(D2c.rows), range(rank3, size))
    snf2 = smith_normal_form(coords)
    diag = snf2.diagonal
    if len(diag) < m or any(d.is_zero() for d in diag[:m]):
        raise NonTorsion("second twisted cohomology is not torsion")
    K = LaurentMatrix(ctx, kernel)
    orders, gens, lifts = [], [], []
    for j in range(m):
        if diag[j].is_unit():
            continue
        coord_row = snf2.V.entries[j]
        gens.append(_row_times(coord_row, K))
        lifts.append(snf2.U_inv.entries[j])
        orders.append(diag[j])
    pres = CohomologyPresentation(cx, orders, gens, lifts)
    for g, z, d in zip(pres.generators, pres.lifts, pres.orders):
        if _row_times(z, D2c) != [x * d for x in g]:
            raise UnsolvableLift("cochain lift does not solve Z d2 = s w")
    return pres


def _pairing_value(cx: TwistedComplex, v, z, s) -> Fraction_:
    """(1/s) (v Phi z^#T)^#T for cochains v, z."""
    ctx = cx.rep.ctx
    row = _row_times(v, cx.Phi)
    value = LaurentPoly(ctx)
    for a, b in zip(row, z):
        value = value + a * b.sharp()
    return Fraction_(value.sharp(), s)


def blanchfield_gram(pres: CohomologyPresentation) -> list[list[Fraction_]]:
    """Gram matrix lambda(g_i, g_j) = Bl(g_j, g_i), linear in the first slot."""
    cx = pres.complex
    n = len(pres.orders)
    return [
        [_pairing_value(cx, pres.generators[j], pres.lifts[i], pres.orders[i]) for j in range(n)]
        for i in range(n)
    ]


def blanchfield(spec: RepSpec) -> LinkingForm:
    pres = twisted_cohomology(spec)
    ctx = pres.complex.rep.ctx
    gram = blanchfield_gram(pres)
    if not gram_is_hermitian(gram):
        raise NotHermitian("chain-level pairing is not Hermitian")
    return split_gram(ctx, Mode.COMPLEX, pres.orders, gram)


# ---------------------------------------------------------------------------
# closed forms for the metabelian torus-knot pairing


def _xi(ctx: FieldContext, k: int, power: int):
    return ctx.zeta((ctx.N // (2 * k + 1)) * (power % (2 * k + 1)))


def twisted_alexander(k: int, theta: int, ctx: FieldContext | None = None) -> LaurentPoly:
    """Delta_theta = prod_{1 <= i <= k, i != theta} R_{xi^i}."""
    ctx = ctx or rep_field(Metabelian(k, theta))
    out = LaurentPoly.one(ctx)
    for i in range(1, k + 1):
        if i != theta:
            out = out * basic_poly(Mode.REAL, RootOfUnity(i, 2 * k + 1), ctx)
    return out


def closed_form_value(k: int, theta: int, ctx: FieldContext | None = None) -> Fraction_:
    """F(t) = G(t) / (t^-k P_2k(t)) with G = 1/2 (t^(2k+1) xi^(k theta) - t^(k+1) - t^k + xi^((k+1) theta)) (t^(-2k-1) + 1)."""
    if not 1 <= theta <= k:
        raise InvalidInput("closed form needs 1 <= theta <= k")
    ctx = ctx or rep_field(Metabelian(k, theta))
    return Fraction_(_closed_form_numerator(ctx, k, theta), cyclotomic_sum(ctx, 2 * k).shift(-k))


def _closed_form_numerator(ctx, k, theta) -> LaurentPoly:
    half = ctx(1) / 2
    first = LaurentPoly(
        ctx,
        {
            2 * k + 1: _xi(ctx, k, k * theta),
            k + 1: -ctx.one,
            k: -ctx.one,
            0: _xi(ctx, k, (k + 1) * theta),
        },
    )
    return (first * LaurentPoly(ctx, {-2 * k - 1: ctx.one, 0: ctx.one})).scale(half)


def closed_form_pairing(k: int, theta: int, ctx: FieldContext | None = None) -> CyclicPairing:
    value = closed_form_value(k, theta, ctx)
    return CyclicPairing(value.den, value.num, Mode.COMPLEX)


def g_sign(k: int, theta: int, e: int, ctx: FieldContext | None = None) -> int:
    """Sign of (-1)^(theta+1) G(xi^e), certified through real_sign."""
    ctx = ctx or rep_field(Metabelian(k, theta))
    value = _closed_form_numerator(ctx, k, theta).evaluate(_xi(ctx, k, e))
    return (-1) ** (theta + 1) * real_sign(value)


def expected_g_sign(k: int, theta: int, e: int) -> int:
    """The case table for (-1)^(theta+1) G(xi^e), 1 <= e <= k, e != theta."""
    if (theta + e) % 2:
        return -1
    return 1 if e < theta else -1


def classify_torus_metabelian(k: int, theta: int) -> Decomposition:
    """lambda_even + lambda_odd: the decomposition predicted by the sign analysis."""
    if not 1 <= theta <= k:
        raise InvalidInput("closed form needs 1 <= theta <= k")
    m = 2 * k + 1
    forms = []
    for e in range(1, k + 1):
        if e == theta:
            continue
        if (theta + e) % 2 or e < theta:
            sign = 1
        else:
            sign = -1
        forms.append(EForm(1, 0, sign, RootOfUnity(e, m)))
        forms.append(EForm(1, 0, -sign, RootOfUnity(-e, m)))
    return Decomposition(Mode.COMPLEX, forms)


# ---------------------------------------------------------------------------
# knot expressions, satellite assembly and the character sweep


@dataclass(frozen=True)
class Torus2:
    q: int

    def __post_init__(self):
        if self.q < 3 or self.q % 2 == 0:
            raise InvalidInput("T(2, q) needs odd q >= 3")


@dataclass(frozen=True)
class Cable2d:
    """The (2, d)-cable of a torus-knot companion."""

    d: int
    child: Torus2

    def __post_init__(self):
        if self.d < 3 or self.d % 2 == 0:
            raise InvalidInput("cable parameter d must be odd and at least 3")
        if not isinstance(self.child, Torus2):
            raise InvalidInput("only T(2, q) companions are supported")


@dataclass(frozen=True)
class Sum:
    children: tuple

    def __init__(self, children: Iterable):
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Neg:
    child: object


KnotExpr = Torus2 | Cable2d | Sum | Neg


def hkl_knot() -> KnotExpr:
    """T(2,3;2,13) # T(2,15) # -T(2,3;2,15) # -T(2,13)."""
    return Sum([Cable2d(13, Torus2(3)), Torus2(15), Neg(Cable2d(15, Torus2(3))), Neg(Torus2(13))])


def describe(expr: KnotExpr) -> str:
    if isinstance(expr, Torus2):
        return f"T(2,{expr.q})"
    if isinstance(expr, Cable2d):
        return f"T(2,{expr.child.q};2,{expr.d})"
    if isinstance(expr, Neg):
        return "-" + describe(expr.child)
    return " # ".join(describe(c) for c in expr.children)


def character_leaves(expr: KnotExpr) -> list[int]:
    """Orders of the first homology of the double branched cover of each summand, in order."""
    if isinstance(expr, Torus2):
        return [expr.q]
    if isinstance(expr, Cable2d):
        return [expr.d]
    if isinstance(expr, Neg):
        return character_leaves(expr.child)
    return [q for c in expr.children for q in character_leaves(c)]


def _theta_for(order: int, value: int, ell: int) -> int:
    """theta in Z/order with xi_order^theta = xi_ell^value, folded by theta ~ -theta."""
    value %= ell
    if value == 0:
        return 0
    if order % ell:
        raise CharacterOrderMismatch(f"no nontrivial Z/{ell} character on Z/{order}")
    theta = value * (order // ell) % order
    return min(theta, order - theta)


# leaf tasks are hashable tuples so they can be cached and farmed out to worker processes
def _metabelian_task(order: int, theta: int) -> tuple:
    return ("metabelian", (order - 1) // 2, theta)


def _cable_task(companion_q: int, eta: RootOfUnity) -> tuple:
    return ("untwisted-shift", (companion_q - 1) // 2, eta.num, eta.den)


@lru_cache(maxsize=None)
def untwisted_blanchfield(k: int) -> LinkingForm:
    """The Blanchfield form of T(2, 2k+1), through the abelian representation."""
    return blanchfield(Abelian1(k))


def compute_task(task: tuple) -> WittClass:
    kind = task[0]
    if kind == "metabelian":
        _, k, theta = task
        return witt_normal_form(classify(blanchfield(Metabelian(k, theta))))
    _, k, num, den = task
    eta = RootOfUnity(num, den)
    base = untwisted_blanchfield(k)
    ctx = field(conductor_for(base.ctx.N, eta.den))
    return witt_normal_form(classify(substitute_form(base, eta, 1, ctx)))


_TASK_CACHE: dict[tuple, WittClass] = {}


def cached_task(task: tuple) -> WittClass:
    if task not in _TASK_CACHE:
        _TASK_CACHE[task] = compute_task(task)
    return _TASK_CACHE[task]


def _plan(expr: KnotExpr, values: list[int], ell: int, sign: int, out: list[tuple[int, tuple]]) -> None:
    if isinstance(expr, Neg):
        _plan(expr.child, values, ell, -sign, out)
    elif isinstance(expr, Sum):
        for c in expr.children:
            _plan(c, values, ell, sign, out)
    elif isinstance(expr, Torus2):
        out.append((sign, _metabelian_task(expr.q, _theta_for(expr.q, values.pop(0), ell))))
    else:
        value = values.pop(0)
        out.append((sign, _metabelian_task(expr.d, _theta_for(expr.d, value, ell))))
        for s in (1, -1):
            out.append((sign, _cable_task(expr.child.q, RootOfUnity(s * value, ell))))


def witt_plan(expr: KnotExpr, characters: Sequence[int], ell: int) -> list[tuple[int, tuple]]:
    """Signed leaf tasks whose Witt classes add up to the class of the twisted form."""
    if ell < 3 or any(ell % p == 0 for p in range(2, int(ell ** 0.5) + 1)):
        raise InvalidInput("ell must be an odd prime")
    values = list(characters)
    if len(values) != len(character_leaves(expr)):
        raise InvalidInput("one character value per summand is required")
    out: list[tuple[int, tuple]] = []
    _plan(expr, values, ell, 1, out)
    return out


def assemble_witt(expr: KnotExpr, characters: Sequence[int], ell: int, results: Mapping[tuple, WittClass] | None = None) -> WittClass:
    total = WittClass(Mode.COMPLEX)
    for sign, task in witt_plan(expr, characters, ell):
        leaf = results[task] if results is not None else cached_task(task)
        total = total + (leaf if sign > 0 else -leaf)
    return total


def character_classes(expr: KnotExpr, ell: int) -> list[tuple[int, ...]]:
    """Characters to Z/ell, one representative of each class {chi, -chi}, sorted."""
    ranges = [range(ell) if q % ell == 0 else range(1) for q in character_leaves(expr)]
    seen = []
    for chi in _product(ranges):
        neg = tuple((-c) % ell for c in chi)
        if chi <= neg:
            seen.append(chi)
    return sorted(seen)


def _product(ranges):
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _product(ranges[1:]):
            yield (head,) + tail


OBSTRUCTION_NOTE = (
    "If K were slice, some metabolizer P of the linking form on H_1 of the double branched cover "
    "would be such that every character to Z/ell vanishing on P gives a metabolic twisted form. "
    "The ell-primary part of that group is (Z/ell)^2 and a metabolizer meets it in a subgroup of order ell, "
    "so the characters vanishing on P include a nontrivial one. Since no nontrivial character gives a "
    "metabolic form, no metabolizer passes the test and K is not slice."
)


def hkl_sweep(ell: int, jobs: int = 1, expr: KnotExpr | None = None) -> dict:
    """Metabolicity of the twisted Blanchfield form for every character class to Z/ell."""
    expr = expr or hkl_knot()
    classes = character_classes(expr, ell)
    plans = {chi: witt_plan(expr, chi, ell) for chi in classes}
    tasks = sorted({task for plan in plans.values() for _, task in plan})
    results = _run_tasks(tasks, jobs)
    rows = []
    for chi in classes:
        w = assemble_witt(expr, chi, ell, results)
        rows.append(
            {
                "characters": list(chi),
                "trivial": not any(chi),
                "metabolic": w.is_zero(),
                "witt_class": [{"root": {"num": r.num, "den": r.den}, "count": v} for r, v in w.counts],
            }
        )
    nontrivial = [r for r in rows if not r["trivial"]]
    trivial = [r for r in rows if r["trivial"]]
    return {
        "ell": ell,
        "knot": describe(expr),
        "classes": rows,
        "nontrivial_classes": len(nontrivial),
        "nontrivial_metabolic": sum(r["metabolic"] for r in nontrivial),
        "trivial_metabolic": all(r["metabolic"] for r in trivial),
        "only_trivial_metabolic": all(r["metabolic"] for r in trivial) and not any(r["metabolic"] for r in nontrivial),
        "note": OBSTRUCTION_NOTE,
    }


def _run_tasks(tasks: Sequence[tuple], jobs: int) -> dict[tuple, WittClass]:
    if jobs <= 1 or len(tasks) <= 1:
        return {task: cached_task(task) for task in tasks}
    from concurrent.futures import ProcessPoolExecutor

    pending = [t for t in tasks if t not in _TASK_CACHE]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for task, value in zip(pending, pool.map(compute_task, pending)):
            _TASK_CACHE[task] = value
    return {task: _TASK_CACHE[task] for task in tasks}
