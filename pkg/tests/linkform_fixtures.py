"""Fixture builders shared by the unit tests and the acceptance suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from linkform.exactnum import RootOfUnity, conductor_for, field
from linkform.forms import CyclicPairing, Decomposition, EForm, LinkingForm, reference_pairing
from linkform.laurent import LaurentPoly, Mode, basic_poly
from linkform.plinalg import LaurentMatrix


def trefoil_form(mode: Mode = Mode.REAL) -> LinkingForm:
    ctx = field(12)
    f = LaurentPoly(ctx, {-1: ctx.one, 0: -ctx.one, 1: ctx.one})
    return LinkingForm(ctx, mode, [CyclicPairing(f, LaurentPoly.one(ctx), mode)])


def representability_fixture() -> LaurentMatrix:
    """B = (t - xi) A with xi = i and (a, b, c, d) = (2, 1, 1, -2i), so that ab = -d conj(c xi).

    A = [[a t^-1 - conj(a xi), d t^-1 + c], [-conj(c xi) t^-1 - conj(d xi), b t^-1 - conj(b xi)]]
    has a unit determinant, and B is Hermitian with Smith form diag(t - i, t - i).
    """
    ctx = field(4)
    xi = ctx.i
    a, b, c, d = ctx(2), ctx(1), ctx(1), -2 * ctx.i

    def lin(coeff_inv, const):
        return LaurentPoly(ctx, {-1: coeff_inv, 0: const})

    A = [
        [lin(a, -(a * xi).conj()), lin(d, c)],
        [lin(-(c * xi).conj(), -(d * xi).conj()), lin(b, -(b * xi).conj())],
    ]
    factor = LaurentPoly.t(ctx) - LaurentPoly.constant(ctx, xi)
    return LaurentMatrix(ctx, [[factor * e for e in row] for row in A])


# ---------------------------------------------------------------------------
# diagonal matrices with entries built from real basic polynomials


def symmetric_basic(ctx, root: RootOfUnity) -> LaurentPoly:
    """A #-symmetric multiple of the real basic polynomial at root (squared at +-1)."""
    B = basic_poly(Mode.REAL, root, ctx)
    if not root.is_real():
        return B
    # (t - 1)^2 t^-1 = -(t-1)(t^-1-1) and (t + 1)^2 t^-1 are symmetric
    return B * B * LaurentPoly.monomial(ctx, ctx.one, -1)


def real_diagonal_fixtures(order: int = 12, max_factors: int = 2, sizes=(1, 2)):
    """Every diagonal matrix whose entries are +-(product of symmetric basic polynomials).

    Roots run over the closed upper half of the order-th roots of unity.  The
    family is enumerated exhaustively for 1x1 matrices; 2x2 matrices pair
    single-factor entries.
    """
    ctx = field(conductor_for(order))
    roots = [RootOfUnity(j, order) for j in range(order // 2 + 1)]
    singles = [symmetric_basic(ctx, r) for r in roots]
    products = []
    for count in range(1, max_factors + 1):
        for combo in itertools.combinations_with_replacement(range(len(roots)), count):
            p = LaurentPoly.one(ctx)
            for j in combo:
                p = p * singles[j]
            products.append(p)
    signed = [p.scale(ctx(s)) for p in products for s in (1, -1)]
    out = []
    if 1 in sizes:
        out.extend(LaurentMatrix.diagonal(ctx, [p]) for p in signed)
    if 2 in sizes:
        signed_singles = [p.scale(ctx(s)) for p in singles for s in (1, -1)]
        for p, q in itertools.combinations_with_replacement(signed_singles, 2):
            out.append(LaurentMatrix.diagonal(ctx, [p, q]))
    return out


def congruence_scramble(A: LaurentMatrix, rng: random.Random, complex_entries: bool) -> LaurentMatrix:
    """P^# A P for a random elementary unimodular P."""
    ctx = A.ctx
    n = A.rows
    if n < 2:
        return A
    P = LaurentMatrix.identity(ctx, n)
    for _ in range(2):
        i, j = rng.sample(range(n), 2)
        coeff = ctx(rng.randint(-1, 1))
        if complex_entries:
            coeff = coeff + ctx.i * rng.randint(-1, 1)
        E = LaurentMatrix.identity(ctx, n)
        E.entries[i][j] = LaurentPoly(ctx, {rng.randint(-1, 1): coeff})
        P = P * E
    return P.sharp_transpose() * A * P


def complex_entry(ctx, rng: random.Random, order: int) -> LaurentPoly:
    """+-(t - z^a)(t - z^b) z^(-(a+b)/2) t^-1 products, #-symmetric, with roots z^a on the circle."""
    t = LaurentPoly.t(ctx)
    p = LaurentPoly.constant(ctx, ctx(rng.choice([1, -1])))
    step = ctx.N // order
    for _ in range(rng.randint(1, 2)):
        a = rng.randrange(order)
        b = rng.choice([x for x in range(order) if (a + x) % 2 == 0])
        lin_a = t - LaurentPoly.constant(ctx, ctx.zeta(step * a))
        lin_b = t - LaurentPoly.constant(ctx, ctx.zeta(step * b))
        p = p * lin_a * lin_b * LaurentPoly.monomial(ctx, ctx.zeta(-step * ((a + b) // 2)), -1)
    return p


def random_hermitian_fixture(rng: random.Random, order: int = 12) -> tuple[Mode, LaurentMatrix]:
    ctx = field(conductor_for(order))
    complex_mode = rng.random() < 0.6
    size = rng.choice([1, 2, 2, 3])
    if complex_mode:
        entries = [complex_entry(ctx, rng, order) for _ in range(size)]
    else:
        roots = [RootOfUnity(j, order) for j in range(order // 2 + 1)]
        entries = []
        for _ in range(size):
            p = LaurentPoly.constant(ctx, ctx(rng.choice([1, -1])))
            for _ in range(rng.randint(1, 2)):
                p = p * symmetric_basic(ctx, rng.choice(roots))
            entries.append(p)
    A = congruence_scramble(LaurentMatrix.diagonal(ctx, entries), rng, complex_mode)
    return (Mode.COMPLEX if complex_mode else Mode.REAL), A


# ---------------------------------------------------------------------------
# random decompositions


ROOT_ORDERS = (1, 2, 3, 4, 5, 6, 8, 12)


def random_root(rng: random.Random, mode: Mode) -> RootOfUnity:
    den = rng.choice(ROOT_ORDERS)
    num = rng.randrange(den)
    if mode is Mode.REAL and Fraction(num, den) > Fraction(1, 2):
        num = den - num
    return RootOfUnity(num, den)


def random_basic_form(rng: random.Random, mode: Mode, max_n: int = 3) -> EForm:
    xi = random_root(rng, mode)
    n = rng.randint(1, max_n)
    if mode is Mode.REAL and xi.is_real() and n % 2:
        n += 1
    return EForm(n, 0, rng.choice([1, -1]), xi)


def random_decomposition(rng: random.Random, mode: Mode, size: int | None = None) -> Decomposition:
    size = rng.randint(1, 3) if size is None else size
    return Decomposition(mode, [random_basic_form(rng, mode) for _ in range(size)])


def random_metabolic(rng: random.Random, mode: Mode) -> Decomposition:
    """Either a hyperbolic pair of odd-length forms or a single even-length form."""
    xi = random_root(rng, mode)
    if rng.random() < 0.5 and not (mode is Mode.REAL and xi.is_real()):
        n = rng.choice([1, 3])
        return Decomposition(mode, [EForm(n, 0, 1, xi), EForm(n, 0, -1, xi)])
    return Decomposition(mode, [EForm(2, 0, rng.choice([1, -1]), xi)])


def realize_decomposition(d: Decomposition) -> LinkingForm:
    ctx = field(conductor_for(*(f.xi.den for f in d)))
    return LinkingForm(ctx, d.mode, [reference_pairing(ctx, d.mode, f) for f in d])


def lift_form(F: LinkingForm, ctx) -> LinkingForm:
    return LinkingForm(ctx, F.mode, [CyclicPairing(c.f.lift(ctx), c.h.lift(ctx), F.mode) for c in F.summands])


def random_laurent_matrix(rng: random.Random, rows: int, cols: int, ctx=None) -> LaurentMatrix:
    ctx = ctx or field(4)
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            if rng.random() < 0.3:
                row.append(LaurentPoly.zero(ctx))
                continue
            low = rng.randint(-1, 1)
            width = rng.randint(0, 2)
            terms = {}
            for e in range(low, low + width + 1):
                c = ctx(rng.randint(-2, 2))
                if ctx.N % 4 == 0 and rng.random() < 0.3:
                    c = c + ctx.i * rng.randint(-1, 1)
                terms[e] = c
            row.append(LaurentPoly(ctx, terms))
        entries.append(row)
    return LaurentMatrix(ctx, entries, cols)
