import random

import pytest

from linkform_fixtures import random_decomposition, realize_decomposition, representability_fixture, trefoil_form
from linkform.errors import InvalidInput, NotHermitian, SingularMatrix, UnfactorableAnnihilator
from linkform.exactnum import RootOfUnity, embed_root, field
from linkform.forms import (
    CyclicPairing,
    Decomposition,
    EForm,
    FForm,
    Fraction_,
    LinkingForm,
    PrimaryKey,
    Verdict,
    classify,
    classify_primary,
    crt_split,
    direct_sum,
    from_matrix,
    gram_is_hermitian,
    is_nonsingular,
    isometric,
    negate,
    positive_linear,
    reference_pairing,
    split_gram,
    substitute_form,
)
from linkform.laurent import LaurentPoly, Mode, basic_poly, linear
from linkform.plinalg import LaurentMatrix

K4 = field(4)
K12 = field(12)
K52 = field(52)

SIXTH = RootOfUnity(1, 6)


def one(ctx):
    return LaurentPoly.one(ctx)


def trefoil_poly(ctx=K12):
    return LaurentPoly(ctx, {1: ctx.one, 0: -ctx.one, -1: ctx.one})


class TestCrtSplit:
    def test_two_complex_pieces(self):
        f = linear(K12, K12.zeta(2)) * linear(K12, K12.zeta(-2))
        pieces = crt_split(CyclicPairing(f, one(K12), Mode.COMPLEX))
        assert [key.root for key, _ in pieces] == [SIXTH, SIXTH.conj()]
        product = one(K12)
        for _, c in pieces:
            product = product * c.f
        assert product == f

    def test_real_basic_is_primary(self):
        pieces = crt_split(CyclicPairing(trefoil_poly(), one(K12), Mode.REAL))
        assert len(pieces) == 1 and pieces[0][1].f == trefoil_poly()

    def test_real_plus_minus_one(self):
        f = linear(K12, K12.one) ** 2 * linear(K12, -K12.one) ** 2
        pieces = crt_split(CyclicPairing(f, one(K12), Mode.REAL))
        assert [key.root for key, _ in pieces] == [RootOfUnity(0), RootOfUnity(1, 2)]

    def test_unfactorable(self):
        f = LaurentPoly(K4, {1: K4.one, 0: K4(-3)})
        with pytest.raises(UnfactorableAnnihilator):
            crt_split(CyclicPairing(f, one(K4), Mode.COMPLEX))


class TestClassifyPrimary:
    def test_trefoil(self):
        c = CyclicPairing(trefoil_poly(), one(K12), Mode.REAL)
        assert classify_primary(c, PrimaryKey(root=SIXTH)) == EForm(1, 0, 1, SIXTH)

    def test_zero_pairing(self):
        xi = RootOfUnity(1, 4)
        f = linear(K4, K4.i) ** 3
        c = CyclicPairing(f, f, Mode.COMPLEX)
        assert classify_primary(c, PrimaryKey(root=xi)) == EForm(3, 3, 1, xi)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_residue_criterion(self, sign):
        xi = RootOfUnity(1, 13)
        f = linear(K52, embed_root(K52, xi))
        h = positive_linear(K52, xi).scale(K52(sign))
        assert classify_primary(CyclicPairing(f, h, Mode.COMPLEX), PrimaryKey(root=xi)) == EForm(1, 0, sign, xi)

    def test_reference_pairings_round_trip(self):
        for mode in (Mode.REAL, Mode.COMPLEX):
            for den in (1, 2, 3, 4, 6, 12):
                for num in range(den):
                    xi = RootOfUnity(num, den)
                    if mode is Mode.REAL and xi.imag_sign() < 0:
                        continue
                    for n in range(1, 5):
                        for k in range(n):
                            if mode is Mode.REAL and xi.is_real() and (n - k) % 2:
                                continue
                            for eps in (1, -1):
                                form = EForm(n, k, eps, xi)
                                c = reference_pairing(K12, mode, form)
                                assert c.is_hermitian()
                                assert classify(LinkingForm(K12, mode, [c])) == Decomposition(mode, [form])


class TestClassify:
    def test_empty(self):
        assert len(classify(LinkingForm(K12, Mode.REAL))) == 0

    def test_trefoil(self):
        assert classify(trefoil_form()) == Decomposition(Mode.REAL, [EForm(1, 0, 1, SIXTH)])

    def test_trefoil_complex(self):
        d = classify(trefoil_form(Mode.COMPLEX))
        assert d == Decomposition(Mode.COMPLEX, [EForm(1, 0, 1, SIXTH), EForm(1, 0, -1, SIXTH.conj())])

    def test_negated_trefoil(self):
        assert classify(negate(trefoil_form())) == Decomposition(Mode.REAL, [EForm(1, 0, -1, SIXTH)])

    def test_off_circle(self):
        half = K4("1/2")
        f = linear(K4, half) * LaurentPoly(K4, {-1: K4.one, 0: -half})
        F = LinkingForm(K4, Mode.COMPLEX, [CyclicPairing(f, one(K4), Mode.COMPLEX)], (half,))
        d = classify(F)
        assert d == Decomposition(Mode.COMPLEX, [FForm(1, 1, 0, half)])
        assert is_nonsingular(d)


class TestFormAlgebra:
    def test_sum_with_empty(self):
        F = trefoil_form()
        assert classify(direct_sum(F, LinkingForm(K12, Mode.REAL))) == classify(F)

    def test_double_negation(self):
        F = trefoil_form()
        assert negate(negate(F)).summands[0].h == F.summands[0].h

    def test_mismatched_fields(self):
        with pytest.raises(InvalidInput):
            direct_sum(trefoil_form(), LinkingForm(K4, Mode.REAL))

    def test_real_mode_rejects_complex_coefficients(self):
        f = linear(K4, K4.i)
        with pytest.raises(InvalidInput):
            LinkingForm(K4, Mode.REAL, [CyclicPairing(f, one(K4), Mode.REAL)])

    def test_zero_annihilator(self):
        with pytest.raises(InvalidInput):
            CyclicPairing(LaurentPoly.zero(K4), one(K4))

    def test_numerator_reduced(self):
        c = CyclicPairing(trefoil_poly(), trefoil_poly() + 1, Mode.REAL)
        assert c.h == one(K12)


class TestNonsingularAndIsometry:
    def test_nonsingular(self):
        assert is_nonsingular(Decomposition(Mode.REAL, [EForm(1, 0, 1, SIXTH)]))
        assert not is_nonsingular(Decomposition(Mode.COMPLEX, [EForm(2, 1, 1, SIXTH)]))
        assert is_nonsingular(Decomposition(Mode.COMPLEX))

    def test_isometric(self):
        xi = RootOfUnity(1, 4)
        d = Decomposition(Mode.COMPLEX, [EForm(1, 0, 1, xi)])
        assert isometric(d, d) is Verdict.YES
        assert isometric(d, Decomposition(Mode.COMPLEX, [EForm(1, 0, -1, xi)])) is Verdict.NO

    def test_singular_verdicts(self):
        xi = RootOfUnity(1, 4)
        s1 = Decomposition(Mode.COMPLEX, [EForm(2, 1, 1, xi)])
        s2 = Decomposition(Mode.COMPLEX, [EForm(2, 1, -1, xi)])
        s3 = Decomposition(Mode.COMPLEX, [EForm(3, 1, 1, xi)])
        assert isometric(s1, s1) is Verdict.EQUAL_DECOMPOSITIONS_ONLY
        assert isometric(s1, s2) is Verdict.UNDETERMINED
        assert isometric(s1, s3) is Verdict.NO

    def test_modes_must_agree(self):
        with pytest.raises(InvalidInput):
            isometric(Decomposition(Mode.REAL), Decomposition(Mode.COMPLEX))


class TestFromMatrix:
    def test_one_by_one(self):
        F = from_matrix(LaurentMatrix(K12, [[trefoil_poly()]]))
        assert F.mode is Mode.REAL
        assert classify(F) == classify(trefoil_form())

    def test_diagonal(self):
        f1 = trefoil_poly()
        f2 = basic_poly(Mode.REAL, RootOfUnity(1, 4), K12).scale(K12(-1))
        F = from_matrix(LaurentMatrix.diagonal(K12, [f1, f2]))
        G = LinkingForm(K12, Mode.REAL, [CyclicPairing(f1, one(K12), Mode.REAL), CyclicPairing(f2, one(K12), Mode.REAL)])
        assert classify(F) == classify(G)

    def test_representability_fixture(self):
        xi = RootOfUnity(1, 4)
        d = classify(from_matrix(representability_fixture()))
        assert d == Decomposition(Mode.COMPLEX, [EForm(1, 0, 1, xi), EForm(1, 0, -1, xi)])

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            from_matrix(LaurentMatrix(K4, [[LaurentPoly.t(K4)]]))

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            from_matrix(LaurentMatrix.zeros(K4, 1, 1))


class TestSubstitution:
    def test_trivial_rotation(self):
        F = trefoil_form()
        G = substitute_form(F, RootOfUnity(0))
        assert G.summands[0].f == F.summands[0].f

    def test_rotated_annihilator(self):
        ctx = field(156)
        F = trefoil_form()
        G = substitute_form(F, RootOfUnity(1, 13), 1, ctx)
        z = embed_root(ctx, RootOfUnity(1, 13))
        assert G.summands[0].f == LaurentPoly(ctx, {1: z, 0: -ctx.one, -1: z.inverse()})

    def test_support_rotates_by_inverse(self):
        ctx = field(156)
        eta = RootOfUnity(1, 13)
        before = classify(trefoil_form(Mode.COMPLEX))
        after = classify(substitute_form(trefoil_form(), eta, 1, ctx))
        assert sorted(f.xi for f in after) == sorted(f.xi / eta for f in before)


class TestFractions:
    def test_canonical_classes(self):
        f = trefoil_poly()
        a = Fraction_(one(K12), f)
        b = Fraction_(f + 1, f)
        c = Fraction_(LaurentPoly.t(K12) ** 3 * f * 2 + 1, f.shift(4).scale(K12(5)))
        assert a == b
        assert c == Fraction_(LaurentPoly.monomial(K12, K12("1/5"), -4), f)

    def test_cancellation(self):
        f = trefoil_poly()
        g = linear(K12, K12.one)
        assert Fraction_(g, g * f) == Fraction_(one(K12), f)
        assert Fraction_(f, f).is_zero()

    def test_sum_and_sharp(self):
        f = trefoil_poly()
        x = Fraction_(one(K12), f)
        assert (x + x) == Fraction_(LaurentPoly.constant(K12, K12(2)), f)
        assert x.sharp() == x
        assert (x - x).is_zero()


class TestSplitGram:
    def test_hyperbolic_plane(self):
        xi = RootOfUnity(1, 4)
        ctx = K4
        B = basic_poly(Mode.COMPLEX, xi, ctx)
        r = positive_linear(ctx, xi)
        off = Fraction_(r, B)
        zero = Fraction_(LaurentPoly.zero(ctx), one(ctx))
        gram = [[zero, off], [off.sharp(), zero]]
        assert gram_is_hermitian(gram)
        F = split_gram(ctx, Mode.COMPLEX, [B, B], gram)
        assert classify(F) == Decomposition(Mode.COMPLEX, [EForm(1, 0, 1, xi), EForm(1, 0, -1, xi)])

    def test_round_trip_random(self):
        rng = random.Random(8)
        for _ in range(20):
            mode = rng.choice([Mode.REAL, Mode.COMPLEX])
            d = random_decomposition(rng, mode)
            F = realize_decomposition(d)
            gram = [[Fraction_(c.h, c.f) if i == j else Fraction_(LaurentPoly.zero(F.ctx), one(F.ctx))
                     for j in range(len(F.summands))] for i, c in enumerate(F.summands)]
            G = split_gram(F.ctx, mode, [c.f for c in F.summands], gram)
            assert classify(G) == d
