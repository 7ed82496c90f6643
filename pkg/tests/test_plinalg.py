import random

import mpmath
import pytest

from linkform_fixtures import random_laurent_matrix, representability_fixture
from linkform.errors import InvalidInput, NotHermitian, SingularEverywhere
from linkform.exactnum import RootOfUnity, field
from linkform.laurent import LaurentPoly, divides
from linkform.plinalg import (
    LaurentMatrix,
    block_matrix,
    const_signature,
    determinant,
    hermitian_check,
    is_unimodular,
    signature_at,
    signature_one_sided,
    signature_value,
    smith_normal_form,
    unit_circle_zeros,
)

K4 = field(4)
K12 = field(12)


def const(ctx, c):
    return LaurentPoly.constant(ctx, ctx(c))


def trefoil_matrix():
    return LaurentMatrix(K12, [[LaurentPoly(K12, {1: K12.one, 0: -K12.one, -1: K12.one})]])


def check_snf_contract(A):
    res = smith_normal_form(A)
    ctx = A.ctx
    assert res.U * res.D * res.V == A
    assert res.U * res.U_inv == LaurentMatrix.identity(ctx, A.rows)
    assert res.V * res.V_inv == LaurentMatrix.identity(ctx, A.cols)
    assert is_unimodular(res.U) and is_unimodular(res.V)
    for i in range(res.D.rows):
        for j in range(res.D.cols):
            if i != j:
                assert res.D.entries[i][j].is_zero()
    diag = res.diagonal
    for a, b in zip(diag, diag[1:]):
        assert divides(a, b)
    for d in diag:
        assert d.is_zero() or d == d.normalized()
    return res


class TestDeterminant:
    def test_identity(self):
        assert determinant(LaurentMatrix.identity(K4, 3)) == LaurentPoly.one(K4)

    def test_two_by_two(self):
        t = LaurentPoly.t(K4)
        A = LaurentMatrix(K4, [[t, const(K4, 1)], [const(K4, 2), t]])
        assert determinant(A) == t * t - 2

    def test_needs_pivoting(self):
        A = LaurentMatrix(K4, [[const(K4, 0), const(K4, 1)], [const(K4, 1), const(K4, 0)]])
        assert determinant(A) == const(K4, -1)

    def test_non_square(self):
        with pytest.raises(InvalidInput):
            determinant(LaurentMatrix.zeros(K4, 2, 3))


class TestSmithNormalForm:
    def test_identity(self):
        res = check_snf_contract(LaurentMatrix.identity(K4, 2))
        assert res.D == LaurentMatrix.identity(K4, 2)

    def test_representability_fixture(self):
        B = representability_fixture()
        res = check_snf_contract(B)
        lin = LaurentPoly.t(K4) - LaurentPoly.constant(K4, K4.i)
        assert res.diagonal == [lin, lin]

    def test_unit_determinant_gives_identity(self):
        rng = random.Random(2)
        t = LaurentPoly.t(K4)
        for _ in range(10):
            # product of elementary matrices with a unit diagonal
            A = LaurentMatrix.identity(K4, 3)
            for _ in range(4):
                i, j = rng.sample(range(3), 2)
                E = LaurentMatrix.identity(K4, 3)
                E.entries[i][j] = t ** rng.randint(-2, 2) * rng.randint(-2, 2) + 1
                A = A * E
            A.entries[0] = [p * LaurentPoly.monomial(K4, K4(3), 1) for p in A.entries[0]]
            res = check_snf_contract(A)
            assert res.D == LaurentMatrix.identity(K4, 3)

    def test_determinant_oracle(self):
        rng = random.Random(9)
        for _ in range(25):
            n = rng.randint(1, 4)
            A = random_laurent_matrix(rng, n, n)
            res = check_snf_contract(A)
            det = determinant(A)
            prod = LaurentPoly.one(K4)
            for d in res.diagonal:
                prod = prod * d
            if det.is_zero():
                assert prod.is_zero()
            else:
                assert prod.is_associate(det)

    def test_rectangular_and_zero(self):
        rng = random.Random(4)
        for rows, cols in [(2, 3), (3, 2), (1, 4), (4, 1)]:
            check_snf_contract(random_laurent_matrix(rng, rows, cols))
        res = check_snf_contract(LaurentMatrix.zeros(K4, 2, 2))
        assert res.rank == 0


class TestHermitian:
    def test_identity(self):
        assert hermitian_check(LaurentMatrix.identity(K4, 2))

    def test_t_is_not(self):
        assert not hermitian_check(LaurentMatrix(K4, [[LaurentPoly.t(K4)]]))

    def test_trefoil(self):
        assert hermitian_check(trefoil_matrix())


def mpmath_inertia(H):
    """Eigenvalue signs from mpmath at high precision."""
    with mpmath.workdps(50):
        M = mpmath.matrix([[mpmath.mpc(*_exact_pair(x)) for x in row] for row in H])
        eig = mpmath.eighe(M, eigvals_only=True)
        tol = mpmath.mpf(10) ** -30
        pos = sum(1 for e in eig if e > tol)
        neg = sum(1 for e in eig if e < -tol)
        return pos, neg, len(eig) - pos - neg


def _exact_pair(x):
    with mpmath.workdps(60):
        z = mpmath.exp(2j * mpmath.pi / x.ctx.N)
        v = sum(mpmath.mpf(c.numerator) / c.denominator * z**j for j, c in enumerate(x.coefficients()))
        return v.real, v.imag


class TestSignatures:
    def test_diagonal(self):
        assert const_signature([[K4(1), K4(0)], [K4(0), K4(-1)]]) == (1, 1, 0)

    def test_hyperbolic_plane(self):
        assert const_signature([[K4(0), K4(1)], [K4(1), K4(0)]]) == (1, 1, 0)

    def test_imaginary_off_diagonal(self):
        assert const_signature([[K4(0), K4.i], [-K4.i, K4(0)]]) == (1, 1, 0)

    def test_degenerate(self):
        assert const_signature([[K4(1), K4(1)], [K4(1), K4(1)]]) == (1, 0, 1)
        assert const_signature([]) == (0, 0, 0)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            const_signature([[K4(0), K4(1)], [K4(2), K4(0)]])

    def test_trefoil_at_minus_one(self):
        assert signature_at(trefoil_matrix(), RootOfUnity(1, 2)) == (0, 1, 0)

    def test_one_sided_at_sixth_root(self):
        A = trefoil_matrix()
        assert signature_one_sided(A, RootOfUnity(1, 6), 1) == (0, 1, 0)
        assert signature_one_sided(A, RootOfUnity(1, 6), -1) == (1, 0, 0)
        assert signature_at(A, RootOfUnity(1, 6)) == (0, 0, 1)

    def test_identity_any_side(self):
        I3 = LaurentMatrix.identity(K4, 3)
        for root in (RootOfUnity(0), RootOfUnity(1, 3), RootOfUnity(5, 7)):
            for side in (1, -1):
                assert signature_one_sided(I3, root, side) == (3, 0, 0)

    def test_bad_side(self):
        with pytest.raises(InvalidInput):
            signature_one_sided(trefoil_matrix(), RootOfUnity(0), 0)

    def test_zero_determinant(self):
        with pytest.raises(SingularEverywhere):
            unit_circle_zeros(LaurentPoly.zero(K4))

    def test_random_hermitian_against_eigenvalues(self):
        rng = random.Random(21)
        K = field(12)
        for _ in range(30):
            n = rng.randint(1, 4)
            H = [[None] * n for _ in range(n)]
            for i in range(n):
                H[i][i] = K(rng.randint(-3, 3))
                for j in range(i + 1, n):
                    x = K(rng.randint(-2, 2)) + K.zeta(rng.randrange(12)) * rng.randint(-1, 1)
                    H[i][j] = x
                    H[j][i] = x.conj()
            assert const_signature(H) == mpmath_inertia(H)
            assert signature_value(const_signature(H)) == mpmath_inertia(H)[0] - mpmath_inertia(H)[1]


class TestBlocks:
    def test_block_matrix(self):
        I2 = LaurentMatrix.identity(K4, 2)
        Z = LaurentMatrix.zeros(K4, 2, 2)
        assert block_matrix(K4, [[I2, Z], [Z, I2]]) == LaurentMatrix.identity(K4, 4)

    def test_sharp_transpose(self):
        t = LaurentPoly.t(K4)
        A = LaurentMatrix(K4, [[t, const(K4, 0) + K4.i]])
        At = A.sharp_transpose()
        assert At.rows == 2 and At.entries[0][0] == t.sharp() and At.entries[1][0] == const(K4, 0) - K4.i
