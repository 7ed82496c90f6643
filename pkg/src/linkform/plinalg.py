"""Linear algebra over the Laurent ring F[t, t^-1] and over F itself.

Matrices act on row vectors from the right.  The Smith normal form returns
unimodular transformations together with their inverses, since kernels and
quotient presentations need both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput, NotHermitian, SingularEverywhere
from .exactnum import FieldContext, FieldElement, RootOfUnity, conductor_for, embed_root, field, real_sign
from .laurent import LaurentPoly, divmod_field, exact_div


class LaurentMatrix:
    """A rectangular matrix of Laurent polynomials over one field."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: FieldContext, entries: Sequence[Sequence[LaurentPoly]], cols: int | None = None):
        self.ctx = ctx
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else (cols or 0)
        for row in self.entries:
            if len(row) != self.cols:
                raise InvalidInput("matrix rows have different lengths")

    @classmethod
    def zeros(cls, ctx, rows, cols) -> LaurentMatrix:
        return cls(ctx, [[LaurentPoly(ctx) for _ in range(cols)] for _ in range(rows)], cols)

    @classmethod
    def identity(cls, ctx, n) -> LaurentMatrix:
        m = cls.zeros(ctx, n, n)
        for i in range(n):
            m.entries[i][i] = LaurentPoly.one(ctx)
        return m

    @classmethod
    def diagonal(cls, ctx, values: Sequence[LaurentPoly]) -> LaurentMatrix:
        m = cls.zeros(ctx, len(values), len(values))
        for i, v in enumerate(values):
            m.entries[i][i] = v
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def copy(self) -> LaurentMatrix:
        return LaurentMatrix(self.ctx, self.entries, self.cols)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __add__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix(
            self.ctx,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.cols,
        )

    def __sub__(self, other: LaurentMatrix) -> LaurentMatrix:
        return LaurentMatrix(
            self.ctx,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.cols,
        )

    def __neg__(self) -> LaurentMatrix:
        return LaurentMatrix(self.ctx, [[-a for a in row] for row in self.entries], self.cols)

    def scale(self, c) -> LaurentMatrix:
        return LaurentMatrix(self.ctx, [[a * c for a in row] for row in self.entries], self.cols)

    def __mul__(self, other) -> LaurentMatrix:
        if not isinstance(other, LaurentMatrix):
            return self.scale(other)
        if self.cols != other.rows:
            raise InvalidInput(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        zero = LaurentPoly(self.ctx)
        out = []
        for row in self.entries:
            new_row = []
            for j in range(other.cols):
                acc = zero
                for k, a in enumerate(row):
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                new_row.append(acc)
            out.append(new_row)
        return LaurentMatrix(self.ctx, out, other.cols)

    def transpose(self) -> LaurentMatrix:
        return LaurentMatrix(self.ctx, [list(col) for col in zip(*self.entries)], self.rows)

    def sharp_transpose(self) -> LaurentMatrix:
        """The matrix A^{#T}: transpose followed by the involution."""
        return LaurentMatrix(
            self.ctx, [[self.entries[i][j].sharp() for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def row(self, i) -> list[LaurentPoly]:
        return list(self.entries[i])

    def submatrix(self, rows, cols) -> LaurentMatrix:
        return LaurentMatrix(self.ctx, [[self.entries[i][j] for j in cols] for i in rows], len(cols))

    def lift(self, target: FieldContext) -> LaurentMatrix:
        if target is self.ctx:
            return self
        return LaurentMatrix(target, [[a.lift(target) for a in row] for row in self.entries], self.cols)

    def evaluate(self, root: RootOfUnity) -> list[list[FieldElement]]:
        z = embed_root(self.ctx, root)
        return [[a.evaluate(z) for a in row] for row in self.entries]

    def is_diagonal(self) -> bool:
        return all(not self.entries[i][j] for i in range(self.rows) for j in range(self.cols) if i != j)

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(a) for a in row) for row in self.entries)
        return f"LaurentMatrix[{self.rows}x{self.cols}]({body})"


def block_matrix(ctx, blocks: Sequence[Sequence[LaurentMatrix]]) -> LaurentMatrix:
    rows = []
    for block_row in blocks:
        height = block_row[0].rows
        for i in range(height):
            row = []
            for b in block_row:
                row.extend(b.entries[i])
            rows.append(row)
    return LaurentMatrix(ctx, rows)


def determinant(A: LaurentMatrix) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant over the Laurent ring."""
    if A.rows != A.cols:
        raise InvalidInput("determinant of a non-square matrix")
    n = A.rows
    ctx = A.ctx
    if n == 0:
        return LaurentPoly.one(ctx)
    M = [list(r) for r in A.entries]
    sign = 1
    prev = LaurentPoly.one(ctx)
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly(ctx)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    return M[n - 1][n - 1] * sign


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNFResult:
    """A = U * D * V with U, V unimodular; ``U_inv`` and ``V_inv`` are their inverses."""

    U: LaurentMatrix
    D: LaurentMatrix
    V: LaurentMatrix
    U_inv: LaurentMatrix
    V_inv: LaurentMatrix

    @property
    def diagonal(self) -> list[LaurentPoly]:
        return [self.D.entries[i][i] for i in range(min(self.D.rows, self.D.cols))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


class _Eliminator:
    """Keeps L*A*R = D together with L^{-1} and R^{-1} during elimination."""

    def __init__(self, A: LaurentMatrix):
        ctx = A.ctx
        self.ctx = ctx
        self.M = [list(r) for r in A.entries]
        self.m, self.n = A.rows, A.cols
        self.L = [list(r) for r in LaurentMatrix.identity(ctx, self.m).entries]
        self.Linv = [list(r) for r in LaurentMatrix.identity(ctx, self.m).entries]
        self.R = [list(r) for r in LaurentMatrix.identity(ctx, self.n).entries]
        self.Rinv = [list(r) for r in LaurentMatrix.identity(ctx, self.n).entries]

    # row i += c * row j  (left multiply by E = I + c e_ij; E^{-1} = I - c e_ij)
    def add_row(self, i, j, c):
        for mat in (self.M, self.L):
            rj, ri = mat[j], mat[i]
            for k in range(len(ri)):
                if rj[k]:
                    ri[k] = ri[k] + c * rj[k]
        # Linv <- Linv * E^{-1}: column j -= c * column i
        for row in self.Linv:
            if row[i]:
                row[j] = row[j] - row[i] * c

    def swap_rows(self, i, j):
        if i == j:
            return
        for mat in (self.M, self.L):
            mat[i], mat[j] = mat[j], mat[i]
        for row in self.Linv:
            row[i], row[j] = row[j], row[i]

    def scale_row(self, i, unit: LaurentPoly):
        inv = unit ** -1
        for mat in (self.M, self.L):
            mat[i] = [a * unit for a in mat[i]]
        for row in self.Linv:
            row[i] = row[i] * inv

    # column j += c * column i  (right multiply by E = I + c e_ij)
    def add_col(self, j, i, c):
        for mat in (self.M, self.R):
            for row in mat:
                if row[i]:
                    row[j] = row[j] + row[i] * c
        # Rinv <- E^{-1} * Rinv: row i -= c * row j
        rj, ri = self.Rinv[j], self.Rinv[i]
        for k in range(len(ri)):
            if rj[k]:
                ri[k] = ri[k] - c * rj[k]

    def swap_cols(self, i, j):
        if i == j:
            return
        for mat in (self.M, self.R):
            for row in mat:
                row[i], row[j] = row[j], row[i]
        self.Rinv[i], self.Rinv[j] = self.Rinv[j], self.Rinv[i]

    def result(self) -> SNFResult:
        ctx = self.ctx
        L = LaurentMatrix(ctx, self.L, self.m)
        Linv = LaurentMatrix(ctx, self.Linv, self.m)
        R = LaurentMatrix(ctx, self.R, self.n)
        Rinv = LaurentMatrix(ctx, self.Rinv, self.n)
        D = LaurentMatrix(ctx, self.M, self.n)
        return SNFResult(U=Linv, D=D, V=Rinv, U_inv=L, V_inv=R)


def _width(p: LaurentPoly) -> int:
    return p.high() - p.low()


def smith_normal_form(A: LaurentMatrix) -> SNFResult:
    """Smith normal form over F[t, t^-1] with unimodular transformations."""
    E = _Eliminator(A)
    M = E.M
    m, n = E.m, E.n
    for s in range(min(m, n)):
        best = None
        for i in range(s, m):
            for j in range(s, n):
                if M[i][j] and (best is None or _width(M[i][j]) < best[0]):
                    best = (_width(M[i][j]), i, j)
                    if best[0] == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i0, j0 = best
        E.swap_rows(s, i0)
        E.swap_cols(s, j0)
        while True:
            changed = False
            # clear column s
            for i in range(s + 1, m):
                if M[i][s]:
                    q, _ = divmod_field(M[i][s], M[s][s])
                    E.add_row(i, s, -q)
                    if M[i][s]:
                        changed = True
            if changed:
                _repivot_column(E, s)
                continue
            for j in range(s + 1, n):
                if M[s][j]:
                    q, _ = divmod_field(M[s][j], M[s][s])
                    E.add_col(j, s, -q)
                    if M[s][j]:
                        changed = True
            if changed:
                _repivot_row(E, s)
                continue
            bad = None
            for i in range(s + 1, m):
                for j in range(s + 1, n):
                    if M[i][j] and divmod_field(M[i][j], M[s][s])[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            E.add_row(s, bad, LaurentPoly.one(E.ctx))
            _repivot_row(E, s)
        pivot = M[s][s]
        E.scale_row(s, pivot.unit_part() ** -1)
    return E.result()


def _repivot_column(E: _Eliminator, s: int):
    M = E.M
    best = min((i for i in range(s, E.m) if M[i][s]), key=lambda i: _width(M[i][s]))
    E.swap_rows(s, best)


def _repivot_row(E: _Eliminator, s: int):
    M = E.M
    best = min((j for j in range(s, E.n) if M[s][j]), key=lambda j: _width(M[s][j]))
    E.swap_cols(s, best)


def is_unimodular(U: LaurentMatrix) -> bool:
    d = determinant(U)
    return bool(d) and d.is_unit()


# ---------------------------------------------------------------------------
# Hermitian matrices and signatures


def hermitian_check(A: LaurentMatrix) -> bool:
    return A.rows == A.cols and A.sharp_transpose() == A


def const_signature(H: Sequence[Sequence[FieldElement]]) -> tuple[int, int, int]:
    """Inertia (positive, negative, null) of a Hermitian matrix over the field."""
    n = len(H)
    for i in range(n):
        if len(H[i]) != n:
            raise NotHermitian("matrix is not square")
        for j in range(i, n):
            if H[j][i] != H[i][j].conj():
                raise NotHermitian(f"entry ({i},{j}) is not conjugate to ({j},{i})")
    if n == 0:
        return (0, 0, 0)
    ctx = H[0][0].ctx
    M = [list(r) for r in H]
    pos = neg = 0
    while M:
        size = len(M)
        p = next((i for i in range(size) if M[i][i]), None)
        if p is None:
            pair = next(((k, l) for k in range(size) for l in range(size) if k != l and M[k][l]), None)
            if pair is None:
                break
            k, l = pair
            for c in (ctx.one, ctx.i):
                diag = M[k][k] + c * M[l][k] + c.conj() * M[k][l] + c * c.conj() * M[l][l]
                if diag:
                    break
            # congruence by P = I + c e_kl: row k += c row l, column k += conj(c) column l
            M[k] = [a + c * b for a, b in zip(M[k], M[l])]
            for row in M:
                row[k] = row[k] + c.conj() * row[l]
            p = k
        d = M[p][p]
        if real_sign(d) > 0:
            pos += 1
        else:
            neg += 1
        dinv = d.inverse()
        rest = [i for i in range(size) if i != p]
        M = [[M[i][j] - M[i][p] * dinv * M[p][j] for j in rest] for i in rest]
    return (pos, neg, n - pos - neg)


def signature_value(inertia: tuple[int, int, int]) -> int:
    return inertia[0] - inertia[1]


def _field_for(A: LaurentMatrix, *roots: RootOfUnity) -> FieldContext:
    n = conductor_for(A.ctx.N, *(r.den for r in roots))
    return field(n)


def signature_at(A: LaurentMatrix, omega: RootOfUnity) -> tuple[int, int, int]:
    ctx = _field_for(A, omega)
    return const_signature(A.lift(ctx).evaluate(omega))


def unit_circle_zeros(p: LaurentPoly) -> list[Fraction]:
    """Angles (in turns) of the zeros of p among the roots of unity of its field."""
    if p.is_zero():
        raise SingularEverywhere("determinant vanishes identically")
    N = p.ctx.N
    return [Fraction(j, N) for j in range(N) if not p.evaluate(p.ctx.zeta(j))]


def one_sided_sample(zero_angles: Sequence[Fraction], omega: RootOfUnity, side: int) -> RootOfUnity:
    """Exact midpoint between omega and the next zero on the requested side."""
    a = omega.angle
    if side > 0:
        gaps = [((z - a) % 1) or Fraction(1) for z in zero_angles]
        gap = min(gaps, default=Fraction(1))
        return RootOfUnity.from_angle(a + gap / 2)
    gaps = [((a - z) % 1) or Fraction(1) for z in zero_angles]
    gap = min(gaps, default=Fraction(1))
    return RootOfUnity.from_angle(a - gap / 2)


def signature_one_sided(
    A: LaurentMatrix, omega: RootOfUnity, side: int, det: LaurentPoly | None = None
) -> tuple[int, int, int]:
    """Inertia of A just after (side=+1) or just before (side=-1) omega on the circle."""
    if side not in (1, -1):
        raise InvalidInput("side must be +1 or -1")
    det = determinant(A) if det is None else det
    zeros = unit_circle_zeros(det)
    sample = one_sided_sample(zeros, omega, side)
    return signature_at(A, sample)
