"""Signature jumps, signature functions, Witt classes and representability.

All quantities are read off a ``Decomposition``.  Points of the circle are
roots of unity, compared through their exact angles, so no transcendental
comparison is ever needed.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput, MismatchReport, SingularForm
from .exactnum import RootOfUnity, conductor_for, field
from .forms import (
    CyclicPairing,
    Decomposition,
    EForm,
    FForm,
    LinkingForm,
    classify,
    is_nonsingular,
    reference_pairing,
)
from .laurent import Mode
from .plinalg import (
    LaurentMatrix,
    determinant,
    one_sided_sample,
    signature_at,
    signature_value,
    unit_circle_zeros,
)

ONE = RootOfUnity(0)


@dataclass
class JumpTable:
    """Signature jumps and local corrections, supported on finitely many roots."""

    mode: Mode
    jumps: dict[RootOfUnity, int] = dc_field(default_factory=dict)
    loc: dict[RootOfUnity, int] = dc_field(default_factory=dict)

    def jump(self, root: RootOfUnity) -> int:
        return self.jumps.get(root, 0)

    def local(self, root: RootOfUnity) -> int:
        return self.loc.get(root, 0)

    def support(self) -> list[RootOfUnity]:
        return sorted(r for r, v in self.jumps.items() if v)

    def total(self) -> int:
        return sum(self.jumps.values())

    def __add__(self, other: JumpTable) -> JumpTable:
        jumps = defaultdict(int, self.jumps)
        loc = defaultdict(int, self.loc)
        for r, v in other.jumps.items():
            jumps[r] += v
        for r, v in other.loc.items():
            loc[r] += v
        return JumpTable(self.mode, _prune(jumps), _prune(loc))

    def negated(self) -> JumpTable:
        return JumpTable(self.mode, {r: -v for r, v in self.jumps.items()}, {r: -v for r, v in self.loc.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, JumpTable)
            and self.mode == other.mode
            and _prune(self.jumps) == _prune(other.jumps)
            and _prune(self.loc) == _prune(other.loc)
        )


def _prune(d) -> dict:
    return {k: v for k, v in d.items() if v}


def _require_nonsingular(d: Decomposition) -> None:
    if not is_nonsingular(d):
        raise SingularForm("signature invariants are defined for non-singular forms only")


def jumps(d: Decomposition) -> JumpTable:
    """Signature jumps (odd n) and local terms (even n) of a non-singular decomposition."""
    _require_nonsingular(d)
    jump = defaultdict(int)
    loc = defaultdict(int)
    for f in d.e_forms():
        xi = f.xi
        if f.n % 2:
            if d.mode is Mode.COMPLEX:
                jump[xi] -= f.eps
            else:
                if xi.is_real():
                    raise InvalidInput("a real form at +-1 cannot have odd length")
                jump[xi] += f.eps
                jump[xi.conj()] -= f.eps
        else:
            loc[xi] -= f.eps
            if d.mode is Mode.REAL and not xi.is_real():
                loc[xi.conj()] -= f.eps
    return JumpTable(d.mode, _prune(jump), _prune(loc))


def signature_function(d: Decomposition, omega: RootOfUnity, table: JumpTable | None = None) -> int:
    """The defining finite sum, evaluated exactly.

    The point 1 is reached going anticlockwise all the way round, so its
    angle is taken to be 1 rather than 0.
    """
    table = table or jumps(d)
    theta = omega.angle or Fraction(1)
    inner = sum(2 * v for r, v in table.jumps.items() if 0 < r.angle < theta)
    return inner + table.local(omega) + table.jump(omega) + table.jump(ONE)


def averaged_signature(d: Decomposition, omega: RootOfUnity, table: JumpTable | None = None) -> Fraction:
    table = table or jumps(d)
    if omega == ONE:
        return Fraction(table.total())
    return Fraction(signature_function(d, omega, table) - table.local(omega))


# ---------------------------------------------------------------------------
# Witt classes


@dataclass(frozen=True)
class WittClass:
    """Signed counts of odd-length basic forms per root; zero exactly for metabolic forms."""

    mode: Mode
    counts: tuple[tuple[RootOfUnity, int], ...] = ()

    @classmethod
    def from_dict(cls, mode: Mode, counts: dict) -> WittClass:
        return cls(mode, tuple(sorted(((r, v) for r, v in counts.items() if v), key=lambda rv: rv[0].angle)))

    def as_dict(self) -> dict[RootOfUnity, int]:
        return dict(self.counts)

    def __add__(self, other: WittClass) -> WittClass:
        if self.mode != other.mode:
            raise InvalidInput("Witt classes of different modes")
        acc = defaultdict(int, self.as_dict())
        for r, v in other.counts:
            acc[r] += v
        return WittClass.from_dict(self.mode, acc)

    def __neg__(self) -> WittClass:
        return WittClass.from_dict(self.mode, {r: -v for r, v in self.counts})

    def is_zero(self) -> bool:
        return not self.counts


def witt_normal_form(d: Decomposition) -> WittClass:
    """Drop even-length and off-circle forms and count the remaining signs per root."""
    _require_nonsingular(d)
    acc = defaultdict(int)
    for f in d.e_forms():
        if f.n % 2:
            acc[f.xi] += f.eps
    return WittClass.from_dict(d.mode, acc)


def is_metabolic(d: Decomposition) -> bool:
    return witt_normal_form(d).is_zero()


def witt_equivalent(d1: Decomposition, d2: Decomposition) -> bool:
    return witt_normal_form(d1) == witt_normal_form(d2)


def is_representable_complex(d: Decomposition) -> bool:
    if d.mode is not Mode.COMPLEX:
        raise InvalidInput("representability test applies to complex forms")
    return jumps(d).total() == 0


# ---------------------------------------------------------------------------
# comparison with Hermitian matrices


def complexify(d: Decomposition) -> Decomposition:
    """The complex decomposition of a real form, computed by reclassifying model pairings."""
    if d.mode is Mode.COMPLEX:
        return d
    out = []
    for f in d:
        if isinstance(f, FForm):
            raise InvalidInput("complexification of off-circle forms is not supported")
        ctx = field(conductor_for(f.xi.den))
        real = reference_pairing(ctx, Mode.REAL, f)
        cx = CyclicPairing(real.f, real.h, Mode.COMPLEX)
        out.extend(classify(LinkingForm(ctx, Mode.COMPLEX, [cx])))
    return Decomposition(Mode.COMPLEX, out)


@dataclass
class CrosscheckReport:
    samples: list[RootOfUnity]
    rows: list[dict]
    failures: list[dict]

    @property
    def ok(self) -> bool:
        return not self.failures

    def raise_if_failed(self) -> None:
        if self.failures:
            raise MismatchReport(self.failures)


def sample_grid(count: int) -> list[RootOfUnity]:
    return [RootOfUnity(j, count) for j in range(count)]


def crosscheck_matrix(d: Decomposition, A: LaurentMatrix, samples: Sequence[RootOfUnity]) -> CrosscheckReport:
    """Compare signature data of d with the signatures of a matrix presenting it.

    Checks sigma(xi) = sign A(xi) - lim_{theta->0+} sign A(e^{i theta}) + jump(1)
    and sigma_av(xi) = sign_av A(xi) - sign_av A(1) at every sample.  Real
    decompositions are compared through their complexification, since the
    matrix signatures see the complex jumps.
    """
    cd = complexify(d)
    table = jumps(cd)
    det = determinant(A)
    zeros = unit_circle_zeros(det)

    def one_sided(root, side):
        return signature_value(signature_at(A, one_sided_sample(zeros, root, side)))

    base = one_sided(ONE, 1)
    av_one = Fraction(one_sided(ONE, 1) + one_sided(ONE, -1), 2)
    rows, failures = [], []
    for root in samples:
        sigma = signature_function(cd, root, table)
        expected_sigma = signature_value(signature_at(A, root)) - base + table.jump(ONE)
        av = averaged_signature(cd, root, table)
        expected_av = Fraction(one_sided(root, 1) + one_sided(root, -1), 2) - av_one
        row = {
            "root": root,
            "sigma": sigma,
            "matrix_sigma": expected_sigma,
            "sigma_avg": av,
            "matrix_sigma_avg": expected_av,
        }
        rows.append(row)
        if sigma != expected_sigma or av != expected_av:
            failures.append(row)
    return CrosscheckReport(list(samples), rows, failures)


def signature_table(d: Decomposition, samples: Iterable[RootOfUnity]) -> list[tuple[RootOfUnity, int, Fraction]]:
    table = jumps(d)
    return [(r, signature_function(d, r, table), averaged_signature(d, r, table)) for r in samples]
