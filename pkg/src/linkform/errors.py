"""Exception hierarchy.

Two families matter to callers: ``InvalidInput`` (malformed data, exit code 2
on the command line) and ``PreconditionError`` (well-formed data that violates
a mathematical hypothesis, exit code 3).
"""


class LinkformError(Exception):
    exit_code = 1


class InvalidInput(LinkformError):
    exit_code = 2


class PreconditionError(LinkformError):
    exit_code = 3


class ConductorMismatch(PreconditionError):
    pass


class ConductorCapExceeded(PreconditionError):
    pass


class NotReal(PreconditionError):
    pass


class RealModeHalfPlane(PreconditionError):
    pass


class ZeroPolynomial(PreconditionError):
    pass


class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass


class NotHermitian(PreconditionError):
    pass


class SingularEverywhere(PreconditionError):
    pass


class SingularMatrix(PreconditionError):
    pass


class UnfactorableAnnihilator(PreconditionError):
    pass


class NotPrimary(PreconditionError):
    pass


class SingularForm(PreconditionError):
    pass


class NonTorsion(PreconditionError):
    pass


class UnsolvableLift(LinkformError):
    """Raised when a torsion class admits no lift; indicates a bug."""


class CharacterOrderMismatch(PreconditionError):
    pass


class MismatchReport(LinkformError):
    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__(f"{len(self.failures)} sample(s) disagree: {self.failures[:5]}")
