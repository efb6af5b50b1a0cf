"""Exception hierarchy.

Errors split into two families so the CLI can map them onto exit codes:
``ValidationError`` (bad input, exit 3) and ``NumericalError`` (a numerical
contract could not be met, exit 4).
"""


class EigresError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 5


class ParseError(EigresError):
    exit_code = 2


class ValidationError(EigresError, ValueError):
    exit_code = 3


class NumericalError(EigresError, ArithmeticError):
    exit_code = 4


# -- validation -------------------------------------------------------------


class NotHermitian(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class WrongDimension(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class GapViolation(ValidationError):
    pass


class UnsupportedN(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class BracketInvalid(ValidationError):
    pass


class OriginWithoutDirection(ValidationError):
    pass


class PatchDivisionByZero(ValidationError):
    pass


class EigenvalueOnCut(ValidationError):
    pass


# -- numerical --------------------------------------------------------------


class ConvergenceFailure(NumericalError):
    pass


class SingularResolvent(NumericalError):
    pass


class GapLost(NumericalError):
    pass


class StepTooCoarse(NumericalError):
    pass


class MatchAmbiguous(NumericalError):
    pass


class DegenerateInterior(NumericalError):
    pass


class TransversalityLost(NumericalError):
    pass


class IoError(EigresError, OSError):
    exit_code = 5
