"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the front end never
has to guess how to report a failure.
"""


class RobbaError(Exception):
    exit_code = 1


class ParseError(RobbaError):
    exit_code = 2

    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if text is not None and pos is not None:
            message = f"{message} at position {pos}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class NotStabilized(RobbaError):
    exit_code = 3


class Inconclusive(RobbaError):
    exit_code = 3


class PreconditionError(RobbaError):
    exit_code = 4


class PrecisionLoss(PreconditionError):
    pass


class DivisionByZero(PreconditionError, ZeroDivisionError):
    pass


class NotPrincipalUnit(PreconditionError):
    pass


class WindowOverflow(PreconditionError):
    pass


class NotInvertible(PreconditionError):
    pass


class RankCap(PreconditionError):
    pass


class CProjectionSingular(PreconditionError):
    pass


class NotTorsion(PreconditionError):
    pass


class NotIntegral(PreconditionError):
    pass


class IndistinguishableFromZero(PreconditionError):
    pass


class NotSquareZero(PreconditionError):
    pass


class DimensionMismatch(PreconditionError):
    pass


class DegreeRange(PreconditionError):
    pass


class PropertyViolation(RobbaError):
    exit_code = 1
