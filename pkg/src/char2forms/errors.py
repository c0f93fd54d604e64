"""Exception hierarchy shared by all modules."""


class Char2Error(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(Char2Error, ZeroDivisionError):
    pass


class ShapeMismatch(Char2Error, ValueError):
    pass


class FieldMismatch(Char2Error, ValueError):
    pass


class NotSquare(ShapeMismatch):
    pass


class Singular(Char2Error, ValueError):
    pass


class NotSymmetric(Char2Error, ValueError):
    pass


class Degenerate(Char2Error, ValueError):
    """The bilinear form has a non-trivial radical."""


class BudgetExceeded(Char2Error, RuntimeError):
    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class WrongRank(Char2Error, ValueError):
    pass


class NotBSymmetric(Char2Error, ValueError):
    pass


class PreconditionFailed(Char2Error, ValueError):
    pass


class BadInput(Char2Error, ValueError):
    pass


class WrongShape(Char2Error, ValueError):
    pass


class ParseError(Char2Error, ValueError):
    pass
