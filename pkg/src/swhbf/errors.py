"""Exception hierarchy.

Each class maps to one CLI exit code (see ``swhbf.cli``).
"""


class SwhbfError(Exception):
    exit_code = 1


class ParseError(SwhbfError):
    """Lexical or syntax error in a polynomial/rational string."""

    exit_code = 2

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class PreconditionError(SwhbfError, ValueError):
    exit_code = 3


class StructuralError(PreconditionError):
    """Shapes of inputs do not match (e.g. exponent vector length)."""


class InexactDivisionError(PreconditionError, ArithmeticError):
    """A division that must be exact left a remainder."""


class ResourceError(SwhbfError):
    """A configured cap (pairs, support size, degree, time) was exceeded.

    ``partial`` carries whatever state the computation had reached.
    """

    exit_code = 4

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class InconsistencyError(SwhbfError):
    """A mathematical guarantee was violated; indicates a bug or bad input."""

    exit_code = 5

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
