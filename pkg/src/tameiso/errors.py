"""Exception hierarchy shared by every module of the package."""


class TameisoError(Exception):
    """Base class for all package errors."""


class DivisionByZero(TameisoError, ZeroDivisionError):
    pass


class DegreeCapExceeded(TameisoError):
    def __init__(self, degree, cap):
        super().__init__(f"total degree {degree} exceeds cap {cap}")
        self.degree = degree
        self.cap = cap


class NotElementary(TameisoError):
    pass


class NonUnit(TameisoError):
    pass


class NotLocallyFinite(TameisoError):
    pass


class NotLocallyNilpotent(TameisoError):
    pass


class IrrationalSpectrum(TameisoError):
    pass


class NonRationalEntries(TameisoError):
    pass


class ZeroParameter(TameisoError):
    pass


class SolverIncomplete(TameisoError):
    """Raised when triangular propagation stalls; ``residual`` holds what is left."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IncomparableShapes(TameisoError):
    pass


class ShapeMismatch(TameisoError):
    pass


class InvalidParams(TameisoError):
    pass


class ParseError(TameisoError):
    """Syntax error in an expression; ``position`` is a 0-based offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class NonRationalLiteral(ParseError):
    pass


class UnknownSymbol(ParseError):
    pass


class SoundnessError(TameisoError):
    """A returned solution family failed re-verification (a solver bug)."""
