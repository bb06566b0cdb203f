"""Exception hierarchy shared by every module."""


class VarCalcError(Exception):
    """Base class for all errors raised by varcalc."""


class ParseError(VarCalcError):
    """Malformed input text. Carries a 1-based line and column when known."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class UndeclaredSymbolError(ParseError):
    pass


class DomainError(VarCalcError):
    """A mathematically ill-posed request (as opposed to bad syntax)."""


class OrderOverflowError(DomainError):
    """A derivative would exceed the jet space's configured headroom."""


class ReductionError(DomainError):
    """On-shell substitution failed to terminate within the headroom."""


class NotAConservationLawError(DomainError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotASymmetryError(VarCalcError):
    """The candidate fails the (divergence) invariance condition."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
