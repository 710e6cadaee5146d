"""Exception types raised across the package."""


class EntropicError(ValueError):
    """Base class for all input/validation failures."""


class NotHermitian(EntropicError):
    pass


class NotPositive(EntropicError):
    pass


class TraceNotOne(EntropicError):
    pass


class DomainError(EntropicError):
    """A spectral function is undefined at one of the eigenvalues."""


class ShapeMismatch(EntropicError):
    pass


class DimensionMismatch(EntropicError):
    pass


class NotNormalized(EntropicError):
    pass


class ZeroConditioningEvent(EntropicError):
    """Conditioning on an event of (numerically) zero probability."""


class InvalidQ(EntropicError):
    pass


class WrongLabelScheme(EntropicError):
    pass


class NonFinite(EntropicError):
    pass


class ParseError(EntropicError):
    pass


class NoConvergence(RuntimeError):
    """Iterative diagonalization hit its sweep cap."""


class BudgetExhausted(RuntimeWarning):
    """Optimizer stopped on its iteration budget; the result is best-so-far."""
