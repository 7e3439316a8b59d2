"""Exception types raised by the library."""


class FrictionError(Exception):
    """Base class for all library errors."""


class DomainError(FrictionError, ValueError):
    """An argument lies outside the domain of a function."""


class PoleError(DomainError):
    """Evaluation requested at (or within the exclusion radius of) a pole."""


class DegenerateRatesError(FrictionError, ValueError):
    """Both transition rates are zero or negligible."""


class QuadratureError(FrictionError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    The partial estimate is kept on the exception so callers can decide
    whether it is good enough.
    """

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error
