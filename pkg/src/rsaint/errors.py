"""Exception hierarchy shared by all modules."""


class RsaintError(Exception):
    """Base class for every error raised by this package."""


class CapacityError(RsaintError):
    """Prime tables are too small for a query, or would exceed the memory budget."""


class OutOfRangeError(CapacityError, IndexError):
    """A prime-count query beyond the sieve limit."""


class ConfigurationError(RsaintError, ValueError):
    """A modulus was queried that was not registered when the tables were built."""


class DomainError(RsaintError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class UndefinedRatioError(RsaintError, ZeroDivisionError):
    """A bias ratio with an empty denominator."""


class ConvergenceError(RsaintError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance.

    ``estimate`` and ``error`` carry the best value found and its error bound.
    """

    def __init__(self, message, estimate, error):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class CacheFormatError(RsaintError, ValueError):
    """A table cache file is malformed or fails its consistency checks."""
