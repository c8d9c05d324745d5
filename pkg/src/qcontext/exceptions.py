"""Exception hierarchy shared by every module of the package."""


class QContextError(Exception):
    """Base class for all package errors."""


class ParseError(QContextError, ValueError):
    """Malformed observable text or input file."""


class DimensionError(QContextError, ValueError):
    """Operands live on different numbers of qubits."""


class NotALineError(QContextError, ValueError):
    """Three observables that do not form a line of the polar space."""


class InvalidIndexError(QContextError, ValueError):
    """A quadric index that is not a point (e.g. the identity)."""


class CapabilityError(QContextError):
    """The request is well formed but outside what this build supports."""


class BudgetExceededError(CapabilityError):
    """An exact computation would exceed its enumeration budget.

    The offending rank is kept on the exception so callers can report it.
    """

    def __init__(self, message, rank=None, budget=None):
        super().__init__(message)
        self.rank = rank
        self.budget = budget


class EmptyConfigurationError(QContextError, ValueError):
    """A search was requested on a configuration without contexts."""


class ClassificationError(QContextError, ValueError):
    """A line does not match the requested vertex/midpoint role pattern."""
