"""Exception types shared across the package."""


class LacsumError(Exception):
    """Base class for computation errors (CLI maps these to exit code 2)."""


class FrequencyTooLarge(LacsumError):
    """The quadrature panel budget cannot resolve the highest frequency."""


class BudgetExceeded(LacsumError):
    """A requested accuracy would need more samples than the hard cap."""


class CapacityExceeded(LacsumError):
    """An exact-counting routine was asked for more than it can hold in memory."""


class SearchSpaceTooLarge(LacsumError):
    """Exhaustive enumeration would exceed the evaluation guard."""


class DomainError(LacsumError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""
