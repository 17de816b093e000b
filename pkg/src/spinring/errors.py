"""Exception types shared across the package."""


class SpinringError(Exception):
    """Base class for all package errors."""


class DomainError(SpinringError, ValueError):
    """Invalid input: out-of-range parameters, mismatched dimensions, bad config."""


class NumericError(SpinringError, RuntimeError):
    """Numerical failure: non-convergent decomposition, norm drift past tolerance."""
