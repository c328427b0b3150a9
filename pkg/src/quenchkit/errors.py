"""Exception types shared across the package.

The split mirrors the CLI exit codes: validation/domain problems are
user-input errors (exit 2), numeric problems are runtime failures (exit 3).
"""


class QuenchKitError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(QuenchKitError, ValueError):
    """Invalid input: wrong shapes, non-Hermitian matrices, bad parameters."""


class DomainError(QuenchKitError, ValueError):
    """Input outside the mathematical domain of an operation."""


class GaplessModeError(DomainError):
    """A quasi-momentum hit a gapless point (single-particle energy ~ 0)."""


class NumericError(QuenchKitError, ArithmeticError):
    """A numerical procedure failed to converge or produced garbage."""


class ConsistencyError(NumericError):
    """Two independent computation routes disagreed beyond tolerance."""


class ExpansionValidityWarning(UserWarning):
    """The second-order quench expansion is being used outside its comfort zone."""
