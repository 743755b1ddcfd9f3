"""Exception taxonomy shared by all modules.

The split mirrors the CLI exit-code contract: domain/admissibility problems
(exit 1), numeric failures (exit 2), and usage/config mistakes (exit 3).
"""


class ConfhessError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ConfhessError, ValueError):
    """Input outside the mathematical domain of an operation."""


class AdmissibilityError(DomainError):
    """A tuple of eigenvalues lies outside the required cone.

    ``condition`` carries the violated cone condition as text (for example
    ``"sigma_2 <= 0"``); ``node`` identifies the offending grid node when the
    error arises inside the radial solver.
    """

    def __init__(self, message, condition=None, node=None):
        super().__init__(message)
        self.condition = condition
        self.node = node


class PositivityError(DomainError):
    """A conformal factor is nonpositive where it must be positive."""


class NumericError(ConfhessError, RuntimeError):
    """Numeric failure: singular linearization, eigendecomposition failure."""


class UsageError(ConfhessError, ValueError):
    """Malformed CLI arguments or configuration files."""
