"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: domain errors exit 2,
convergence failures exit 3.
"""


class GeowsumError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GeowsumError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PrecisionError(DomainError):
    """A precision context was requested below the supported floor."""


class ConvergenceError(GeowsumError, ArithmeticError):
    """An iteration failed to converge (or converged onto the wrong branch)."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
