"""Exception types shared across the package."""


class QubeatError(Exception):
    """Base class for all package-specific errors."""


class PhysicalityError(QubeatError):
    """A quantity violates a physical bound (positivity, trace, |g| <= 1)."""


class StructureError(QubeatError):
    """A density matrix does not have the structure an operation requires."""


class OscillationError(QubeatError):
    """A trace does not oscillate enough for envelope/beat analysis."""


class ConvergenceError(QubeatError):
    """An iterative numerical routine failed to converge."""
