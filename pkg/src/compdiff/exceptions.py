"""Exception types raised across the package."""


class CompdiffError(Exception):
    """Base class for all package errors."""


class SymbolError(CompdiffError, ValueError):
    """A symbol map violates its family's invariants."""


class TruncationError(CompdiffError, ValueError):
    """Truncation orders are incompatible, or a sup bound makes truncation unsafe."""


class ConvergenceError(CompdiffError, RuntimeError):
    """An iterative method failed to reach its tolerance."""


class NoClosedFormError(CompdiffError, ValueError):
    """No closed-form result is available for the requested symbol family."""
