"""Exception types shared across the package."""


class UsageError(ValueError):
    """A caller passed arguments that violate an operation's preconditions."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a construction bug, not bad input."""


class ConvergenceError(RuntimeError):
    """A numeric routine failed to converge."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NotDiagonalizableError(RuntimeError):
    """Raised when a biorthogonal basis is requested at a degenerate or complex point."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict
