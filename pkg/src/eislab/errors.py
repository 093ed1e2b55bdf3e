"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole."""


class ConvergenceError(RuntimeError):
    """A quadrature or series failed to reach the requested tolerance.

    The best value obtained and the tolerance actually achieved are attached
    so callers can decide whether the result is still usable.
    """

    def __init__(self, message, value=None, achieved_tol=None):
        super().__init__(message)
        self.value = value
        self.achieved_tol = achieved_tol


class SieveLimitError(DomainError):
    """A coefficient sum was requested beyond the configured sieve limit."""


class IterationLimitError(RuntimeError):
    """An iterative reduction failed to terminate within its cap."""
