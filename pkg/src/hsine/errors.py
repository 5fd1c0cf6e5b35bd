"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument lies outside the domain of the function (e.g. on a branch cut)."""


class ConvergenceFailure(ArithmeticError):
    """A quadrature or iterative scheme exhausted its budget.

    ``level`` and ``last_correction`` carry the diagnostic state at the
    moment the budget ran out, when available.
    """

    def __init__(self, message, level=None, last_correction=None):
        super().__init__(message)
        self.level = level
        self.last_correction = last_correction


class PrecisionOverflow(ArithmeticError):
    """The working precision required by a plan exceeds the configured cap."""


class NonConvergence(ArithmeticError):
    """Newton iteration left its bracket."""


class SieveTooSmall(ValueError):
    """A Moebius table is shorter than the truncation point requested."""
