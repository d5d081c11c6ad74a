"""Exception hierarchy shared by every module."""


class ThermophaseError(Exception):
    """Base class for all library errors."""


class DomainError(ThermophaseError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ForbiddenRegionError(DomainError):
    """The energy lies below the potential at some grid node."""

    def __init__(self, message, node):
        super().__init__(message)
        self.node = node


class TurningPointError(DomainError):
    """The zeroth-order action gradient vanishes, so higher orders diverge."""

    def __init__(self, message, node):
        super().__init__(message)
        self.node = node


class NonConvergenceError(ThermophaseError, ArithmeticError):
    """An iterative or adaptive procedure ran out of budget.

    Carries the best estimate reached, an error bound when one is known,
    and the iterate history for fixed-point solvers.
    """

    def __init__(self, message, best_estimate=None, error_bound=None, history=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_bound = error_bound
        self.history = list(history) if history is not None else []


class NoMinimumError(ThermophaseError):
    """A scanned function has no interior minimum on the bracket."""

    def __init__(self, message, bracket):
        super().__init__(message)
        self.bracket = bracket
