"""
Exceptions raised by the numerical layers.

The solver turns every one of these into a RunResult status; none of them
escapes a run.
"""


class OptimizationError(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NotPositiveDefinite(OptimizationError):
    """A matrix expected to be SPD failed factorization."""


class NonFiniteValue(OptimizationError):
    """An objective or Jacobian entry is NaN or infinite."""


class SubproblemStalled(OptimizationError):
    """The dual iteration of the direction subproblem did not reach tolerance."""


class LineSearchFailed(OptimizationError):
    """No step satisfying the requested conditions was found."""


class DegenerateStep(OptimizationError):
    """The step s = x^{k+1} - x^k is numerically zero."""


class CurvatureViolation(OptimizationError):
    """The curvature term of a BFGS update is not positive."""
