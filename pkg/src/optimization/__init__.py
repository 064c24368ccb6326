"""Direction subproblem, line searches, Hessian updates and the solver drivers."""

from src.optimization.errors import (
    CurvatureViolation,
    DegenerateStep,
    LineSearchFailed,
    NonFiniteValue,
    NotPositiveDefinite,
    OptimizationError,
    SubproblemStalled,
)

__all__ = [
    "CurvatureViolation",
    "DegenerateStep",
    "LineSearchFailed",
    "NonFiniteValue",
    "NotPositiveDefinite",
    "OptimizationError",
    "SubproblemStalled",
]
