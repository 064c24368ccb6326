"""
Enum definitions for solver configuration and run results.
"""
from enum import Enum


class SolverVariant(str, Enum):
    """The three quasi-Newton drivers."""
    GLOBAL_BFGS = "global-bfgs"
    BFGS_WOLFE = "bfgs-wolfe"
    CAUTIOUS_BFGS_ARMIJO = "cautious-bfgs-armijo"


class RChoice(str, Enum):
    """Source of the multiplier mu used in the corrected update."""
    CHOICE1 = "choice1"  # steepest-descent multiplier
    CHOICE2 = "choice2"  # multiplier of the direction subproblem


class TraceLevel(str, Enum):
    """How much per-iteration data a run keeps."""
    NONE = "none"
    SUMMARY = "summary"
    FULL = "full"


class CriticalityMeasure(str, Enum):
    """Quantity tested against theta_tol in the stopping rule."""
    THETA = "theta"
    STEEPEST = "steepest"


class RunStatus(str, Enum):
    """Terminal state of a solver run."""
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    LINE_SEARCH_FAILED = "LineSearchFailed"
    SUBPROBLEM_STALLED = "SubproblemStalled"
    NON_FINITE_VALUE = "NonFiniteValue"
    UPDATE_FAILED = "UpdateFailed"  # curvature pair rejected by a rule that must accept it


class CostMeasure(str, Enum):
    """Cost used for solver performance profiles."""
    TIME = "time"
    EVALS = "evals"
