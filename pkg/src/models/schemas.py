"""Pydantic models for MOO-BFGS configuration, traces and results."""

from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import settings
from src.models.enums import CriticalityMeasure, RChoice, RunStatus, SolverVariant, TraceLevel
from src.utils.time import utcnow

# Recorded in every manifest so stored metric tables can be interpreted later
METRIC_CONVENTIONS = {
    "solver_front": "nondominated final F of the solver's Converged runs",
    "reference_front": "nondominated union of all solver fronts of the problem",
    "extremes": "per-objective minimizers of the reference front",
    "spread_gaps": "euclidean along F1 for m = 2, per objective (worst reported) for m > 2",
    "empty_front": "purity 0, flagged",
    "degenerate_front": "gamma = delta = inf, flagged",
    "purity_match_tolerance": "1e-10 per component",
}


class WolfeParams(BaseModel):
    """Line-search parameters shared by the Wolfe and Armijo searches."""

    model_config = ConfigDict(frozen=True)

    rho: float = Field(1e-4, gt=0.0, lt=0.5, description="Sufficient-decrease coefficient")
    sigma: float = Field(0.1, gt=0.0, lt=1.0, description="Curvature coefficient")
    alpha_max: float = Field(100.0, gt=0.0, description="Largest trial step")
    max_trials: int = Field(50, ge=1, description="Trial steps before giving up")

    @model_validator(mode="after")
    def check_sigma_above_rho(self):
        if not self.rho < self.sigma:
            raise ValueError(f"sigma must lie in (rho, 1), got rho={self.rho}, sigma={self.sigma}")
        return self


class SolverConfig(BaseModel):
    """Configuration of one solver run."""

    model_config = ConfigDict(frozen=True)

    variant: SolverVariant = SolverVariant.GLOBAL_BFGS
    rho: float = Field(1e-4, gt=0.0, lt=0.5)
    sigma: float = Field(0.1, gt=0.0, lt=1.0)
    alpha_max: float = Field(100.0, gt=0.0)
    max_line_search_trials: int = Field(50, ge=1)
    vartheta: float = Field(0.1, gt=0.0)
    vartheta_lower: float = Field(1e-4, gt=0.0)
    vartheta_upper: float = Field(1.0, gt=0.0)
    epsilon_cautious: float = Field(1e-6, gt=0.0)
    theta_tol: float = Field(settings.theta_tol, gt=0.0, description="Criticality tolerance")
    max_iters: int = Field(2000, ge=0)
    dual_max_iters: int = Field(500, ge=1)
    r_choice: RChoice = RChoice.CHOICE2
    trace_level: TraceLevel = TraceLevel.NONE
    criticality_measure: CriticalityMeasure = CriticalityMeasure.THETA
    warm_start: bool = Field(False, description="Start the dual iteration from the previous multiplier")
    zero_correction: bool = Field(False, description="Force r = 0 in the corrected update (testing only)")

    @model_validator(mode="after")
    def check_ranges(self):
        if not self.rho < self.sigma:
            raise ValueError(f"sigma must lie in (rho, 1), got rho={self.rho}, sigma={self.sigma}")
        if not self.vartheta_lower <= self.vartheta_upper:
            raise ValueError("vartheta_lower must not exceed vartheta_upper")
        if not self.vartheta_lower < self.vartheta < self.vartheta_upper:
            raise ValueError(
                f"vartheta must lie in ({self.vartheta_lower}, {self.vartheta_upper}), got {self.vartheta}"
            )
        return self

    @classmethod
    def from_settings(cls, **overrides: Any) -> "SolverConfig":
        """Build a config from the global settings, then apply overrides."""
        values = settings.solver_defaults()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def wolfe_params(self) -> WolfeParams:
        return WolfeParams(
            rho=self.rho,
            sigma=self.sigma,
            alpha_max=self.alpha_max,
            max_trials=self.max_line_search_trials,
        )


class UpdateDiagnostics(BaseModel):
    """Per-objective quantities produced by a Hessian-approximation update."""

    eta: List[float] = Field(..., description="y_j's / |s|^2")
    r: List[float] = Field(..., description="Correction coefficients (zero for uncorrected rules)")
    gamma_dot_s: List[Optional[float]] = Field(
        ..., description="Curvature used in the rank-one term, positive; None where the update was skipped"
    )
    applied: List[bool] = Field(default_factory=list, description="False where an update was skipped")
    psi: Optional[List[float]] = Field(None, description="trace(B) - ln det(B) after the update")


class EvalCounts(BaseModel):
    """Snapshot of evaluation counters."""

    f_evals: int = 0
    jac_evals: int = 0


class IterationRecord(BaseModel):
    """One iteration of a run: the iterate x^k and the step taken from it."""

    k: int
    x: List[float]
    f: List[float]
    theta: float = Field(..., le=0.0)
    d_norm: float
    descent: Optional[float] = Field(None, description="D(x^k, d^k)")
    d_sd_norm: Optional[float] = None
    direction: Optional[List[float]] = None
    alpha: Optional[float] = None
    unit_step: Optional[bool] = None
    update_diag: Optional[UpdateDiagnostics] = None
    evals: EvalCounts = Field(default_factory=EvalCounts)


class RunResult(BaseModel):
    """
    Outcome of one solver run.

    Converged means |theta| <= theta_tol, except under the steepest
    criticality measure where it means |d_sd| <= theta_tol; such runs carry
    the message "converged on the steepest-descent norm".
    """

    problem: str
    variant: SolverVariant
    status: RunStatus
    x: List[float]
    f: List[float]
    theta: float
    iterations: int
    wall_time: float
    f_evals: int = 0
    jac_evals: int = 0
    start_index: Optional[int] = None
    seed: Optional[int] = None
    message: Optional[str] = None
    trace: List[IterationRecord] = Field(default_factory=list)

    @property
    def converged(self) -> bool:
        return self.status == RunStatus.CONVERGED


class ProblemMetadata(BaseModel):
    """Serializable description of a registered problem."""

    name: str
    n: int = Field(..., ge=1)
    m: int = Field(..., ge=1)
    convex: bool
    strongly_convex: bool = False
    lower: List[float]
    upper: List[float]
    description: str = ""

    @model_validator(mode="after")
    def check_box(self):
        if len(self.lower) != self.n or len(self.upper) != self.n:
            raise ValueError(f"{self.name}: start box must have {self.n} bounds per side")
        if any(lo > up for lo, up in zip(self.lower, self.upper)):
            raise ValueError(f"{self.name}: start box lower bound exceeds upper bound")
        return self


class ExperimentSpec(BaseModel):
    """A benchmark sweep: problems x solvers x seeded starts."""

    problems: List[str] = Field(default_factory=lambda: ["all"])
    solvers: List[SolverVariant] = Field(default_factory=lambda: list(SolverVariant))
    n_starts: int = Field(10, ge=1)
    seed: int = 0
    overrides: Dict[str, Any] = Field(default_factory=dict, description="SolverConfig field overrides")
    output_dir: str = "./results"
    jobs: int = Field(1, ge=1)

    @field_validator("problems", mode="after")
    @classmethod
    def validate_problems(cls, v: List[str]) -> List[str]:
        """Expand "all" and check every name against the registry."""
        from src.problems.registry import get_problem, list_problem_names

        if not v or any(name.lower() == "all" for name in v):
            return list_problem_names()
        for name in v:
            get_problem(name)
        return list(v)

    @field_validator("solvers", mode="after")
    @classmethod
    def validate_solvers(cls, v: List[SolverVariant]) -> List[SolverVariant]:
        if not v:
            raise ValueError("at least one solver is required")
        return v

    def solver_config(self, variant: SolverVariant) -> SolverConfig:
        return SolverConfig.from_settings(**{**self.overrides, "variant": variant})


class Manifest(BaseModel):
    """Everything needed to reproduce a results bundle."""

    spec: ExperimentSpec
    package_version: str
    python_version: str
    numpy_version: str
    created_at: datetime = Field(default_factory=utcnow)
    metric_conventions: Dict[str, str] = Field(default_factory=lambda: dict(METRIC_CONVENTIONS))


class RunSummary(BaseModel):
    """One row of runs.csv."""

    solver: SolverVariant
    problem: str
    start: int
    seed: int
    status: RunStatus
    iterations: int
    f_evals: int
    jac_evals: int
    wall_time: float
    theta: float
    f: List[float]

    @classmethod
    def from_result(cls, result: RunResult) -> "RunSummary":
        return cls(
            solver=result.variant,
            problem=result.problem,
            start=result.start_index if result.start_index is not None else 0,
            seed=result.seed if result.seed is not None else 0,
            status=result.status,
            iterations=result.iterations,
            f_evals=result.f_evals,
            jac_evals=result.jac_evals,
            wall_time=result.wall_time,
            theta=result.theta,
            f=result.f,
        )


class MetricRecord(BaseModel):
    """One (problem, solver) entry of a metric table; flagged marks a worst-case stand-in value."""

    problem: str
    solver: str
    value: float
    flagged: bool = False
