"""
Outer iteration of the quasi-Newton drivers.

Every variant runs the same loop, solve -> test -> search -> update:

1. solve the direction subproblem with the current HessianSet (B^0 = I),
2. stop when |theta(x^k)| (or |d_sd(x^k)|) is within theta_tol,
3. line search from alpha = 1 (Wolfe, or Armijo for the cautious variant),
4. update every B_j with the variant's rule.

Numerical exceptions end the run with a status; they never escape `run`.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.models.enums import CriticalityMeasure, RChoice, RunStatus, SolverVariant, TraceLevel
from src.models.schemas import IterationRecord, RunResult, SolverConfig, UpdateDiagnostics, WolfeParams
from src.numerics.linalg import solve_spd
from src.optimization.errors import (
    CurvatureViolation,
    DegenerateStep,
    LineSearchFailed,
    NonFiniteValue,
    NotPositiveDefinite,
    SubproblemStalled,
)
from src.optimization.linesearch import armijo_search, wolfe_search
from src.optimization.subproblem import (
    DirectionSolution,
    SteepestDescentSolution,
    descent_value,
    solve_direction,
    solve_steepest,
)
from src.optimization.updates import (
    CorrectionInputs,
    HessianSet,
    apply_bfgs_wolfe,
    apply_cautious,
    apply_corrected,
    bfgs_update,
    skipped_diagnostics,
)
from src.problems.base import EvalCounter, Problem, evaluate, jacobian, random_start
from src.problems.registry import get_problem
from src.problems.sampling import start_seed
from src.utils.logger import logger as package_logger  # noqa: F401  installs the handlers
from src.utils.time import Stopwatch

logger = logging.getLogger(__name__)


@dataclass
class _RunState:
    x: np.ndarray
    F: np.ndarray
    J: np.ndarray
    hessians: HessianSet
    theta: float = float("nan")
    lam: Optional[np.ndarray] = None
    trace: List[IterationRecord] = field(default_factory=list)


def _needs_steepest(cfg: SolverConfig) -> bool:
    return (
        cfg.trace_level == TraceLevel.FULL
        or cfg.criticality_measure == CriticalityMeasure.STEEPEST
        or (cfg.variant == SolverVariant.GLOBAL_BFGS and cfg.r_choice == RChoice.CHOICE1)
    )


def _record(
    k: int,
    state: _RunState,
    sol: DirectionSolution,
    sd: Optional[SteepestDescentSolution],
    counter: EvalCounter,
    cfg: SolverConfig,
    descent: Optional[float] = None,
    alpha: Optional[float] = None,
    unit_step: Optional[bool] = None,
    diag: Optional[UpdateDiagnostics] = None,
) -> None:
    if cfg.trace_level == TraceLevel.NONE:
        return
    full = cfg.trace_level == TraceLevel.FULL
    state.trace.append(
        IterationRecord(
            k=k,
            x=state.x.tolist(),
            f=state.F.tolist(),
            theta=sol.theta,
            d_norm=sol.d_norm,
            descent=descent,
            d_sd_norm=sd.norm if (full and sd is not None) else None,
            direction=sol.d.tolist() if (full and alpha is not None) else None,
            alpha=alpha,
            unit_step=unit_step,
            update_diag=diag,
            evals=counter.snapshot(),
        )
    )


def _update(
    state: _RunState,
    cfg: SolverConfig,
    s: np.ndarray,
    J_new: np.ndarray,
    sol: DirectionSolution,
    sd: Optional[SteepestDescentSolution],
) -> UpdateDiagnostics:
    """
    Variant-specific update of the HessianSet.

    The cautious rule keeps B where its update is undefined and records the
    skip. For the other variants the positivity of the curvature pair is
    part of the method, so CurvatureViolation, DegenerateStep and
    NotPositiveDefinite propagate and end the run.
    """
    y = J_new - state.J
    with_psi = cfg.trace_level == TraceLevel.FULL
    try:
        if cfg.variant == SolverVariant.GLOBAL_BFGS:
            mu = sd.lam_sd if (cfg.r_choice == RChoice.CHOICE1 and sd is not None) else sol.lam
            inp = CorrectionInputs(
                s=s,
                y=y,
                mu=mu,
                vartheta=cfg.vartheta,
                grad_current=state.J,
                zero_correction=cfg.zero_correction,
            )
            state.hessians, diag = apply_corrected(state.hessians, inp, with_psi=with_psi)
        elif cfg.variant == SolverVariant.BFGS_WOLFE:
            state.hessians, diag = apply_bfgs_wolfe(state.hessians, s, y, state.J, J_new, with_psi=with_psi)
        else:
            state.hessians, diag = apply_cautious(
                state.hessians, s, y, sol.theta, cfg.epsilon_cautious, with_psi=with_psi
            )
    except (CurvatureViolation, DegenerateStep, NotPositiveDefinite) as e:
        if cfg.variant != SolverVariant.CAUTIOUS_BFGS_ARMIJO:
            raise
        logger.debug(f"cautious update skipped, approximations kept: {e.reason}")
        return skipped_diagnostics(s, y)
    return diag


def run(
    p: Problem,
    x0: np.ndarray,
    cfg: SolverConfig,
    start_index: Optional[int] = None,
    seed: Optional[int] = None,
) -> RunResult:
    """
    Run one solver variant from x0.

    Args:
        p: Problem.
        x0: Start point of length p.n.
        cfg: Solver configuration (variant, line-search and update parameters).
        start_index: Position in a multistart sweep, recorded in the result.
        seed: Seed that produced x0, recorded in the result.

    Returns:
        RunResult; on failure it carries the last accepted iterate.
    """
    clock = Stopwatch()
    counter = EvalCounter()
    x = np.asarray(x0, dtype=float).reshape(-1).copy()
    if x.shape[0] != p.n:
        raise ValueError(f"{p.name}: expected x0 of length {p.n}, got {x.shape[0]}")

    def finish(state_x, state_F, theta, status, iterations, message=None, trace=None) -> RunResult:
        result = RunResult(
            problem=p.name,
            variant=cfg.variant,
            status=status,
            x=np.asarray(state_x, dtype=float).tolist(),
            f=np.asarray(state_F, dtype=float).tolist(),
            theta=theta,
            iterations=iterations,
            wall_time=clock.elapsed(),
            f_evals=counter.f_evals,
            jac_evals=counter.jac_evals,
            start_index=start_index,
            seed=seed,
            message=message,
            trace=trace or [],
        )
        logger.info(
            f"{p.name} {cfg.variant.value} start={start_index} -> {status.value} "
            f"after {iterations} iterations (theta={theta:.3e}, f_evals={counter.f_evals}, "
            f"jac_evals={counter.jac_evals}, {result.wall_time:.3f}s)"
        )
        return result

    try:
        F, J = evaluate(p, x, counter)
    except NonFiniteValue as e:
        return finish(x, np.full(p.m, np.nan), float("nan"), RunStatus.NON_FINITE_VALUE, 0, e.reason)

    state = _RunState(x=x, F=F, J=J, hessians=HessianSet.identity(p.m, p.n))
    params: WolfeParams = cfg.wolfe_params()
    search = armijo_search if cfg.variant == SolverVariant.CAUTIOUS_BFGS_ARMIJO else wolfe_search
    need_sd = _needs_steepest(cfg)
    status = RunStatus.MAX_ITERS
    message: Optional[str] = None
    k = 0

    for k in range(cfg.max_iters + 1):
        try:
            lambda0 = state.lam if cfg.warm_start else None
            sol = solve_direction(state.J, state.hessians, lambda0=lambda0, max_iters=cfg.dual_max_iters)
            sd = solve_steepest(state.J, max_iters=cfg.dual_max_iters) if need_sd else None
        except (SubproblemStalled, NotPositiveDefinite) as e:
            status, message = RunStatus.SUBPROBLEM_STALLED, e.reason
            break
        state.theta, state.lam = sol.theta, sol.lam

        measure = sd.norm if cfg.criticality_measure == CriticalityMeasure.STEEPEST else abs(sol.theta)
        if measure <= cfg.theta_tol:
            _record(k, state, sol, sd, counter, cfg)
            status = RunStatus.CONVERGED
            if cfg.criticality_measure == CriticalityMeasure.STEEPEST:
                message = "converged on the steepest-descent norm"
            break
        if k == cfg.max_iters:
            _record(k, state, sol, sd, counter, cfg)
            status = RunStatus.MAX_ITERS
            break

        Dxd = descent_value(state.J, sol.d)
        try:
            step = search(p, state.x, sol.d, state.F, Dxd, params, counter)
            s = step.alpha * sol.d
            x_new = state.x + s
            J_new = step.jac_new if step.jac_new is not None else jacobian(p, x_new, counter)
        except LineSearchFailed as e:
            _record(k, state, sol, sd, counter, cfg, descent=Dxd)
            status, message = RunStatus.LINE_SEARCH_FAILED, e.reason
            break
        except NonFiniteValue as e:
            _record(k, state, sol, sd, counter, cfg, descent=Dxd)
            status, message = RunStatus.NON_FINITE_VALUE, e.reason
            break

        try:
            diag = _update(state, cfg, s, J_new, sol, sd)
        except (CurvatureViolation, DegenerateStep, NotPositiveDefinite) as e:
            _record(k, state, sol, sd, counter, cfg, Dxd, step.alpha, step.unit_step_accepted)
            status, message = RunStatus.UPDATE_FAILED, f"{cfg.variant.value} update failed: {e.reason}"
            logger.error(f"{p.name}: {message}")
            break
        _record(k, state, sol, sd, counter, cfg, Dxd, step.alpha, step.unit_step_accepted, diag)
        state.x, state.F, state.J = x_new, step.f_new, J_new

    return finish(state.x, state.F, state.theta, status, k, message, state.trace)


def _run_start(problem_name: str, index: int, seed: int, cfg: SolverConfig) -> RunResult:
    p = get_problem(problem_name)
    s = start_seed(seed, index)
    return run(p, random_start(p, s), cfg, start_index=index, seed=s)


def run_multistart(
    p: Problem,
    n_starts: int,
    seed: int,
    cfg: SolverConfig,
    jobs: int = 1,
) -> List[RunResult]:
    """
    One run per seeded start; start i uses seed + i.

    With jobs > 1 the runs go to a process pool that rebuilds the problem
    from the registry by name. Results are returned in start order either way.
    """
    if n_starts < 1:
        raise ValueError(f"n_starts must be at least 1, got {n_starts}")
    indices = range(n_starts)
    if jobs <= 1:
        results = []
        for i in indices:
            s = start_seed(seed, i)
            results.append(run(p, random_start(p, s), cfg, start_index=i, seed=s))
        return results

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(
            pool.map(_run_start, [p.name] * n_starts, indices, [seed] * n_starts, [cfg] * n_starts)
        )


@dataclass
class TextbookTrace:
    """Iterates and step sizes of the textbook single-objective BFGS driver."""

    xs: List[np.ndarray] = field(default_factory=list)
    alphas: List[float] = field(default_factory=list)


def textbook_bfgs(
    p: Problem,
    x0: np.ndarray,
    iters: int,
    params: Optional[WolfeParams] = None,
    tol: float = 0.0,
) -> TextbookTrace:
    """
    Classical BFGS for m = 1: d = -B^{-1} grad f, Wolfe step, standard update.

    Serves as the reference the multiobjective driver must reduce to when
    the correction term is switched off.
    """
    if p.m != 1:
        raise ValueError(f"textbook BFGS needs a single objective, {p.name} has {p.m}")
    params = params or WolfeParams()
    x = np.asarray(x0, dtype=float).copy()
    F, J = evaluate(p, x)
    B = np.eye(p.n)
    trace = TextbookTrace(xs=[x.copy()])
    for _ in range(iters):
        g = J[0]
        d = -solve_spd(B, g)
        if 0.5 * abs(float(g @ d)) <= tol:
            break
        step = wolfe_search(p, x, d, F, float(g @ d), params)
        s = step.alpha * d
        x = x + s
        J_new = step.jac_new
        B = bfgs_update(B, s, J_new[0] - g)
        F, J = step.f_new, J_new
        trace.xs.append(x.copy())
        trace.alphas.append(step.alpha)
    return trace
