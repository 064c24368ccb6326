"""
Step-size searches along a descent direction d with D(x, d) < 0.

wolfe_search returns a step satisfying, for every objective j,

    F_j(x + a d) <= F_j(x) + rho a D(x, d)          (sufficient decrease)
    D(x + a d, d) >= sigma D(x, d)                  (curvature)

and armijo_search only the first condition. Both try a = 1 first.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.models.schemas import WolfeParams
from src.optimization.errors import LineSearchFailed, NonFiniteValue
from src.problems.base import EvalCounter, Problem, jacobian, objectives

logger = logging.getLogger(__name__)

# Bracket widths below this fraction of the step are not worth splitting
MIN_RELATIVE_WIDTH = 1e-16
INTERPOLATION_MARGIN = 0.1


@dataclass(frozen=True)
class LineSearchResult:
    """Accepted step with the objective values (and Jacobian, when computed) at x + alpha d."""

    alpha: float
    trial_count: int
    unit_step_accepted: bool
    f_new: np.ndarray
    jac_new: Optional[np.ndarray] = None


def merit(F_trial: np.ndarray, F_x: np.ndarray, alpha: float, Dxd: float, rho: float) -> Tuple[float, int]:
    """psi(alpha) = max_j [F_j(x + alpha d) - F_j(x) - rho alpha D(x, d)] and its active index."""
    excess = F_trial - F_x - rho * alpha * Dxd
    j = int(np.argmax(excess))
    return float(excess[j]), j


def _interpolate(lo: float, psi_lo: float, slope_lo: float, hi: float, psi_hi: Optional[float]) -> float:
    """Minimizer of the quadratic through (lo, psi_lo, slope_lo) and (hi, psi_hi), kept inside the bracket."""
    width = hi - lo
    midpoint = lo + 0.5 * width
    if psi_hi is None or not np.isfinite(psi_hi):
        return midpoint
    c = (psi_hi - psi_lo - slope_lo * width) / (width * width)
    if c <= 0.0:
        return midpoint
    t = lo - slope_lo / (2.0 * c)
    if not lo + INTERPOLATION_MARGIN * width <= t <= hi - INTERPOLATION_MARGIN * width:
        return midpoint
    return t


def wolfe_search(
    p: Problem,
    x: np.ndarray,
    d: np.ndarray,
    F_x: np.ndarray,
    Dxd: float,
    params: WolfeParams,
    counter: Optional[EvalCounter] = None,
) -> LineSearchResult:
    """
    Bracket and zoom on the merit psi until both Wolfe conditions hold.

    Args:
        p: Problem.
        x: Current iterate.
        d: Descent direction.
        F_x: F(x).
        Dxd: D(x, d), must be negative.
        params: rho, sigma, alpha_max and the trial limit.
        counter: Evaluation counters of the calling run.

    Returns:
        LineSearchResult including F and JF at the accepted point.

    Raises:
        LineSearchFailed: no acceptable step within max_trials.
    """
    if not Dxd < 0.0:
        raise LineSearchFailed(f"d is not a descent direction (D(x, d) = {Dxd:.3e})")

    rho, sigma = params.rho, params.sigma
    lo, psi_lo, slope_lo = 0.0, 0.0, (1.0 - rho) * Dxd
    hi: Optional[float] = None
    psi_hi: Optional[float] = None
    alpha = min(1.0, params.alpha_max)

    for trial in range(1, params.max_trials + 1):
        x_trial = x + alpha * d
        try:
            F_trial = objectives(p, x_trial, counter)
        except NonFiniteValue:
            # Outside the domain: treat as a step that is too long
            hi, psi_hi = alpha, None
        else:
            psi, j = merit(F_trial, F_x, alpha, Dxd, rho)
            if psi > 0.0:
                hi, psi_hi = alpha, psi
            else:
                try:
                    J_trial = jacobian(p, x_trial, counter)
                except NonFiniteValue:
                    hi, psi_hi = alpha, None
                else:
                    slopes = J_trial @ d
                    if float(np.max(slopes)) >= sigma * Dxd:
                        logger.debug(f"wolfe step alpha={alpha:.6g} accepted after {trial} trial(s)")
                        return LineSearchResult(
                            alpha=alpha,
                            trial_count=trial,
                            unit_step_accepted=(trial == 1 and alpha == 1.0),
                            f_new=F_trial,
                            jac_new=J_trial,
                        )
                    lo, psi_lo, slope_lo = alpha, psi, float(slopes[j]) - rho * Dxd

        if hi is None:
            if lo >= params.alpha_max:
                raise LineSearchFailed(f"curvature condition not met up to alpha_max={params.alpha_max}")
            alpha = min(2.0 * lo, params.alpha_max)
            continue

        if hi - lo <= MIN_RELATIVE_WIDTH * max(1.0, hi):
            raise LineSearchFailed(f"bracket [{lo:.3e}, {hi:.3e}] collapsed")
        alpha = _interpolate(lo, psi_lo, slope_lo, hi, psi_hi)

    raise LineSearchFailed(f"no Wolfe step within {params.max_trials} trials (bracket [{lo:.3e}, {hi}])")


def armijo_search(
    p: Problem,
    x: np.ndarray,
    d: np.ndarray,
    F_x: np.ndarray,
    Dxd: float,
    params: WolfeParams,
    counter: Optional[EvalCounter] = None,
) -> LineSearchResult:
    """
    Backtracking from alpha = 1 until sufficient decrease holds for every objective.

    Trial steps shrink by quadratic interpolation on psi, safeguarded to
    [0.1 alpha, 0.5 alpha]. The Jacobian at the accepted point is not computed.
    """
    if not Dxd < 0.0:
        raise LineSearchFailed(f"d is not a descent direction (D(x, d) = {Dxd:.3e})")

    rho = params.rho
    slope0 = (1.0 - rho) * Dxd
    alpha = min(1.0, params.alpha_max)

    for trial in range(1, params.max_trials + 1):
        try:
            F_trial = objectives(p, x + alpha * d, counter)
        except NonFiniteValue:
            alpha *= 0.5
            continue
        psi, _ = merit(F_trial, F_x, alpha, Dxd, rho)
        if psi <= 0.0:
            return LineSearchResult(
                alpha=alpha,
                trial_count=trial,
                unit_step_accepted=(trial == 1 and alpha == 1.0),
                f_new=F_trial,
            )
        denom = 2.0 * (psi - slope0 * alpha)
        t = -slope0 * alpha * alpha / denom if denom > 0.0 else 0.5 * alpha
        alpha = float(np.clip(t, 0.1 * alpha, 0.5 * alpha))

    raise LineSearchFailed(f"no Armijo step within {params.max_trials} trials")
