"""
Performance profiles over a (instance x solver) cost table.

rho_s(tau) is the fraction of instances on which solver s is within a
factor tau of the best solver. Failed entries (inf or NaN) never count
as solved but stay in the denominator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

MIN_METRIC_COST = 1e-16

Breakpoints = List[Tuple[float, float]]


@dataclass
class ProfileTable:
    """costs[i, s] is the cost of solver s on instance i; inf or NaN marks a failure."""

    solvers: List[str]
    instances: List[str]
    costs: np.ndarray

    def __post_init__(self):
        self.costs = np.asarray(self.costs, dtype=float).reshape(len(self.instances), len(self.solvers))
        ok = np.isfinite(self.costs)
        if np.any(self.costs[ok] <= 0.0):
            raise ValueError("successful costs must be positive")

    def ratios(self) -> np.ndarray:
        """r[i, s] = cost[i, s] / min_s cost[i, s]; inf for failures and for instances nobody solved."""
        costs = np.where(np.isfinite(self.costs), self.costs, np.inf)
        best = np.min(costs, axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            r = costs / best
        return np.where(np.isfinite(r), r, np.inf)


def performance_profile(table: ProfileTable) -> Dict[str, Breakpoints]:
    """
    Breakpoints (tau, rho_s(tau)) of every solver's step function, sorted by tau.

    Example:
        >>> t = ProfileTable(["A", "B"], ["p1", "p2"], [[1, 2], [4, 2]])
        >>> performance_profile(t)["A"]
        [(1.0, 0.5), (2.0, 1.0)]
    """
    r = table.ratios()
    n_instances = r.shape[0]
    profiles: Dict[str, Breakpoints] = {}
    for s, solver in enumerate(table.solvers):
        finite = np.sort(r[:, s][np.isfinite(r[:, s])])
        taus = np.unique(finite)
        profiles[solver] = [
            (float(tau), float(np.count_nonzero(finite <= tau)) / n_instances) for tau in taus
        ]
    return profiles


def rho_at(breakpoints: Breakpoints, tau: float) -> float:
    """Evaluate the step function at tau (0 before the first breakpoint)."""
    value = 0.0
    for t, rho in breakpoints:
        if t <= tau:
            value = rho
        else:
            break
    return value


def metric_cost(metric: str, value: float, flagged: bool = False) -> float:
    """
    Turn a front metric into a profile cost (lower is better).

    Purity is inverted, so purity 0 becomes a failure; Gamma and Delta are
    used directly, floored at MIN_METRIC_COST. Flagged values are failures.
    """
    if flagged or not np.isfinite(value):
        return float("inf")
    if metric == "purity":
        return 1.0 / value if value > 0.0 else float("inf")
    if metric in ("gamma", "delta"):
        return max(float(value), MIN_METRIC_COST)
    raise ValueError(f"unknown metric {metric!r}")


def metric_profile_table(
    metric: str,
    values: Mapping[Tuple[str, str], Tuple[float, bool]],
    problems: Sequence[str],
    solvers: Sequence[str],
) -> ProfileTable:
    """Build the cost table of a metric profile from {(problem, solver): (value, flagged)}."""
    costs = np.full((len(problems), len(solvers)), np.inf)
    for i, problem in enumerate(problems):
        for s, solver in enumerate(solvers):
            if (problem, solver) in values:
                value, flagged = values[(problem, solver)]
                costs[i, s] = metric_cost(metric, value, flagged)
    return ProfileTable(list(solvers), list(problems), costs)
