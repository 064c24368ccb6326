"""
Pareto-front archives and front-quality metrics.

Purity compares a solver's points with the reference front of an instance
(the nondominated union over every compared solver). The spread metrics
measure gaps along the front: Gamma is the largest gap, Delta the
uniformity of the gaps relative to their mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

MATCH_TOLERANCE = 1e-10

# (solver, problem, start index) of the run that produced a point
Provenance = Tuple[str, str, int]


class MetricError(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class EmptyFront(MetricError):
    """A solver produced no points for an instance."""


class DegenerateFront(MetricError):
    """Fewer than two points; spread is undefined."""


@dataclass
class FrontArchive:
    """Objective vectors of one instance, row-wise, with optional provenance per row."""

    points: np.ndarray
    provenance: List[Optional[Provenance]] = field(default_factory=list)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1) if pts.size else pts.reshape(0, 0)
        self.points = pts
        if not self.provenance:
            self.provenance = [None] * len(self)
        elif len(self.provenance) != len(self):
            raise ValueError("provenance must have one entry per point")

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def m(self) -> int:
        return int(self.points.shape[1])

    @classmethod
    def empty(cls, m: int) -> "FrontArchive":
        return cls(np.zeros((0, m)))

    def union(self, *others: "FrontArchive") -> "FrontArchive":
        parts = [self, *others]
        non_empty = [a for a in parts if len(a)]
        if not non_empty:
            return FrontArchive.empty(self.m)
        points = np.vstack([a.points for a in non_empty])
        provenance = [prov for a in non_empty for prov in a.provenance]
        return FrontArchive(points, provenance)


def dominates(a: np.ndarray, b: np.ndarray) -> bool:
    """a <= b componentwise with at least one strict inequality."""
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_filter(
    points: Iterable[Sequence[float]] | np.ndarray,
    provenance: Optional[Sequence[Optional[Provenance]]] = None,
) -> FrontArchive:
    """
    Keep the mutually nondominated points, deduplicated exactly.

    The first occurrence of a duplicated vector keeps its provenance; the
    result is sorted lexicographically by objective vector.

    Args:
        points: Objective vectors, shape (N, m).
        provenance: One entry per input point, optional.

    Returns:
        FrontArchive of the nondominated points.
    """
    P = np.asarray(points, dtype=float)
    if P.size == 0:
        return FrontArchive.empty(P.shape[1] if P.ndim == 2 else 0)
    P = np.atleast_2d(P)
    prov = list(provenance) if provenance is not None else [None] * P.shape[0]
    if not np.all(np.isfinite(P)):
        raise ValueError("front points must be finite")

    # Exact dedupe keeping first occurrences
    _, first = np.unique(P, axis=0, return_index=True)
    keep_idx = np.sort(first)
    P, prov = P[keep_idx], [prov[i] for i in keep_idx]

    leq = np.all(P[:, None, :] <= P[None, :, :], axis=2)
    lt = np.any(P[:, None, :] < P[None, :, :], axis=2)
    # dominated[i] = some row j dominates row i
    dominated = np.any(leq & lt, axis=0)

    P, prov = P[~dominated], [p for p, d in zip(prov, dominated) if not d]
    order = np.lexsort(P.T[::-1])
    return FrontArchive(P[order], [prov[i] for i in order])


def reference_front(fronts: Sequence[FrontArchive]) -> FrontArchive:
    """Nondominated filter of the union of every solver's front."""
    non_empty = [f for f in fronts if len(f)]
    if not non_empty:
        m = fronts[0].m if fronts else 0
        return FrontArchive.empty(m)
    merged = non_empty[0].union(*non_empty[1:])
    return nondominated_filter(merged.points, merged.provenance)


def purity(solver_front: FrontArchive, reference: FrontArchive, tol: float = MATCH_TOLERANCE) -> float:
    """
    Fraction of the solver's points found in the reference front, matching within tol per component.

    Raises:
        EmptyFront: the solver front has no points.
    """
    if len(solver_front) == 0:
        raise EmptyFront("solver front is empty")
    if len(reference) == 0:
        return 0.0
    diff = np.abs(solver_front.points[:, None, :] - reference.points[None, :, :])
    matched = np.any(np.all(diff <= tol, axis=2), axis=1)
    return float(np.count_nonzero(matched)) / len(solver_front)


def extreme_points(front: FrontArchive) -> np.ndarray:
    """Row j is the point minimizing objective j (ties broken lexicographically)."""
    if len(front) == 0:
        raise EmptyFront("no extreme points of an empty front")
    rows = []
    for j in range(front.m):
        keys = np.column_stack((front.points[:, j], front.points))
        idx = np.lexsort(keys.T[::-1])[0]
        rows.append(front.points[idx])
    return np.array(rows)


def _delta(gaps: np.ndarray, d0: float, dN: float) -> float:
    mean = float(np.mean(gaps)) if gaps.size else 0.0
    numerator = d0 + dN + float(np.sum(np.abs(gaps - mean)))
    denominator = d0 + dN + gaps.size * mean
    if denominator <= 0.0:
        return 0.0
    return numerator / denominator


def _spread_biobjective(P: np.ndarray, extremes: np.ndarray) -> Tuple[float, float]:
    P = P[np.lexsort(P.T[::-1])]
    gaps = np.linalg.norm(np.diff(P, axis=0), axis=1)
    d0 = float(np.linalg.norm(P[0] - extremes[0]))
    dN = float(np.linalg.norm(P[-1] - extremes[1]))
    gamma = max(d0, dN, float(np.max(gaps)))
    return gamma, _delta(gaps, d0, dN)


def _spread_per_objective(P: np.ndarray, extremes: np.ndarray) -> Tuple[float, float]:
    gammas, deltas = [], []
    for j in range(P.shape[1]):
        values = np.sort(P[:, j])
        lower, upper = float(np.min(extremes[:, j])), float(np.max(extremes[:, j]))
        gaps = np.diff(values)
        d0 = max(0.0, float(values[0]) - lower)
        dN = max(0.0, upper - float(values[-1]))
        gammas.append(max(d0, dN, float(np.max(gaps))))
        deltas.append(_delta(gaps, d0, dN))
    return max(gammas), max(deltas)


def spread_metrics(front: FrontArchive, extremes: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """
    Gamma and Delta spread of a front.

    For two objectives the points are sorted by F_1 and gaps are Euclidean;
    the outer gaps run to the extreme points (row 0 minimizes F_1, row 1
    minimizes F_2). With more objectives the gaps are taken per objective
    along each sorted coordinate and the worst objective is reported.

    Args:
        front: Solver front.
        extremes: Extreme points of the instance's reference front; the
            front's own extremes when omitted.

    Returns:
        (gamma, delta)

    Raises:
        DegenerateFront: fewer than two distinct points.
    """
    P = np.unique(front.points, axis=0) if len(front) else front.points
    if P.shape[0] < 2:
        raise DegenerateFront(f"spread needs at least 2 points, got {P.shape[0]}")
    ext = extreme_points(FrontArchive(P)) if extremes is None else np.atleast_2d(np.asarray(extremes, dtype=float))
    if P.shape[1] == 2:
        return _spread_biobjective(P, ext)
    return _spread_per_objective(P, ext)
