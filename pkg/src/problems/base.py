"""
Problem abstraction: objectives F: R^n -> R^m, their Jacobian, and a start box.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.models.schemas import EvalCounts, ProblemMetadata
from src.optimization.errors import NonFiniteValue
from src.problems.sampling import SplitMix64


@dataclass
class EvalCounter:
    """Evaluation counts of one run. Only ever incremented."""

    f_evals: int = 0
    jac_evals: int = 0

    def snapshot(self) -> EvalCounts:
        return EvalCounts(f_evals=self.f_evals, jac_evals=self.jac_evals)


class Problem(ABC):
    """
    Base class of the benchmark problems.

    Subclasses implement `eval_F` and `eval_JF` on a 1-D array of length n.
    Instances are immutable and can be shared between runs; per-run state
    lives in an EvalCounter.
    """

    def __init__(self, meta: ProblemMetadata):
        self.meta = meta
        self.lower = np.array(meta.lower, dtype=float)
        self.upper = np.array(meta.upper, dtype=float)

    @property
    def name(self) -> str:
        return self.meta.name

    @property
    def n(self) -> int:
        return self.meta.n

    @property
    def m(self) -> int:
        return self.meta.m

    @property
    def convex(self) -> bool:
        return self.meta.convex

    def in_domain(self, x: np.ndarray) -> bool:
        """Whether x lies where the formulas are defined."""
        return True

    @abstractmethod
    def eval_F(self, x: np.ndarray) -> np.ndarray:
        """Objective vector in R^m."""

    @abstractmethod
    def eval_JF(self, x: np.ndarray) -> np.ndarray:
        """Jacobian, shape (m, n); row j is the gradient of F_j."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, n={self.n}, m={self.m})"


def _check_point(p: Problem, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != p.n:
        raise ValueError(f"{p.name}: expected x of length {p.n}, got {x.shape[0]}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteValue(f"{p.name}: iterate has non-finite entries")
    return x


def objectives(p: Problem, x: np.ndarray, counter: Optional[EvalCounter] = None) -> np.ndarray:
    """
    Evaluate F(x) only.

    Raises:
        NonFiniteValue: x is outside the problem's domain or F(x) has NaN/Inf.
    """
    x = _check_point(p, x)
    if counter is not None:
        counter.f_evals += 1
    if not p.in_domain(x):
        raise NonFiniteValue(f"{p.name}: x left the domain of the objectives")
    with np.errstate(all="ignore"):
        F = np.asarray(p.eval_F(x), dtype=float).reshape(-1)
    if not np.all(np.isfinite(F)):
        raise NonFiniteValue(f"{p.name}: F(x) is not finite")
    return F


def jacobian(p: Problem, x: np.ndarray, counter: Optional[EvalCounter] = None) -> np.ndarray:
    """Evaluate JF(x) only, shape (m, n)."""
    x = _check_point(p, x)
    if counter is not None:
        counter.jac_evals += 1
    if not p.in_domain(x):
        raise NonFiniteValue(f"{p.name}: x left the domain of the objectives")
    with np.errstate(all="ignore"):
        J = np.asarray(p.eval_JF(x), dtype=float).reshape(p.m, p.n)
    if not np.all(np.isfinite(J)):
        raise NonFiniteValue(f"{p.name}: JF(x) is not finite")
    return J


def evaluate(p: Problem, x: np.ndarray, counter: Optional[EvalCounter] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluate F(x) and JF(x), incrementing both counters.

    Args:
        p: Problem.
        x: Point of length p.n.
        counter: Per-run counters, optional.

    Returns:
        (F(x) in R^m, JF(x) in R^{m x n})
    """
    return objectives(p, x, counter), jacobian(p, x, counter)


def random_start(p: Problem, seed: int) -> np.ndarray:
    """Uniform sample from the start box, reproducible from `seed` alone."""
    rng = SplitMix64(seed)
    u = np.array([rng.next_double() for _ in range(p.n)])
    return p.lower + u * (p.upper - p.lower)


def finite_difference_jacobian(p: Problem, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian, used to cross-check eval_JF."""
    x = np.asarray(x, dtype=float)
    J = np.zeros((p.m, p.n))
    for i in range(p.n):
        e = np.zeros(p.n)
        e[i] = h
        J[:, i] = (p.eval_F(x + e) - p.eval_F(x - e)) / (2.0 * h)
    return J
