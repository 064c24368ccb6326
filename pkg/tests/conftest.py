import warnings
from typing import Callable, Sequence

import numpy as np
import pytest

from src.models.schemas import ProblemMetadata, SolverConfig
from src.problems.base import Problem

warnings.simplefilter("ignore", RuntimeWarning)


class FunctionProblem(Problem):
    """Problem built from plain callables, for small hand-checked cases."""

    def __init__(self, meta: ProblemMetadata, F: Callable, JF: Callable):
        super().__init__(meta)
        self._F = F
        self._JF = JF

    def eval_F(self, x):
        return np.asarray(self._F(x), dtype=float)

    def eval_JF(self, x):
        return np.asarray(self._JF(x), dtype=float)


def build_problem(
    name: str,
    F: Callable,
    JF: Callable,
    n: int,
    m: int,
    lower: Sequence[float] = None,
    upper: Sequence[float] = None,
) -> FunctionProblem:
    meta = ProblemMetadata(
        name=name,
        n=n,
        m=m,
        convex=True,
        lower=list(lower) if lower is not None else [-1.0] * n,
        upper=list(upper) if upper is not None else [1.0] * n,
    )
    return FunctionProblem(meta, F, JF)


@pytest.fixture
def make_problem():
    return build_problem


@pytest.fixture
def two_parabolas():
    """F1 = x^2, F2 = (x - 1)^2 on the real line; Pareto set [0, 1]."""
    return build_problem(
        "TWO_PARABOLAS",
        lambda x: [x[0] ** 2, (x[0] - 1.0) ** 2],
        lambda x: [[2.0 * x[0]], [2.0 * (x[0] - 1.0)]],
        n=1,
        m=2,
    )


@pytest.fixture
def quartic():
    return build_problem("QUARTIC", lambda x: [x[0] ** 4], lambda x: [[4.0 * x[0] ** 3]], n=1, m=1)


@pytest.fixture
def solver_config():
    """SolverConfig factory on top of the built-in defaults."""

    def factory(**overrides) -> SolverConfig:
        return SolverConfig(**overrides)

    return factory


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_spd(rng: np.random.Generator, n: int, low: float = 0.5) -> np.ndarray:
    A = rng.uniform(-1.0, 1.0, size=(n, n))
    return A @ A.T + low * np.eye(n)
