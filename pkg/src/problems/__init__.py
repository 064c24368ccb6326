"""Benchmark problems, random starts and the problem registry."""

from src.problems.base import (
    EvalCounter,
    Problem,
    evaluate,
    finite_difference_jacobian,
    jacobian,
    objectives,
    random_start,
)
from src.problems.registry import UnknownProblemError, get_problem, list_problem_names, list_problems

__all__ = [
    "EvalCounter",
    "Problem",
    "UnknownProblemError",
    "evaluate",
    "finite_difference_jacobian",
    "get_problem",
    "jacobian",
    "list_problem_names",
    "list_problems",
    "objectives",
    "random_start",
]
