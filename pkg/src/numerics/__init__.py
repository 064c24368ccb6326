"""Dense linear algebra helpers shared by the optimization modules."""

from src.numerics.linalg import (
    CholeskyFactor,
    as_vector,
    cholesky,
    project_simplex,
    solve_spd,
    symmetrize,
)

__all__ = [
    "CholeskyFactor",
    "as_vector",
    "cholesky",
    "project_simplex",
    "solve_spd",
    "symmetrize",
]
