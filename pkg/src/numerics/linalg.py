"""
Dense vector/matrix arithmetic for small problems (n <= 30).

Vectors are 1-D float64 numpy arrays, symmetric matrices are 2-D float64
arrays kept exactly symmetric by `symmetrize`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve

from src.optimization.errors import NonFiniteValue, NotPositiveDefinite

# A pivot below this fraction of the largest diagonal entry is indefinite
PIVOT_TOLERANCE = 1e-14


def as_vector(values, name: str = "vector") -> np.ndarray:
    """Copy `values` into a finite 1-D float64 array."""
    v = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue(f"{name} has non-finite entries")
    return v


def symmetrize(A: np.ndarray) -> np.ndarray:
    """Return (A + A^T) / 2 as a new array."""
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + A.T)


@dataclass(frozen=True)
class CholeskyFactor:
    """Lower-triangular L with A = L L^T."""

    lower: np.ndarray

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve A z = b by forward and back substitution."""
        return cho_solve((self.lower, True), np.asarray(b, dtype=float), check_finite=False)

    def logdet(self) -> float:
        """ln det(A) from the factor diagonal."""
        return 2.0 * float(np.sum(np.log(np.diag(self.lower))))

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T


def cholesky(A: np.ndarray) -> CholeskyFactor:
    """
    Factor a symmetric positive definite matrix.

    Args:
        A: Symmetric n x n array, n >= 1.

    Returns:
        CholeskyFactor holding L with A = L L^T.

    Raises:
        NotPositiveDefinite: when a pivot is <= 1e-14 * max diagonal entry.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise ValueError(f"cholesky expects a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NotPositiveDefinite("matrix has non-finite entries")

    max_diag = float(np.max(np.diag(A)))
    if max_diag <= 0.0:
        raise NotPositiveDefinite(f"largest diagonal entry {max_diag:.3e} is not positive")
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefinite(f"factorization failed: {e}") from e

    pivots = np.diag(L) ** 2
    if np.min(pivots) <= PIVOT_TOLERANCE * max_diag:
        raise NotPositiveDefinite(
            f"pivot {np.min(pivots):.3e} below {PIVOT_TOLERANCE:.0e} * max diagonal {max_diag:.3e}"
        )
    return CholeskyFactor(lower=L)


def solve_spd(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A z = b for SPD A via Cholesky."""
    return cholesky(A).solve(b)


def project_simplex(v: np.ndarray) -> np.ndarray:
    """
    Euclidean projection onto {w : sum(w) = 1, w >= 0}.

    Sort-and-threshold algorithm (Duchi et al. 2008). Points already on the
    simplex (to 1e-14) are returned unchanged, which makes the projection
    idempotent bit for bit.
    """
    v = np.asarray(v, dtype=float).reshape(-1)
    m = v.shape[0]
    if m < 1:
        raise ValueError("cannot project an empty vector")
    if np.all(v >= 0.0) and abs(float(np.sum(v)) - 1.0) <= 1e-14:
        return v.copy()

    u = -np.sort(-v, kind="stable")
    cssv = np.cumsum(u)
    # number of positive components of the projection
    support = np.nonzero(u * np.arange(1, m + 1) > (cssv - 1.0))[0][-1]
    tau = (cssv[support] - 1.0) / (support + 1.0)
    w = np.maximum(v - tau, 0.0)
    return w / np.sum(w)
