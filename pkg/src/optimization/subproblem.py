"""
Direction subproblem

    min_d max_j  grad F_j' d + 1/2 d' B_j d

solved through its concave dual over the simplex,

    phi(lam) = -1/2 g(lam)' B(lam)^{-1} g(lam),  g(lam) = sum lam_j grad F_j,  B(lam) = sum lam_j B_j,

whose gradient component j is the model value of objective j at
d(lam) = -B(lam)^{-1} g(lam). The dual is maximized by projected gradient
ascent with Barzilai-Borwein trial steps and Armijo backtracking. When
the ascent stalls short of tolerance the iterate is finished by Newton
steps on the KKT system of a candidate active set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.numerics.linalg import cholesky, project_simplex
from src.optimization.errors import SubproblemStalled
from src.optimization.updates import HessianSet

logger = logging.getLogger(__name__)

DUAL_TOLERANCE = 1e-10
DUAL_MAX_ITERS = 500
ZERO_DIRECTION = 1e-12
ARMIJO_DUAL = 1e-4
MAX_BACKTRACKS = 60
POLISH_STEPS = 30
POLISH_TOLERANCE = 1e-14
SUPPORT_THRESHOLD = 1e-9
# Above this many objectives only two candidate supports are tried
MAX_ENUMERATED = 6


@dataclass(frozen=True)
class DirectionSolution:
    """Solution (d, theta, lambda) of the direction subproblem."""

    d: np.ndarray
    theta: float
    lam: np.ndarray
    iterations: int = 0

    @property
    def d_norm(self) -> float:
        return float(np.linalg.norm(self.d))


@dataclass(frozen=True)
class SteepestDescentSolution:
    """d_sd = -sum lam_sd_j grad F_j; -d_sd is the min-norm point of the gradient hull."""

    d_sd: np.ndarray
    lam_sd: np.ndarray
    iterations: int = 0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.d_sd))


def descent_value(gradients: np.ndarray, d: np.ndarray) -> float:
    """D(x, d) = max_j grad F_j' d."""
    return float(np.max(np.atleast_2d(gradients) @ np.asarray(d, dtype=float)))


def model_values(gradients: np.ndarray, hessians: Optional[HessianSet], d: np.ndarray) -> np.ndarray:
    """grad F_j' d + 1/2 d' B_j d for every j (B_j = I when hessians is None)."""
    G = np.atleast_2d(gradients)
    if hessians is None:
        return G @ d + 0.5 * float(d @ d)
    return G @ d + 0.5 * np.array([d @ B @ d for B in hessians])


class _DualOracle:
    """Evaluates phi, d(lam) and grad phi; B_j = I when hessians is None."""

    def __init__(self, gradients: np.ndarray, hessians: Optional[HessianSet]):
        self.G = np.atleast_2d(np.asarray(gradients, dtype=float))
        self.hessians = hessians
        self.stack = hessians.stack() if hessians is not None else None

    def __call__(self, lam: np.ndarray) -> Tuple[np.ndarray, float, np.ndarray]:
        g = lam @ self.G
        if self.stack is None:
            d = -g
            phi = -0.5 * float(d @ d)
        else:
            B = np.tensordot(lam, self.stack, axes=1)
            d = -cholesky(B).solve(g)
            phi = -0.5 * float(d @ (B @ d))
        return d, phi, model_values(self.G, self.hessians, d)


def _newton_on_support(oracle: _DualOracle, lam: np.ndarray, support: Tuple[int, ...]) -> Optional[np.ndarray]:
    """
    Solve the KKT system of the subproblem with lam_j = 0 off `support`.

    Unknowns are (d, lam_S, t); equations are B(lam) d + g(lam) = 0, equal
    model values t on the support and sum lam_S = 1. Returns the full
    multiplier, or None when Newton breaks down or leaves the simplex.
    """
    G = oracle.G
    m, n = G.shape
    S = list(support)
    k = len(S)
    mats = oracle.stack if oracle.stack is not None else np.broadcast_to(np.eye(n), (m, n, n))

    weights = lam[S]
    lam_s = weights / weights.sum() if weights.sum() > 0.0 else np.full(k, 1.0 / k)
    full = np.zeros(m)
    full[S] = lam_s
    d, _, values = oracle(full)
    t = float(np.max(values[S]))
    scale = 1.0 + float(np.max(np.abs(G)))

    for _ in range(POLISH_STEPS):
        B = np.tensordot(lam_s, mats[S], axes=1)
        slopes = G[S] + mats[S] @ d  # row j = grad of model j at d
        residual = np.concatenate((
            B @ d + lam_s @ G[S],
            G[S] @ d + 0.5 * np.einsum("i,jik,k->j", d, mats[S], d) - t,
            [lam_s.sum() - 1.0],
        ))
        if np.linalg.norm(residual) <= POLISH_TOLERANCE * scale:
            break
        K = np.zeros((n + k + 1, n + k + 1))
        K[:n, :n] = B
        K[:n, n:n + k] = slopes.T
        K[n:n + k, :n] = slopes
        K[n:n + k, n + k] = -1.0
        K[n + k, n:n + k] = 1.0
        step = np.linalg.lstsq(K, -residual, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            return None
        d = d + step[:n]
        lam_s = lam_s + step[n:n + k]
        t += float(step[n + k])

    # Accuracy is judged by the caller on the dual projected gradient
    if np.any(lam_s < -SUPPORT_THRESHOLD) or lam_s.sum() <= 0.0:
        return None
    full = np.zeros(m)
    full[S] = np.maximum(lam_s, 0.0)
    return full / full.sum()


def _candidate_supports(lam: np.ndarray, grad: np.ndarray) -> List[Tuple[int, ...]]:
    """Supports to try, nearest to the support of lam first."""
    m = lam.shape[0]
    current = tuple(int(j) for j in np.flatnonzero(lam > SUPPORT_THRESHOLD))
    if m > MAX_ENUMERATED:
        top = float(np.max(grad))
        near_max = tuple(int(j) for j in np.flatnonzero(grad >= top - SUPPORT_THRESHOLD * (1.0 + abs(top))))
        return list(dict.fromkeys((current, near_max)))
    every = [c for k in range(1, m + 1) for c in combinations(range(m), k)]
    return sorted(every, key=lambda c: (len(set(c) ^ set(current)), c))


def _polish(oracle: _DualOracle, lam: np.ndarray, grad: np.ndarray, tol: float):
    """Exact active-set finish for a dual iterate close to optimal."""
    for support in _candidate_supports(lam, grad):
        cand = _newton_on_support(oracle, lam, support)
        if cand is None:
            continue
        d, phi, grad_c = oracle(cand)
        if float(np.linalg.norm(project_simplex(cand + grad_c) - cand)) <= tol:
            return cand, d, phi
    return None


def _maximize_dual(
    gradients: np.ndarray,
    hessians: Optional[HessianSet],
    lambda0: Optional[np.ndarray],
    max_iters: int,
) -> Tuple[np.ndarray, np.ndarray, float, int]:
    oracle = _DualOracle(gradients, hessians)
    m = oracle.G.shape[0]

    if m == 1:
        lam = np.ones(1)
        d, phi, _ = oracle(lam)
        return lam, d, phi, 0

    if lambda0 is None:
        lam = np.full(m, 1.0 / m)
    else:
        lam = project_simplex(lambda0)

    tol = DUAL_TOLERANCE * (1.0 + float(np.max(np.linalg.norm(oracle.G, axis=1))))
    d, phi, grad = oracle(lam)
    step = 1.0 / max(1.0, float(np.max(np.abs(grad))))

    it = 0
    while it < max_iters:
        pg_norm = float(np.linalg.norm(project_simplex(lam + grad) - lam))
        if pg_norm <= tol:
            return lam, d, phi, it

        t = step
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            cand = project_simplex(lam + t * grad)
            d_c, phi_c, grad_c = oracle(cand)
            if phi_c >= phi + ARMIJO_DUAL * float(grad @ (cand - lam)):
                accepted = True
                break
            t *= 0.5

        delta = cand - lam if accepted else np.zeros(m)
        if not np.any(delta):
            break

        curvature = -float(delta @ (grad_c - grad))
        if curvature > 0.0:
            step = min(1e12, max(1e-12, float(delta @ delta) / curvature))
        else:
            step = 1e12
        lam, d, phi, grad = cand, d_c, phi_c, grad_c
        it += 1

    pg_norm = float(np.linalg.norm(project_simplex(lam + grad) - lam))
    if pg_norm <= tol:
        return lam, d, phi, it

    # Ascent stalled short of tolerance: finish on the active set
    polished = _polish(oracle, lam, grad, tol)
    if polished is not None:
        logger.debug(f"dual iteration finished by active-set polish after {it} iterations (pg was {pg_norm:.3e})")
        lam, d, phi = polished
        return lam, d, phi, it
    gap = float(np.max(grad) - lam @ grad)
    raise SubproblemStalled(f"dual iteration did not reach tolerance in {it} iterations (pg={pg_norm:.3e}, gap={gap:.3e})")


def solve_direction(
    gradients: np.ndarray,
    hessians: HessianSet,
    lambda0: Optional[np.ndarray] = None,
    max_iters: int = DUAL_MAX_ITERS,
) -> DirectionSolution:
    """
    Solve the direction subproblem for SPD B_1..B_m.

    Args:
        gradients: Jacobian, shape (m, n).
        hessians: The current approximations.
        lambda0: Optional warm start for the multiplier.
        max_iters: Dual iteration limit.

    Returns:
        DirectionSolution with d = -B(lam)^{-1} g(lam), theta = -1/2 d'B(lam)d and lam on the simplex.

    Raises:
        SubproblemStalled: the dual iteration did not converge.
        NotPositiveDefinite: some B(lam) failed factorization.
    """
    lam, d, phi, iters = _maximize_dual(gradients, hessians, lambda0, max_iters)
    if np.linalg.norm(d) <= ZERO_DIRECTION:
        return DirectionSolution(d=np.zeros_like(d), theta=0.0, lam=lam, iterations=iters)
    return DirectionSolution(d=d, theta=min(phi, 0.0), lam=lam, iterations=iters)


def solve_steepest(gradients: np.ndarray, max_iters: int = DUAL_MAX_ITERS) -> SteepestDescentSolution:
    """
    Steepest descent direction: the subproblem with B_j = I.

    -d_sd is the minimum-norm element of conv{grad F_1, ..., grad F_m}.
    """
    lam, d, _, iters = _maximize_dual(gradients, None, None, max_iters)
    if np.linalg.norm(d) <= ZERO_DIRECTION:
        d = np.zeros_like(d)
    return SteepestDescentSolution(d_sd=d, lam_sd=lam, iterations=iters)


def is_critical(gradients: Sequence[np.ndarray], tol: float = 1e-10) -> bool:
    """Whether the gradient hull contains the origin, up to tol in the min-norm element."""
    return solve_steepest(np.atleast_2d(np.asarray(gradients, dtype=float))).norm <= tol
