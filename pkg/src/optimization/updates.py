"""
Hessian-approximation updates.

- corrected BFGS: gamma_j = y_j + r_j s with r_j chosen so gamma_j's > 0
  whenever the current point is not critical,
- the BFGS-Wolfe rule with its rho_j^{-1} switch,
- the cautious rule that skips updates with small curvature.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from src.models.schemas import UpdateDiagnostics
from src.numerics.linalg import cholesky, symmetrize
from src.optimization.errors import CurvatureViolation, DegenerateStep, NotPositiveDefinite

logger = logging.getLogger(__name__)

# Steps shorter than this are treated as zero
MIN_STEP_NORM = 1e-300


@dataclass
class HessianSet:
    """The m approximations B_1..B_m of one run."""

    matrices: List[np.ndarray]

    @classmethod
    def identity(cls, m: int, n: int) -> "HessianSet":
        return cls([np.eye(n) for _ in range(m)])

    @property
    def m(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.matrices[j]

    def __iter__(self):
        return iter(self.matrices)

    def stack(self) -> np.ndarray:
        """Array of shape (m, n, n)."""
        return np.stack(self.matrices)

    def combined(self, lam: np.ndarray) -> np.ndarray:
        """sum_j lam_j B_j."""
        return np.tensordot(np.asarray(lam, dtype=float), self.stack(), axes=1)

    def copy(self) -> "HessianSet":
        return HessianSet([B.copy() for B in self.matrices])


@dataclass(frozen=True)
class CorrectionInputs:
    """Inputs of the corrected update at iteration k."""

    s: np.ndarray
    y: np.ndarray  # (m, n), row j = grad F_j(x^{k+1}) - grad F_j(x^k)
    mu: np.ndarray
    vartheta: float
    grad_current: np.ndarray  # (m, n) Jacobian at x^k
    zero_correction: bool = field(default=False)


def corrected_quantities(inp: CorrectionInputs) -> Tuple[np.ndarray, UpdateDiagnostics]:
    """
    Compute eta_j, r_j and gamma_j = y_j + r_j s.

    r_j = max(-eta_j, 0) + vartheta * |sum_i mu_i grad F_i(x^k)|, so
    gamma_j's >= vartheta * |sum_i mu_i grad F_i(x^k)| * |s|^2.

    Args:
        inp: Step, gradient differences, multiplier mu and vartheta.

    Returns:
        (gamma, diagnostics) with gamma of shape (m, n).

    Raises:
        DegenerateStep: |s| <= 1e-300.
    """
    s = np.asarray(inp.s, dtype=float)
    y = np.atleast_2d(np.asarray(inp.y, dtype=float))
    ss = float(s @ s)
    if np.sqrt(ss) <= MIN_STEP_NORM:
        raise DegenerateStep("step s is numerically zero")

    ys = y @ s
    eta = ys / ss
    if inp.zero_correction:
        r = np.zeros_like(eta)
    else:
        weighted_grad = np.asarray(inp.mu, dtype=float) @ np.atleast_2d(inp.grad_current)
        r = np.maximum(-eta, 0.0) + inp.vartheta * float(np.linalg.norm(weighted_grad))
    gamma = y + r[:, None] * s[None, :]
    diag = UpdateDiagnostics(
        eta=eta.tolist(),
        r=r.tolist(),
        gamma_dot_s=(gamma @ s).tolist(),
        applied=[True] * len(eta),
    )
    return gamma, diag


def bfgs_update(B: np.ndarray, s: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """
    B+ = B - (B s s'B) / (s'B s) + (gamma gamma') / (gamma's).

    Satisfies B+ s = gamma and stays SPD when gamma's > 0.

    Raises:
        CurvatureViolation: gamma's <= 0.
    """
    gs = float(gamma @ s)
    if not gs > 0.0:
        raise CurvatureViolation(f"gamma's = {gs:.3e} is not positive")
    Bs = B @ s
    sBs = float(s @ Bs)
    if not sBs > 0.0:
        raise CurvatureViolation(f"s'Bs = {sBs:.3e} is not positive")
    return symmetrize(B - np.outer(Bs, Bs) / sBs + np.outer(gamma, gamma) / gs)


def bfgs_wolfe_rho_inverse(ys: float, D_next_s: float, g_dot_s: float) -> float:
    """rho_j^{-1}: y's when positive, otherwise D(x^{k+1}, s) - grad F_j(x^k)'s."""
    if ys > 0.0:
        return ys
    return D_next_s - g_dot_s


def bfgs_wolfe_update(
    B: np.ndarray, s: np.ndarray, y: np.ndarray, D_next_s: float, g_dot_s: float
) -> np.ndarray:
    """
    Three-term BFGS-Wolfe update with a = rho_j^{-1}:

        B+ = B - [a Bs (Bs)' - (s'Bs) y y'] / den + (a - y's) [y (Bs)' + Bs y'] / den,
        den = (a - y's)^2 + a s'Bs.

    Reduces to the standard BFGS update when a = y's, and gives B+ s =
    a [(a - y's) Bs + (s'Bs) y] / den in general.

    Raises:
        CurvatureViolation: a <= 0.
    """
    ys = float(y @ s)
    a = bfgs_wolfe_rho_inverse(ys, D_next_s, g_dot_s)
    if not a > 0.0:
        raise CurvatureViolation(f"rho^-1 = {a:.3e} is not positive")
    Bs = B @ s
    sBs = float(s @ Bs)
    if not sBs > 0.0:
        raise CurvatureViolation(f"s'Bs = {sBs:.3e} is not positive")
    gap = a - ys
    den = gap * gap + a * sBs
    B_new = (
        B
        - (a * np.outer(Bs, Bs) - sBs * np.outer(y, y)) / den
        + gap * (np.outer(y, Bs) + np.outer(Bs, y)) / den
    )
    return symmetrize(B_new)


def cautious_threshold(theta: float, epsilon: float) -> float:
    return epsilon * min(1.0, abs(theta))


def cautious_update(B: np.ndarray, s: np.ndarray, y: np.ndarray, theta: float, epsilon: float) -> np.ndarray:
    """
    Standard BFGS update with y when y's >= epsilon * min(1, |theta|), else B unchanged.

    At theta = 0 the threshold is 0; a non-positive y's is then still skipped.
    """
    ys = float(y @ s)
    if ys >= cautious_threshold(theta, epsilon) and ys > 0.0:
        return bfgs_update(B, s, y)
    return B.copy()


def psi_diagnostic(B: np.ndarray) -> float:
    """trace(B) - ln det(B); at least n for SPD B, with equality at the identity."""
    factor = cholesky(B)
    return float(np.trace(B)) - factor.logdet()


def apply_corrected(
    hessians: HessianSet, inp: CorrectionInputs, with_psi: bool = False
) -> Tuple[HessianSet, UpdateDiagnostics]:
    """Corrected update of every B_j."""
    gamma, diag = corrected_quantities(inp)
    updated = [bfgs_update(B, inp.s, gamma[j]) for j, B in enumerate(hessians)]
    if with_psi:
        diag.psi = [psi_diagnostic(B) for B in updated]
    return HessianSet(updated), diag


def apply_bfgs_wolfe(
    hessians: HessianSet,
    s: np.ndarray,
    y: np.ndarray,
    grad_current: np.ndarray,
    grad_next: np.ndarray,
    with_psi: bool = False,
) -> Tuple[HessianSet, UpdateDiagnostics]:
    """BFGS-Wolfe update of every B_j; D(x^{k+1}, s) comes from the new Jacobian."""
    D_next_s = float(np.max(grad_next @ s))
    g_dot_s = grad_current @ s
    ys = y @ s
    ss = float(s @ s)
    updated = [bfgs_wolfe_update(B, s, y[j], D_next_s, float(g_dot_s[j])) for j, B in enumerate(hessians)]
    rho_inv = [bfgs_wolfe_rho_inverse(float(ys[j]), D_next_s, float(g_dot_s[j])) for j in range(len(ys))]
    diag = UpdateDiagnostics(
        eta=(ys / ss).tolist(),
        r=[0.0] * len(ys),
        gamma_dot_s=rho_inv,
        applied=[True] * len(ys),
    )
    if with_psi:
        diag.psi = [psi_diagnostic(B) for B in updated]
    return HessianSet(updated), diag


def apply_cautious(
    hessians: HessianSet,
    s: np.ndarray,
    y: np.ndarray,
    theta: float,
    epsilon: float,
    with_psi: bool = False,
) -> Tuple[HessianSet, UpdateDiagnostics]:
    """Cautious update of every B_j."""
    ys = y @ s
    ss = float(s @ s)
    threshold = cautious_threshold(theta, epsilon)
    applied = [bool(v >= threshold and v > 0.0) for v in ys]
    updated = [cautious_update(B, s, y[j], theta, epsilon) for j, B in enumerate(hessians)]
    skipped = applied.count(False)
    if skipped:
        logger.debug(f"cautious update skipped for {skipped} of {len(applied)} objectives")
    diag = UpdateDiagnostics(
        eta=(ys / ss).tolist(),
        r=[0.0] * len(ys),
        gamma_dot_s=[float(v) if ok else None for v, ok in zip(ys, applied)],
        applied=applied,
    )
    if with_psi:
        diag.psi = [psi_diagnostic(B) for B in updated]
    return HessianSet(updated), diag


def all_spd(hessians: Sequence[np.ndarray]) -> bool:
    """Whether every matrix admits a Cholesky factorization."""
    try:
        for B in hessians:
            cholesky(B)
    except NotPositiveDefinite:
        return False
    return True


def skipped_diagnostics(s: np.ndarray, y: np.ndarray) -> UpdateDiagnostics:
    """Diagnostics of a step where every B_j was kept."""
    y = np.atleast_2d(y)
    ss = float(s @ s)
    eta = (y @ s) / ss if ss > 0.0 else np.zeros(y.shape[0])
    m = y.shape[0]
    return UpdateDiagnostics(eta=eta.tolist(), r=[0.0] * m, gamma_dot_s=[None] * m, applied=[False] * m)
