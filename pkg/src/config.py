"""
Application configuration using Pydantic Settings.
Handles environment variables, YAML config files and the solver defaults.
"""
import math
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import ConfigDict, field_validator
from pydantic_settings import BaseSettings

# Convergence threshold on |theta|: 5 * sqrt(machine epsilon)
DEFAULT_THETA_TOL = 5.0 * math.sqrt(2.0 ** -52)


class Settings(BaseSettings):
    """
    Settings from environment variables (prefix ``MOO_BFGS_``) and ``.env``.

    The solver fields hold the built-in defaults of every run; config files
    and CLI flags override them in that order.
    """

    # Seed fallback when --seed is not given (MOO_BFGS_SEED)
    seed: int = 0

    # Line search
    rho: float = 1e-4
    sigma: float = 0.1
    alpha_max: float = 100.0
    max_line_search_trials: int = 50

    # Corrected update
    vartheta: float = 0.1
    vartheta_lower: float = 1e-4
    vartheta_upper: float = 1.0

    # Cautious update threshold
    epsilon_cautious: float = 1e-6

    # Stopping rule
    max_iters: int = 2000
    theta_tol: float = DEFAULT_THETA_TOL

    # Direction subproblem (dual projected gradient)
    dual_max_iters: int = 500

    # Experiments
    n_starts: int = 10
    jobs: int = 1
    output_dir: str = "./results"

    log_level: str = "INFO"

    @field_validator("log_level", mode="before")
    @classmethod
    def validate_log_level(cls, v):
        """Normalize log level names to upper case."""
        if isinstance(v, str) and v.strip():
            return v.strip().upper()
        return "INFO"

    model_config = ConfigDict(
        env_prefix="MOO_BFGS_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore"
    )

    def solver_defaults(self) -> Dict[str, Any]:
        """Fields that seed a SolverConfig."""
        return {
            "rho": self.rho,
            "sigma": self.sigma,
            "alpha_max": self.alpha_max,
            "max_line_search_trials": self.max_line_search_trials,
            "vartheta": self.vartheta,
            "vartheta_lower": self.vartheta_lower,
            "vartheta_upper": self.vartheta_upper,
            "epsilon_cautious": self.epsilon_cautious,
            "max_iters": self.max_iters,
            "theta_tol": self.theta_tol,
            "dual_max_iters": self.dual_max_iters,
        }


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """
    Read a YAML config file into a flat dict of overrides.

    Args:
        path: File path or None.

    Returns:
        Mapping of field name to value (empty when path is None).
    """
    if not path:
        return {}
    with open(Path(path), "r", encoding="utf8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must contain a mapping, got {type(data).__name__}")
    # Accept both flat files and a nested `solver:` section
    solver_section = data.pop("solver", None)
    if isinstance(solver_section, dict):
        data.update(solver_section)
    return data


# Singleton instance of settings to be used across the application
settings = Settings()
