"""Tests for settings, config files and the solver parameter models."""

import pytest
from pydantic import ValidationError

from src.config import DEFAULT_THETA_TOL, Settings, load_config_file
from src.models.enums import SolverVariant
from src.models.schemas import ExperimentSpec, ProblemMetadata, SolverConfig, WolfeParams
from src.problems import UnknownProblemError


def test_settings_defaults():
    s = Settings(_env_file=None)
    assert s.rho == 1e-4 and s.sigma == 0.1
    assert s.vartheta == 0.1
    assert s.theta_tol == DEFAULT_THETA_TOL
    assert s.max_iters == 2000


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("MOO_BFGS_RHO", "0.001")
    monkeypatch.setenv("MOO_BFGS_N_STARTS", "4")
    s = Settings(_env_file=None)
    assert s.rho == 0.001
    assert s.n_starts == 4
    assert s.solver_defaults()["rho"] == 0.001


def test_settings_log_level_is_normalized():
    assert Settings(_env_file=None, log_level=" debug ").log_level == "DEBUG"
    assert Settings(_env_file=None, log_level="").log_level == "INFO"


def test_solver_config_defaults():
    cfg = SolverConfig()
    assert cfg.variant == SolverVariant.GLOBAL_BFGS
    params = cfg.wolfe_params()
    assert params.rho == 1e-4 and params.sigma == 0.1 and params.alpha_max == 100.0


@pytest.mark.parametrize(
    "fields",
    [
        {"rho": 0.6},
        {"rho": 0.0},
        {"rho": 0.2, "sigma": 0.1},
        {"sigma": 1.0},
        {"vartheta": 1.5},
        {"vartheta": 1e-5},
        {"vartheta_lower": 0.5, "vartheta_upper": 0.2},
        {"max_iters": -1},
        {"variant": "newton"},
    ],
)
def test_solver_config_rejects_invalid_values(fields):
    with pytest.raises(ValidationError):
        SolverConfig(**fields)


def test_solver_config_is_frozen():
    cfg = SolverConfig()
    with pytest.raises(ValidationError):
        cfg.rho = 0.3


def test_solver_config_from_settings_skips_missing_overrides():
    cfg = SolverConfig.from_settings(rho=None, sigma=0.5, variant=SolverVariant.BFGS_WOLFE)
    assert cfg.rho == 1e-4
    assert cfg.sigma == 0.5
    assert cfg.variant == SolverVariant.BFGS_WOLFE


def test_wolfe_params_validation():
    with pytest.raises(ValidationError):
        WolfeParams(rho=0.3, sigma=0.2)
    with pytest.raises(ValidationError):
        WolfeParams(max_trials=0)


def test_load_config_file_with_solver_section(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("seed: 3\nsolver:\n  rho: 0.001\n  vartheta: 0.2\n", encoding="utf8")
    assert load_config_file(str(path)) == {"seed": 3, "rho": 0.001, "vartheta": 0.2}


def test_load_config_file_flat_and_missing(tmp_path):
    path = tmp_path / "flat.yaml"
    path.write_text("sigma: 0.9\n", encoding="utf8")
    assert load_config_file(str(path)) == {"sigma": 0.9}
    assert load_config_file(None) == {}
    with pytest.raises(FileNotFoundError):
        load_config_file(str(tmp_path / "absent.yaml"))


def test_load_config_file_rejects_non_mapping(tmp_path):
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf8")
    with pytest.raises(ValueError):
        load_config_file(str(path))


def test_experiment_spec_expands_all():
    spec = ExperimentSpec(problems=["all"], n_starts=2)
    assert spec.problems[0] == "JOS1" and len(spec.problems) == 12
    assert spec.solvers == list(SolverVariant)


def test_experiment_spec_validation():
    with pytest.raises(UnknownProblemError):
        ExperimentSpec(problems=["NOPE"])
    with pytest.raises(ValidationError):
        ExperimentSpec(solvers=[])
    with pytest.raises(ValidationError):
        ExperimentSpec(n_starts=0)


def test_experiment_spec_solver_config():
    spec = ExperimentSpec(problems=["JOS1"], overrides={"rho": 0.01, "variant": "global-bfgs"})
    cfg = spec.solver_config(SolverVariant.CAUTIOUS_BFGS_ARMIJO)
    assert cfg.variant == SolverVariant.CAUTIOUS_BFGS_ARMIJO
    assert cfg.rho == 0.01


def test_problem_metadata_box_checks():
    with pytest.raises(ValidationError):
        ProblemMetadata(name="X", n=2, m=2, convex=True, lower=[0.0], upper=[1.0, 1.0])
    with pytest.raises(ValidationError):
        ProblemMetadata(name="X", n=1, m=2, convex=True, lower=[2.0], upper=[1.0])
