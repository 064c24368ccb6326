"""Tests for the command-line entry point and the results bundle it writes."""

import csv
import json
import shutil

import pytest

from src.cli import EXIT_CONFIG, EXIT_MAX_ITERS, EXIT_NUMERICAL, EXIT_OK, attach_point_values, main
from src.experiments.bundle import ResultsBundle
from src.models.enums import RunStatus, SolverVariant

SOLVERS = [v.value for v in SolverVariant]


def test_list_problems_text(capsys):
    assert main(["list-problems"]) == EXIT_OK
    lines = [line for line in capsys.readouterr().out.splitlines() if line.strip()]
    assert lines[0].split()[:3] == ["name", "n", "m"]
    rows = lines[1:]
    assert len(rows) == 12
    assert rows[0].split()[0] == "JOS1"


def test_list_problems_json(capsys):
    assert main(["list-problems", "--format", "json"]) == EXIT_OK
    problems = json.loads(capsys.readouterr().out)
    assert len(problems) == 12
    toi4 = next(p for p in problems if p["name"] == "Toi4")
    assert toi4["n"] == 4 and toi4["m"] == 2


def test_solve_converges(tmp_path):
    out = tmp_path / "result.json"
    assert main(["solve", "--problem", "JOS1", "--seed", "1", "--output", str(out)]) == EXIT_OK
    result = json.loads(out.read_text(encoding="utf8"))
    assert result["status"] == RunStatus.CONVERGED.value
    assert result["seed"] == 1
    assert "trace" not in result


def test_solve_from_explicit_start(tmp_path):
    out = tmp_path / "result.json"
    args = ["solve", "--problem", "jos1", "--x0", "5,5", "--solver", "bfgs-wolfe", "--output", str(out)]
    assert main(args) == EXIT_OK
    result = json.loads(out.read_text(encoding="utf8"))
    assert result["variant"] == "bfgs-wolfe"
    assert result["seed"] is None


def test_solve_writes_trace(tmp_path):
    trace = tmp_path / "trace.jsonl"
    out = tmp_path / "result.json"
    assert main(["solve", "--problem", "SP1", "--seed", "2", "--trace", str(trace), "--output", str(out)]) == EXIT_OK
    records = [json.loads(line) for line in trace.read_text(encoding="utf8").splitlines()]
    result = json.loads(out.read_text(encoding="utf8"))
    assert len(records) == result["iterations"] + 1
    assert [r["k"] for r in records] == list(range(len(records)))
    assert records[0]["direction"] is not None
    assert records[-1]["alpha"] is None


def test_solve_iteration_limit():
    assert main(["solve", "--problem", "JOS1", "--seed", "1", "--max-iters", "0"]) == EXIT_MAX_ITERS


def test_solve_numerical_failure():
    assert main(["solve", "--problem", "MMR2", "--x0", "-1,0.5"]) == EXIT_NUMERICAL
    assert main(["solve", "--problem", "MMR2", "--x0=-1,0.5"]) == EXIT_NUMERICAL


def test_negative_start_point(tmp_path):
    out = tmp_path / "result.json"
    assert main(["solve", "--problem", "JOS1", "--x0", "-3,-4.5", "--output", str(out)]) == EXIT_OK
    result = json.loads(out.read_text(encoding="utf8"))
    assert result["status"] == RunStatus.CONVERGED.value


def test_point_values_are_attached_to_their_flag():
    argv = ["solve", "--problem", "AP2", "--x0", "-2", "--rho", "0.001"]
    assert attach_point_values(argv) == ["solve", "--problem", "AP2", "--x0=-2", "--rho", "0.001"]
    assert attach_point_values(["solve", "--x0"]) == ["solve", "--x0"]


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--problem", "JOS1", "--rho", "0.6"],
        ["solve", "--problem", "JOS1", "--rho", "0.2", "--sigma", "0.1"],
        ["solve", "--problem", "NOPE"],
        ["solve", "--problem", "JOS1", "--x0", "1,2,3"],
        ["solve", "--problem", "JOS1", "--x0", "a,b"],
        ["solve", "--problem", "JOS1", "--config", "does-not-exist.yaml"],
    ],
)
def test_solve_invalid_configuration(args):
    assert main(args) == EXIT_CONFIG


def test_config_file_is_overridden_by_flags(tmp_path):
    config = tmp_path / "solver.yaml"
    config.write_text("solver:\n  rho: 0.6\n", encoding="utf8")
    assert main(["solve", "--problem", "AP2", "--seed", "0", "--config", str(config)]) == EXIT_CONFIG
    args = ["solve", "--problem", "AP2", "--seed", "0", "--config", str(config), "--rho", "0.001"]
    assert main(args) == EXIT_OK


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["solve", "--problem", "JOS1", "--bogus"])
    assert info.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "moo-bfgs" in capsys.readouterr().out


@pytest.fixture(scope="module")
def bundle_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("bench") / "results"
    args = ["benchmark", "--problems", "JOS1", "AP2", "--starts", "2", "--seed", "7", "--output", str(out)]
    assert main(args) == EXIT_OK
    return out


def test_benchmark_writes_every_file(bundle_dir):
    bundle = ResultsBundle(bundle_dir)
    assert bundle.manifest_path.is_file()
    assert bundle.runs_path.is_file()
    assert len(list((bundle_dir / "fronts").glob("*/*.csv"))) == 2 * len(SOLVERS)
    assert sorted(p.stem for p in (bundle_dir / "metrics").glob("*.csv")) == ["delta", "gamma", "purity"]
    assert sorted(p.stem for p in (bundle_dir / "profiles").glob("*.csv")) == [
        "delta", "evals", "gamma", "purity", "time",
    ]


def test_benchmark_bundle_reads_back(bundle_dir):
    bundle = ResultsBundle(bundle_dir)
    manifest = bundle.read_manifest()
    assert manifest.spec.problems == ["JOS1", "AP2"]
    assert manifest.spec.n_starts == 2 and manifest.spec.seed == 7
    assert "extremes" in manifest.metric_conventions

    runs = bundle.read_runs()
    assert len(runs) == 2 * len(SOLVERS) * 2
    assert sorted({r.seed for r in runs}) == [7, 8]
    assert all(len(r.f) == 2 for r in runs)

    assert bundle.front_index() == {"AP2": sorted(SOLVERS), "JOS1": sorted(SOLVERS)}
    for problem in ("JOS1", "AP2"):
        for solver in SOLVERS:
            front = bundle.read_front(problem, solver)
            assert front.m == 2
            converged = [
                r for r in runs
                if r.problem == problem and r.solver.value == solver and r.status == RunStatus.CONVERGED
            ]
            assert len(front) <= len(converged)

    for metric in ("purity", "gamma", "delta"):
        rows = bundle.read_metric(metric)
        assert len(rows) == 2 * len(SOLVERS)
    for row in bundle.read_metric("purity"):
        assert 0.0 <= row.value <= 1.0

    profile = bundle.read_profile("evals")
    assert set(profile) <= set(SOLVERS)
    for breakpoints in profile.values():
        assert all(tau >= 1.0 and 0.0 < rho <= 1.0 for tau, rho in breakpoints)


def test_front_file_header(bundle_dir):
    with open(bundle_dir / "fronts" / "JOS1" / "global-bfgs.csv", newline="", encoding="utf8") as f:
        assert next(csv.reader(f)) == ["start", "f1", "f2"]


def without_wall_time(path):
    with open(path, newline="", encoding="utf8") as f:
        rows = list(csv.DictReader(f))
    for row in rows:
        row.pop("wall_time")
    return rows


def test_manifest_rerun_reproduces_bundle(bundle_dir, tmp_path):
    rerun = tmp_path / "rerun"
    assert main(["benchmark", "--manifest", str(bundle_dir / "manifest.json"), "--output", str(rerun)]) == EXIT_OK

    assert without_wall_time(rerun / "runs.csv") == without_wall_time(bundle_dir / "runs.csv")
    for relative in sorted(p.relative_to(bundle_dir) for p in (bundle_dir / "fronts").glob("*/*.csv")):
        assert (rerun / relative).read_bytes() == (bundle_dir / relative).read_bytes()
    for name in ("metrics/purity.csv", "metrics/gamma.csv", "metrics/delta.csv", "profiles/evals.csv"):
        assert (rerun / name).read_bytes() == (bundle_dir / name).read_bytes()


def test_metrics_recomputed_from_fronts(bundle_dir, tmp_path, capsys):
    copy = tmp_path / "copy"
    shutil.copytree(bundle_dir, copy)
    shutil.rmtree(copy / "metrics")
    assert main(["metrics", "--results", str(copy)]) == EXIT_OK
    assert "[purity]" in capsys.readouterr().out
    for metric in ("purity", "gamma", "delta"):
        name = f"metrics/{metric}.csv"
        assert (copy / name).read_bytes() == (bundle_dir / name).read_bytes()


def test_metrics_without_fronts(tmp_path):
    assert main(["metrics", "--results", str(tmp_path)]) == EXIT_CONFIG


def test_benchmark_tables_are_also_written_as_json(bundle_dir):
    bundle = ResultsBundle(bundle_dir)
    assert (bundle_dir / "runs.json").is_file()
    assert len(list((bundle_dir / "fronts").glob("*/*.json"))) == 2 * len(SOLVERS)
    assert sorted(p.stem for p in (bundle_dir / "metrics").glob("*.json")) == ["delta", "gamma", "purity"]
    assert sorted(p.stem for p in (bundle_dir / "profiles").glob("*.json")) == [
        "delta", "evals", "gamma", "purity", "time",
    ]

    def dumped(rows):
        return [row.model_dump_json() for row in rows]

    assert dumped(bundle.read_runs("json")) == dumped(bundle.read_runs("csv"))
    for metric in ("purity", "gamma", "delta"):
        assert dumped(bundle.read_metric(metric, "json")) == dumped(bundle.read_metric(metric, "csv"))
    for name in ("time", "evals", "purity", "gamma", "delta"):
        assert bundle.read_profile(name, "json") == bundle.read_profile(name, "csv")
    for problem in ("JOS1", "AP2"):
        for solver in SOLVERS:
            from_json = bundle.read_front(problem, solver, "json")
            from_csv = bundle.read_front(problem, solver, "csv")
            assert from_json.points.tolist() == from_csv.points.tolist()
            assert from_json.provenance == from_csv.provenance


def test_metrics_recomputed_from_json_fronts(bundle_dir, tmp_path):
    copy = tmp_path / "copy"
    shutil.copytree(bundle_dir, copy)
    shutil.rmtree(copy / "metrics")
    for front in (copy / "fronts").glob("*/*.csv"):
        front.unlink()
    assert main(["metrics", "--results", str(copy)]) == EXIT_CONFIG
    assert main(["metrics", "--results", str(copy), "--from", "json"]) == EXIT_OK
    for metric in ("purity", "gamma", "delta"):
        for suffix in ("csv", "json"):
            name = f"metrics/{metric}.{suffix}"
            assert (copy / name).read_bytes() == (bundle_dir / name).read_bytes()


def test_unknown_table_format(tmp_path):
    with pytest.raises(ValueError):
        ResultsBundle(tmp_path).read_runs("parquet")
