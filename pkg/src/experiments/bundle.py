"""
Results bundle on disk.

    <outdir>/manifest.json
    <outdir>/runs.{csv,json}
    <outdir>/fronts/<problem>/<solver>.{csv,json}
    <outdir>/metrics/{purity,gamma,delta}.{csv,json}
    <outdir>/profiles/{time,evals,purity,gamma,delta}.{csv,json}

Every table is written twice, as CSV and as JSON, with the same content.
CSV reals are written with 17 significant digits and JSON reals with their
shortest round-trip form, so both read back to the same floats.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np

from src.metrics.fronts import FrontArchive
from src.metrics.profiles import Breakpoints
from src.models.schemas import Manifest, MetricRecord, RunSummary

logger = logging.getLogger(__name__)

RUN_COLUMNS = [
    "solver", "problem", "start", "seed", "status", "iterations",
    "f_evals", "jac_evals", "wall_time", "theta", "f",
]
METRIC_COLUMNS = ["problem", "solver", "value", "flagged"]
PROFILE_COLUMNS = ["solver", "tau", "rho"]
VECTOR_SEPARATOR = ";"
TABLE_FORMATS = ("csv", "json")


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def _parse_bool(text: str) -> bool:
    return text.strip().lower() in ("true", "1")


def _open_writer(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf8", newline="")


def _write_json(path: Path, payload: Any) -> Path:
    # NaN and infinities are kept as the JSON extensions Python reads back
    with _open_writer(path) as f:
        json.dump(payload, f, indent=2, allow_nan=True)
        f.write("\n")
    return path


def _read_json(path: str | os.PathLike) -> Any:
    with open(path, "r", encoding="utf8") as f:
        return json.load(f)


def _check_format(kind: str) -> str:
    if kind not in TABLE_FORMATS:
        raise ValueError(f"table format must be one of {TABLE_FORMATS}, got {kind!r}")
    return kind


class ResultsBundle:
    """Writes and reads the files of one benchmark output directory."""

    def __init__(self, output_dir: str | os.PathLike):
        self.root = Path(output_dir)

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    @property
    def runs_path(self) -> Path:
        return self.root / "runs.csv"

    def table_path(self, name: str, kind: str = "csv") -> Path:
        """Path of runs, metrics/<m> or profiles/<p> in the given format."""
        return self.root / f"{name}.{_check_format(kind)}"

    def front_path(self, problem: str, solver: str, kind: str = "csv") -> Path:
        return self.root / "fronts" / problem / f"{solver}.{_check_format(kind)}"

    def metric_path(self, metric: str, kind: str = "csv") -> Path:
        return self.table_path(f"metrics/{metric}", kind)

    def profile_path(self, name: str, kind: str = "csv") -> Path:
        return self.table_path(f"profiles/{name}", kind)

    # Writers

    def write_manifest(self, manifest: Manifest) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        self.manifest_path.write_text(manifest.model_dump_json(indent=2), encoding="utf8")
        logger.info(f"Wrote manifest to {self.manifest_path}")
        return self.manifest_path

    def write_runs(self, rows: Sequence[RunSummary]) -> Path:
        with _open_writer(self.runs_path) as f:
            writer = csv.writer(f)
            writer.writerow(RUN_COLUMNS)
            for row in rows:
                writer.writerow([
                    row.solver.value,
                    row.problem,
                    row.start,
                    row.seed,
                    row.status.value,
                    row.iterations,
                    row.f_evals,
                    row.jac_evals,
                    fmt(row.wall_time),
                    fmt(row.theta),
                    VECTOR_SEPARATOR.join(fmt(v) for v in row.f),
                ])
        _write_json(self.table_path("runs", "json"), [_run_record(row) for row in rows])
        return self.runs_path

    def write_front(self, problem: str, solver: str, front: FrontArchive) -> Path:
        path = self.front_path(problem, solver)
        with _open_writer(path) as f:
            writer = csv.writer(f)
            writer.writerow(["start"] + [f"f{j + 1}" for j in range(front.m)])
            for point, prov in zip(front.points, front.provenance):
                start = prov[2] if prov is not None else ""
                writer.writerow([start] + [fmt(v) for v in point])
        _write_json(self.front_path(problem, solver, "json"), {
            "problem": problem,
            "solver": solver,
            "m": front.m,
            "points": [
                {"start": prov[2] if prov is not None else None, "f": [float(v) for v in point]}
                for point, prov in zip(front.points, front.provenance)
            ],
        })
        return path

    def write_metric(self, metric: str, rows: Sequence[MetricRecord]) -> Path:
        path = self.metric_path(metric)
        with _open_writer(path) as f:
            writer = csv.writer(f)
            writer.writerow(METRIC_COLUMNS)
            for row in rows:
                writer.writerow([row.problem, row.solver, fmt(row.value), str(row.flagged).lower()])
        _write_json(self.metric_path(metric, "json"), [row.model_dump() for row in rows])
        return path

    def write_profile(self, name: str, profile: Dict[str, Breakpoints]) -> Path:
        path = self.profile_path(name)
        with _open_writer(path) as f:
            writer = csv.writer(f)
            writer.writerow(PROFILE_COLUMNS)
            for solver in sorted(profile):
                for tau, rho in profile[solver]:
                    writer.writerow([solver, fmt(tau), fmt(rho)])
        _write_json(self.profile_path(name, "json"), {
            solver: [[float(tau), float(rho)] for tau, rho in profile[solver]] for solver in sorted(profile)
        })
        return path

    # Readers

    def read_manifest(self) -> Manifest:
        return read_manifest(self.manifest_path)

    def read_runs(self, kind: str = "csv") -> List[RunSummary]:
        if _check_format(kind) == "json":
            return read_runs_json(self.table_path("runs", "json"))
        return read_runs_csv(self.runs_path)

    def read_front(self, problem: str, solver: str, kind: str = "csv") -> FrontArchive:
        if _check_format(kind) == "json":
            return read_front_json(self.front_path(problem, solver, "json"))
        return read_front_csv(self.front_path(problem, solver), problem, solver)

    def read_metric(self, metric: str, kind: str = "csv") -> List[MetricRecord]:
        if _check_format(kind) == "json":
            return read_metric_json(self.metric_path(metric, "json"))
        return read_metric_csv(self.metric_path(metric))

    def read_profile(self, name: str, kind: str = "csv") -> Dict[str, Breakpoints]:
        if _check_format(kind) == "json":
            return read_profile_json(self.profile_path(name, "json"))
        return read_profile_csv(self.profile_path(name))

    def front_index(self, kind: str = "csv") -> Dict[str, List[str]]:
        """{problem: [solver, ...]} for every front file of the given format, sorted."""
        pattern = f"*.{_check_format(kind)}"
        fronts_dir = self.root / "fronts"
        if not fronts_dir.is_dir():
            return {}
        index = {
            d.name: sorted(p.stem for p in d.glob(pattern))
            for d in sorted(fronts_dir.iterdir())
            if d.is_dir()
        }
        return {problem: solvers for problem, solvers in index.items() if solvers}


def _run_record(row: RunSummary) -> Dict[str, Any]:
    record = row.model_dump()
    record["solver"] = row.solver.value
    record["status"] = row.status.value
    return record


def read_manifest(path: str | os.PathLike) -> Manifest:
    with open(path, "r", encoding="utf8") as f:
        return Manifest(**json.load(f))


def read_runs_csv(path: str | os.PathLike) -> List[RunSummary]:
    rows = []
    with open(path, "r", encoding="utf8", newline="") as f:
        for rec in csv.DictReader(f):
            rows.append(RunSummary(
                solver=rec["solver"],
                problem=rec["problem"],
                start=int(rec["start"]),
                seed=int(rec["seed"]),
                status=rec["status"],
                iterations=int(rec["iterations"]),
                f_evals=int(rec["f_evals"]),
                jac_evals=int(rec["jac_evals"]),
                wall_time=float(rec["wall_time"]),
                theta=float(rec["theta"]),
                f=[float(v) for v in rec["f"].split(VECTOR_SEPARATOR)] if rec["f"] else [],
            ))
    return rows


def read_front_csv(path: str | os.PathLike, problem: str = "", solver: str = "") -> FrontArchive:
    with open(path, "r", encoding="utf8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        m = len(header) - 1
        points, provenance = [], []
        for rec in reader:
            points.append([float(v) for v in rec[1:]])
            provenance.append((solver, problem, int(rec[0])) if rec[0] != "" else None)
    if not points:
        return FrontArchive.empty(m)
    return FrontArchive(np.array(points), provenance)


def read_metric_csv(path: str | os.PathLike) -> List[MetricRecord]:
    with open(path, "r", encoding="utf8", newline="") as f:
        return [
            MetricRecord(
                problem=rec["problem"],
                solver=rec["solver"],
                value=float(rec["value"]),
                flagged=_parse_bool(rec["flagged"]),
            )
            for rec in csv.DictReader(f)
        ]


def read_profile_csv(path: str | os.PathLike) -> Dict[str, Breakpoints]:
    profile: Dict[str, Breakpoints] = {}
    with open(path, "r", encoding="utf8", newline="") as f:
        for rec in csv.DictReader(f):
            profile.setdefault(rec["solver"], []).append((float(rec["tau"]), float(rec["rho"])))
    return profile


def read_runs_json(path: str | os.PathLike) -> List[RunSummary]:
    return [RunSummary(**rec) for rec in _read_json(path)]


def read_front_json(path: str | os.PathLike) -> FrontArchive:
    payload = _read_json(path)
    if not payload["points"]:
        return FrontArchive.empty(payload["m"])
    points = np.array([p["f"] for p in payload["points"]], dtype=float)
    provenance = [
        (payload["solver"], payload["problem"], p["start"]) if p["start"] is not None else None
        for p in payload["points"]
    ]
    return FrontArchive(points, provenance)


def read_metric_json(path: str | os.PathLike) -> List[MetricRecord]:
    return [MetricRecord(**rec) for rec in _read_json(path)]


def read_profile_json(path: str | os.PathLike) -> Dict[str, Breakpoints]:
    return {solver: [(float(tau), float(rho)) for tau, rho in pairs] for solver, pairs in _read_json(path).items()}
