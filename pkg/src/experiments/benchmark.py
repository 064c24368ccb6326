"""
Benchmark sweep: problems x solvers x seeded starts, then fronts,
metric tables and performance profiles written as a ResultsBundle.
"""

from __future__ import annotations

import logging
import platform
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src import __version__
from src.experiments.bundle import ResultsBundle
from src.metrics.fronts import (
    DegenerateFront,
    EmptyFront,
    FrontArchive,
    extreme_points,
    nondominated_filter,
    purity,
    reference_front,
    spread_metrics,
)
from src.metrics.profiles import ProfileTable, metric_profile_table, performance_profile
from src.models.enums import CostMeasure, RunStatus
from src.models.schemas import ExperimentSpec, Manifest, MetricRecord, RunResult, RunSummary
from src.optimization.solver import run_multistart
from src.problems.registry import get_problem

logger = logging.getLogger(__name__)

METRICS = ("purity", "gamma", "delta")
MIN_TIME_COST = 1e-9


@dataclass
class MetricTables:
    """Metric records per metric name, in (problem, solver) order."""

    tables: Dict[str, List[MetricRecord]] = field(default_factory=dict)

    def values(self, metric: str) -> Dict[Tuple[str, str], Tuple[float, bool]]:
        return {(r.problem, r.solver): (r.value, r.flagged) for r in self.tables.get(metric, [])}


def build_manifest(spec: ExperimentSpec) -> Manifest:
    return Manifest(
        spec=spec,
        package_version=__version__,
        python_version=platform.python_version(),
        numpy_version=np.__version__,
    )


def solver_front(problem: str, solver: str, runs: List[RunSummary]) -> FrontArchive:
    """Nondominated final objective vectors of the solver's converged runs on one problem."""
    points, provenance = [], []
    for r in runs:
        if r.problem == problem and r.solver.value == solver and r.status == RunStatus.CONVERGED:
            points.append(r.f)
            provenance.append((solver, problem, r.start))
    if not points:
        return FrontArchive.empty(get_problem(problem).m)
    return nondominated_filter(np.array(points), provenance)


def compute_metrics(fronts: Dict[str, Dict[str, FrontArchive]]) -> MetricTables:
    """
    Purity, Gamma and Delta for every (problem, solver) front.

    The reference front of a problem is the nondominated union of its
    solver fronts, and its per-objective minimizers are the spread
    extremes. An empty front scores purity 0, a front with fewer than two
    points scores infinite spread; both are flagged.
    """
    tables: Dict[str, List[MetricRecord]] = {name: [] for name in METRICS}
    for problem in sorted(fronts):
        per_solver = fronts[problem]
        reference = reference_front([per_solver[s] for s in sorted(per_solver)])
        extremes = extreme_points(reference) if len(reference) else None
        for solver in sorted(per_solver):
            front = per_solver[solver]
            try:
                value, flagged = purity(front, reference), False
            except EmptyFront:
                value, flagged = 0.0, True
            tables["purity"].append(MetricRecord(problem=problem, solver=solver, value=value, flagged=flagged))
            try:
                gamma, delta = spread_metrics(front, extremes)
                flagged = False
            except DegenerateFront:
                gamma, delta, flagged = float("inf"), float("inf"), True
            tables["gamma"].append(MetricRecord(problem=problem, solver=solver, value=gamma, flagged=flagged))
            tables["delta"].append(MetricRecord(problem=problem, solver=solver, value=delta, flagged=flagged))
    return MetricTables(tables)


def run_cost(r: RunSummary, measure: CostMeasure) -> float:
    if r.status != RunStatus.CONVERGED:
        return float("inf")
    if measure == CostMeasure.TIME:
        return max(r.wall_time, MIN_TIME_COST)
    return float(r.f_evals + r.jac_evals)


def cost_profile_table(runs: List[RunSummary], measure: CostMeasure, solvers: List[str]) -> ProfileTable:
    """One instance per (problem, start) pair, one column per solver."""
    instances = sorted({(r.problem, r.start) for r in runs})
    index = {inst: i for i, inst in enumerate(instances)}
    col = {s: j for j, s in enumerate(solvers)}
    costs = np.full((len(instances), len(solvers)), np.inf)
    for r in runs:
        costs[index[(r.problem, r.start)], col[r.solver.value]] = run_cost(r, measure)
    return ProfileTable(list(solvers), [f"{p}#{s}" for p, s in instances], costs)


def write_metrics_and_profiles(
    bundle: ResultsBundle,
    fronts: Dict[str, Dict[str, FrontArchive]],
    solvers: List[str],
) -> MetricTables:
    tables = compute_metrics(fronts)
    problems = sorted(fronts)
    for metric in METRICS:
        bundle.write_metric(metric, tables.tables[metric])
        table = metric_profile_table(metric, tables.values(metric), problems, solvers)
        bundle.write_profile(metric, performance_profile(table))
    return tables


def run_benchmark(spec: ExperimentSpec, output_dir: Optional[str] = None) -> ResultsBundle:
    """
    Run the sweep and write the full bundle; the manifest is written first.

    Failed runs are recorded with their status and never stop the sweep.
    """
    bundle = ResultsBundle(output_dir or spec.output_dir)
    bundle.write_manifest(build_manifest(spec))
    solvers = [v.value for v in spec.solvers]

    results: List[RunResult] = []
    for problem_name in spec.problems:
        p = get_problem(problem_name)
        for variant in spec.solvers:
            cfg = spec.solver_config(variant)
            batch = run_multistart(p, spec.n_starts, spec.seed, cfg, jobs=spec.jobs)
            failed = [r for r in batch if not r.converged]
            for r in failed:
                logger.warning(f"{p.name} {variant.value} start={r.start_index}: {r.status.value} ({r.message})")
            logger.info(f"{p.name} {variant.value}: {len(batch) - len(failed)}/{len(batch)} converged")
            results.extend(batch)

    runs = [RunSummary.from_result(r) for r in results]
    bundle.write_runs(runs)

    fronts: Dict[str, Dict[str, FrontArchive]] = {}
    for problem_name in spec.problems:
        name = get_problem(problem_name).name
        fronts[name] = {}
        for solver in solvers:
            front = solver_front(name, solver, runs)
            fronts[name][solver] = front
            bundle.write_front(name, solver, front)

    write_metrics_and_profiles(bundle, fronts, solvers)
    for measure in CostMeasure:
        bundle.write_profile(measure.value, performance_profile(cost_profile_table(runs, measure, solvers)))

    logger.info(f"Benchmark finished: {len(runs)} runs written to {bundle.root}")
    return bundle


def recompute_metrics(results_dir: str, kind: str = "csv") -> MetricTables:
    """Rebuild metric tables and metric profiles of a stored bundle from its front files of format `kind`."""
    bundle = ResultsBundle(results_dir)
    index = bundle.front_index(kind)
    if not index:
        raise FileNotFoundError(f"no {kind} front files under {bundle.root / 'fronts'}")
    fronts = {problem: {s: bundle.read_front(problem, s, kind) for s in solvers} for problem, solvers in index.items()}
    solvers = sorted({s for names in index.values() for s in names})
    return write_metrics_and_profiles(bundle, fronts, solvers)
