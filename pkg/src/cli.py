"""
Command-line entry point.

    moo-bfgs list-problems [--format text|json]
    moo-bfgs solve --problem JOS1 --solver global-bfgs --seed 1 [--trace trace.jsonl]
    moo-bfgs benchmark [--problems ...] [--solvers ...] [--starts 10] [--output DIR] [--manifest PATH]
    moo-bfgs metrics --results DIR [--from csv|json]

Solver settings resolve as built-in defaults < MOO_BFGS_* environment
(.env included) < --config YAML file < flags.

Exit codes of `solve`: 0 converged, 2 iteration limit, 3 numerical
failure, 1 invalid configuration or problem name.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from src import __version__
from src.config import load_config_file, settings
from src.experiments.benchmark import METRICS, recompute_metrics, run_benchmark
from src.experiments.bundle import TABLE_FORMATS, read_manifest
from src.models.enums import CriticalityMeasure, RChoice, RunStatus, SolverVariant, TraceLevel
from src.models.schemas import ExperimentSpec, SolverConfig
from src.optimization.solver import run
from src.problems.base import random_start
from src.problems.registry import UnknownProblemError, get_problem, list_problems
from src.utils.logger import logger, set_level

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_MAX_ITERS = 2
EXIT_NUMERICAL = 3

# Flag destination -> SolverConfig field
SOLVER_FLAGS = {
    "rho": "rho",
    "sigma": "sigma",
    "alpha_max": "alpha_max",
    "vartheta": "vartheta",
    "epsilon_cautious": "epsilon_cautious",
    "theta_tol": "theta_tol",
    "max_iters": "max_iters",
    "r_choice": "r_choice",
    "criticality": "criticality_measure",
    "warm_start": "warm_start",
}
EXPERIMENT_KEYS = ("problems", "solvers", "n_starts", "seed", "jobs", "output_dir")
# Flags whose value may start with a minus sign
POINT_FLAGS = ("--x0",)


def exit_code(status: RunStatus) -> int:
    if status == RunStatus.CONVERGED:
        return EXIT_OK
    if status == RunStatus.MAX_ITERS:
        return EXIT_MAX_ITERS
    return EXIT_NUMERICAL


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("solver settings")
    group.add_argument("--config", help="YAML file with solver and experiment settings")
    group.add_argument("--rho", type=float, help="Sufficient-decrease coefficient, in (0, 0.5)")
    group.add_argument("--sigma", type=float, help="Curvature coefficient, in (rho, 1)")
    group.add_argument("--alpha-max", type=float, help="Largest trial step of the Wolfe search")
    group.add_argument("--vartheta", type=float, help="Correction weight of the global BFGS update")
    group.add_argument("--epsilon-cautious", type=float, help="Threshold of the cautious update")
    group.add_argument("--theta-tol", type=float, help="Criticality tolerance")
    group.add_argument("--max-iters", type=int, help="Iteration limit")
    group.add_argument("--r-choice", choices=[c.value for c in RChoice], help="Multiplier used in the correction")
    group.add_argument(
        "--criticality",
        choices=[c.value for c in CriticalityMeasure],
        help="Stop on |theta| or on the steepest-descent norm",
    )
    group.add_argument("--warm-start", action="store_true", default=None, help="Warm-start the dual iteration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moo-bfgs", description="Multiobjective BFGS solvers and benchmarks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    lp = sub.add_parser("list-problems", help="List the benchmark problems")
    lp.add_argument("--format", choices=["text", "json"], default="text")

    sv = sub.add_parser("solve", help="Run one solver on one problem")
    sv.add_argument("--problem", required=True)
    sv.add_argument("--solver", choices=[v.value for v in SolverVariant], default=SolverVariant.GLOBAL_BFGS.value)
    start = sv.add_mutually_exclusive_group()
    start.add_argument("--x0", help="Comma-separated start point, e.g. --x0 -1,0.5")
    start.add_argument("--seed", type=int, help="Seed of a random start in the problem's box")
    sv.add_argument("--trace", help="Write per-iteration records as JSON lines to this file")
    sv.add_argument("--output", help="Write the run result as JSON to this file")
    sv.add_argument("--format", choices=["text", "json"], default="text")
    _add_solver_flags(sv)

    bm = sub.add_parser("benchmark", help="Run a benchmark sweep and write a results bundle")
    bm.add_argument("--problems", nargs="+", help='Problem names or "all"')
    bm.add_argument("--solvers", nargs="+", choices=[v.value for v in SolverVariant])
    bm.add_argument("--starts", type=int, dest="n_starts")
    bm.add_argument("--seed", type=int)
    bm.add_argument("--jobs", type=int)
    bm.add_argument("--output", dest="output_dir")
    bm.add_argument("--manifest", help="Rerun the sweep stored in this manifest.json")
    _add_solver_flags(bm)

    mt = sub.add_parser("metrics", help="Recompute metric tables and profiles from stored fronts")
    mt.add_argument("--results", required=True, help="Results directory of a benchmark")
    mt.add_argument("--from", dest="source", choices=list(TABLE_FORMATS), default="csv", help="Front files to read")
    return parser


def solver_overrides(args: argparse.Namespace, file_values: Dict[str, Any]) -> Dict[str, Any]:
    """Fully resolved SolverConfig fields (except the variant)."""
    values = dict(settings.solver_defaults())
    values.update({k: v for k, v in file_values.items() if k in SolverConfig.model_fields and k != "variant"})
    for flag, name in SOLVER_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            values[name] = value
    return values


def parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ValueError(f"--x0 must be comma-separated numbers, got {text!r}") from None


def cmd_list_problems(args: argparse.Namespace) -> int:
    problems = list_problems()
    if args.format == "json":
        print(json.dumps([p.model_dump() for p in problems], indent=2))
        return EXIT_OK
    print(f"{'name':<8} {'n':>3} {'m':>3}  convex")
    for p in problems:
        print(f"{p.name:<8} {p.n:>3} {p.m:>3}  {'yes' if p.convex else 'no'}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    file_values = load_config_file(args.config)
    overrides = solver_overrides(args, file_values)
    trace_level = TraceLevel.FULL if args.trace else TraceLevel.NONE
    cfg = SolverConfig(**{**overrides, "variant": args.solver, "trace_level": trace_level})
    p = get_problem(args.problem)

    seed: Optional[int] = None
    if args.x0:
        x0 = parse_point(args.x0)
        if x0.shape[0] != p.n:
            raise ValueError(f"{p.name} needs a start point of length {p.n}, got {x0.shape[0]}")
    else:
        seed = args.seed if args.seed is not None else int(file_values.get("seed", settings.seed))
        x0 = random_start(p, seed)

    result = run(p, x0, cfg, start_index=0 if seed is not None else None, seed=seed)

    if args.trace:
        with open(args.trace, "w", encoding="utf8") as f:
            for record in result.trace:
                f.write(record.model_dump_json() + "\n")
    if args.output:
        with open(args.output, "w", encoding="utf8") as f:
            f.write(result.model_dump_json(indent=2, exclude={"trace"}))

    if args.format == "json":
        print(result.model_dump_json(indent=2, exclude={"trace"}))
    else:
        print(f"problem:    {result.problem}")
        print(f"solver:     {result.variant.value}")
        print(f"status:     {result.status.value}")
        print(f"iterations: {result.iterations}")
        print(f"f:          {' '.join(format(v, '.10g') for v in result.f)}")
        print(f"theta:      {result.theta:.3e}")
        print(f"evals:      {result.f_evals} F, {result.jac_evals} JF")
        print(f"wall time:  {result.wall_time:.4f}s")
        if result.message:
            print(f"message:    {result.message}")
    return exit_code(result.status)


def cmd_benchmark(args: argparse.Namespace) -> int:
    if args.manifest:
        manifest = read_manifest(args.manifest)
        spec = manifest.spec
        if args.output_dir:
            spec = spec.model_copy(update={"output_dir": args.output_dir})
    else:
        file_values = load_config_file(args.config)
        values: Dict[str, Any] = {k: file_values[k] for k in EXPERIMENT_KEYS if k in file_values}
        values.setdefault("seed", settings.seed)
        values.setdefault("n_starts", settings.n_starts)
        values.setdefault("jobs", settings.jobs)
        values.setdefault("output_dir", settings.output_dir)
        for key in EXPERIMENT_KEYS:
            value = getattr(args, key, None)
            if value is not None:
                values[key] = value
        values["overrides"] = solver_overrides(args, file_values)
        spec = ExperimentSpec(**values)
        # Fails early on invalid solver settings
        for variant in spec.solvers:
            spec.solver_config(variant)

    bundle = run_benchmark(spec)
    print(f"results written to {bundle.root}")
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    tables = recompute_metrics(args.results, args.source)
    for metric in METRICS:
        print(f"[{metric}]")
        for row in tables.tables[metric]:
            mark = " (flagged)" if row.flagged else ""
            print(f"  {row.problem:<8} {row.solver:<22} {row.value:.6g}{mark}")
    return EXIT_OK


COMMANDS = {
    "list-problems": cmd_list_problems,
    "solve": cmd_solve,
    "benchmark": cmd_benchmark,
    "metrics": cmd_metrics,
}


def attach_point_values(argv: Sequence[str]) -> List[str]:
    """
    Rewrite `--x0 -1,0.5` as `--x0=-1,0.5`.

    argparse reads a value such as -1,0.5 as an unknown option, so a
    start point with a negative first coordinate is glued to its flag.
    """
    out: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in POINT_FLAGS:
            value = next(tokens, None)
            if value is None:
                out.append(token)
                break
            out.append(f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(attach_point_values(sys.argv[1:] if argv is None else argv))
    set_level(args.log_level.upper() if args.log_level else settings.log_level)
    try:
        return COMMANDS[args.command](args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except UnknownProblemError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except (ValueError, FileNotFoundError) as e:
        logger.error(f"{e}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
