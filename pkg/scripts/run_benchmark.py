"""Run the full benchmark sweep and print a per-solver summary of the results bundle."""
import argparse
import sys
from collections import defaultdict
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.experiments.benchmark import run_benchmark  # noqa: E402
from src.metrics.profiles import rho_at  # noqa: E402
from src.models.enums import RunStatus, SolverVariant  # noqa: E402
from src.models.schemas import ExperimentSpec  # noqa: E402


def summarize(bundle):
    runs = bundle.read_runs()
    converged = defaultdict(int)
    total = defaultdict(int)
    for r in runs:
        total[r.solver.value] += 1
        converged[r.solver.value] += r.status == RunStatus.CONVERGED

    purity = defaultdict(list)
    for row in bundle.read_metric("purity"):
        purity[row.solver].append(row.value)
    evals = bundle.read_profile("evals")

    print(f"{'solver':<22} {'converged':>10} {'purity':>8} {'rho_evals(1)':>13}")
    for solver in sorted(total):
        rate = converged[solver] / total[solver]
        mean_purity = sum(purity[solver]) / len(purity[solver]) if purity[solver] else 0.0
        print(f"{solver:<22} {rate:>10.1%} {mean_purity:>8.3f} {rho_at(evals.get(solver, []), 1.0):>13.3f}")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--output", default="./results")
    parser.add_argument("--starts", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--solvers", nargs="+", choices=[v.value for v in SolverVariant])
    args = parser.parse_args()

    spec = ExperimentSpec(
        problems=["all"],
        solvers=args.solvers or list(SolverVariant),
        n_starts=args.starts,
        seed=args.seed,
        jobs=args.jobs,
        output_dir=args.output,
    )
    bundle = run_benchmark(spec)
    summarize(bundle)


if __name__ == "__main__":
    main()
