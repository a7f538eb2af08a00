"""Command-line harness: analyze, solve, gen, and bench subcommands.

Exit codes: 0 success, 2 bad input, 3 a cap or retry budget was exceeded,
4 an internal assertion failed.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
from pathlib import Path

from .alg_p import CHAIN_CAP
from .alg_q import ORDERED_CHAIN_CAP
from .errors import (
    BudgetExceeded,
    CapExceeded,
    GenerationFailed,
    InstanceFormatError,
    InvariantViolation,
    NearTSPError,
    NotMetric,
)
from .generate import GeneratorSpec, generate, suite_specs
from .graph import (
    bad_vertices_p,
    load_instance,
    min_violating_set,
    save_instance,
    violating_triangles,
)
from .prims import BRUTE_FORCE_CAP, HELD_KARP_CAP
from .report import SolveReport, reports_to_csv
from .solver import ALGORITHMS, attach_oracle, solve

_SUITE_DEFAULT_ALG = {"metric": "christofides", "p": "alg2", "q": "alg4"}


def _cmd_analyze(args: argparse.Namespace) -> int:
    g = load_instance(args.instance)
    part = min_violating_set(g)
    print(f"n: {g.n}")
    print(f"violating_triangles: {len(violating_triangles(g))}")
    print(f"p: {bad_vertices_p(g).size}")
    print(f"q: {part.size}")
    print(f"min_violating_set: {sorted(part.bad)}")
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    g = load_instance(args.instance)
    report = solve(
        g,
        args.alg,
        chain_cap=args.chain_cap,
        ordered_chain_cap=args.ordered_chain_cap,
        hk_cap=args.hk_cap,
    )
    if not args.no_oracle and g.n <= args.brute_cap:
        report = attach_oracle(g, report, cap=args.brute_cap)
    print(report.to_json())
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(kind=args.kind, n=args.n, target=args.target, seed=args.seed)
    g = generate(spec)
    save_instance(g, args.output)
    return 0


def _bench_one(task: tuple[str, GeneratorSpec, str]) -> tuple[str, int, SolveReport]:
    instance_id, spec, algorithm = task
    g = generate(spec)
    report = attach_oracle(g, solve(g, algorithm))
    return instance_id, g.n, report


def _worker_count(args: argparse.Namespace) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("NEARTSP_THREADS")
    if env is not None:
        return max(1, int(env))
    return 1


def _cmd_bench(args: argparse.Namespace) -> int:
    algorithm = args.alg or _SUITE_DEFAULT_ALG[args.suite]
    tasks = [
        (instance_id, spec, algorithm)
        for instance_id, spec in suite_specs(args.suite, args.count, args.seed)
    ]
    workers = _worker_count(args)
    if workers == 1:
        results = [_bench_one(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_one, tasks))
    results.sort(key=lambda row: row[0])
    Path(args.output).write_text(reports_to_csv(results))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neartsp", description="solvers for almost-metric tour instances"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="print instance difficulty parameters")
    p_analyze.add_argument("instance", help="instance file")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_solve = sub.add_parser("solve", help="solve an instance, report JSON on stdout")
    p_solve.add_argument("instance", help="instance file")
    p_solve.add_argument("--alg", required=True, choices=ALGORITHMS)
    p_solve.add_argument("--chain-cap", type=int, default=CHAIN_CAP)
    p_solve.add_argument("--ordered-chain-cap", type=int, default=ORDERED_CHAIN_CAP)
    p_solve.add_argument("--hk-cap", type=int, default=HELD_KARP_CAP)
    p_solve.add_argument("--brute-cap", type=int, default=BRUTE_FORCE_CAP)
    p_solve.add_argument(
        "--no-oracle",
        action="store_true",
        help="skip the exact optimum even when the instance is small enough",
    )
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("--kind", required=True, choices=("randomMetric", "plantedP", "plantedQ"))
    p_gen.add_argument("--n", required=True, type=int)
    p_gen.add_argument("--target", type=int, default=0, help="target p or q (planted kinds)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_bench = sub.add_parser("bench", help="generate, solve, and compare against the oracle")
    p_bench.add_argument("--suite", required=True, choices=("metric", "p", "q"))
    p_bench.add_argument("--count", required=True, type=int)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--alg", choices=ALGORITHMS, help="override the suite default")
    p_bench.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker processes (default: NEARTSP_THREADS or 1)",
    )
    p_bench.add_argument("-o", "--output", required=True)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, NotMetric, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, BudgetExceeded, GenerationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (InvariantViolation, NearTSPError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
