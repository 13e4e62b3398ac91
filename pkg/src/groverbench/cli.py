"""Command-line front end for plans, single searches, and cost predictions."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bench import ExperimentPlan, emit_scaling_series, emit_table, run_plan
from .ops import Algorithm, predict_cost
from .search import SearchConfig, run_grk_partial, run_search, verify_outcome

_FORMAT_EXT = {"csv": "csv", "json": "json", "markdown": "md"}


def _algorithm(token: str) -> Algorithm:
    try:
        return Algorithm(token.strip().upper())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown algorithm {token!r}; choose from GS, GRK, DFGS, BDGS"
        ) from None


def _algorithm_list(text: str) -> list[Algorithm]:
    return [_algorithm(token) for token in text.split(",") if token.strip()]


def _int_list(text: str) -> list[int]:
    return [int(token) for token in text.split(",") if token.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groverbench",
        description="Benchmark standard, block-partial, depth-first, and "
        "bi-directional amplitude-amplification search on a statevector simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_cmd = sub.add_parser("run", help="execute a trial plan and export tables")
    run_cmd.add_argument("--qubits", type=_int_list, default=[4, 8, 16, 20])
    run_cmd.add_argument("--algo", type=_algorithm_list, default=[Algorithm.GS, Algorithm.DFGS, Algorithm.BDGS])
    run_cmd.add_argument("--trials", type=int, default=5)
    run_cmd.add_argument("--shots", type=int, default=1024)
    run_cmd.add_argument("--seed", type=int, default=0)
    run_cmd.add_argument("--block-size", type=int, default=4)
    run_cmd.add_argument("--target", type=int, default=None,
                         help="fixed target index (default: random per trial)")
    run_cmd.add_argument("--format", choices=sorted(_FORMAT_EXT), default="csv")
    run_cmd.add_argument("--out", default=None,
                         help="output directory (default: $GROVERBENCH_OUT or cwd)")
    run_cmd.add_argument("--jobs", type=int, default=1)

    search_cmd = sub.add_parser("search", help="run one search and print the outcome")
    search_cmd.add_argument("--qubits", type=int, required=True)
    search_cmd.add_argument("--algo", type=_algorithm, default=Algorithm.GS)
    search_cmd.add_argument("--target", type=int, default=None,
                            help="target index (default: random from seed)")
    search_cmd.add_argument("--shots", type=int, default=1024)
    search_cmd.add_argument("--seed", type=int, default=0)
    search_cmd.add_argument("--block-size", type=int, default=4)

    predict_cmd = sub.add_parser("predict", help="print closed-form cost predictions")
    predict_cmd.add_argument("--qubits", type=int, required=True)
    predict_cmd.add_argument("--algo", type=_algorithm, required=True)
    predict_cmd.add_argument("--block-size", type=int, default=4)

    return parser


def _output_dir(arg: str | None) -> Path:
    path = Path(arg or os.environ.get("GROVERBENCH_OUT") or ".")
    path.mkdir(parents=True, exist_ok=True)
    return path


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        plan = ExperimentPlan(
            qubit_list=args.qubits,
            algorithms=args.algo,
            trials=args.trials,
            shots=args.shots,
            base_seed=args.seed,
            target_policy="fixed" if args.target is not None else "random-per-trial",
            target=args.target,
            block_size=args.block_size,
        )
    except ValueError as exc:
        print(f"invalid plan: {exc}", file=sys.stderr)
        return 2

    table = run_plan(plan, jobs=args.jobs)
    out_dir = _output_dir(args.out)
    table_path = out_dir / f"results.{_FORMAT_EXT[args.format]}"
    table_path.write_bytes(emit_table(table, args.format))
    written = [table_path]
    if len(set(plan.qubit_list)) >= 2 and table.rows:
        for name, payload in emit_scaling_series(table, plan.block_size).items():
            path = out_dir / name
            path.write_bytes(payload)
            written.append(path)

    for agg in table.aggregates:
        print(
            f"{agg.qubits:>2} qubits {agg.algorithm.value:<4} "
            f"accuracy {agg.accuracy_pct:6.2f}%  mean time {agg.time_s:.5f}s"
        )
    for path in written:
        print(f"wrote {path}")
    if table.errors:
        for err in table.errors:
            print(
                f"cell failed: r={err.qubits} {err.algorithm.value} "
                f"trial {err.trial}: {err.message}",
                file=sys.stderr,
            )
        return 1
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    target = args.target
    if target is None:
        target = int(np.random.default_rng(args.seed + 1).integers(0, 1 << args.qubits))
    try:
        config = SearchConfig(
            r=args.qubits,
            target=target,
            algorithm=args.algo,
            b=args.block_size,
            shots=args.shots,
            seed=args.seed,
        )
    except ValueError as exc:
        print(f"invalid search config: {exc}", file=sys.stderr)
        return 2

    report = {"algorithm": config.algorithm.value, "r": config.r, "target": config.target}
    if config.algorithm is Algorithm.GRK:
        block, outcome = run_grk_partial(config)
        report["resolved_block"] = block
    else:
        outcome = run_search(config)
    report["outcome"] = outcome.to_dict()
    report["verified"] = verify_outcome(outcome, config)
    print(json.dumps(report, indent=2))
    return 0


def _cmd_predict(args: argparse.Namespace) -> int:
    try:
        cost = predict_cost(args.algo, args.qubits, args.block_size)
    except ValueError as exc:
        print(f"invalid prediction request: {exc}", file=sys.stderr)
        return 2
    print(
        json.dumps(
            {
                "algorithm": cost.algorithm.value,
                "r": args.qubits,
                "b": args.block_size,
                "k": args.block_size.bit_length() - 1,
                "layers": cost.layers,
                "oracle_calls_bound": cost.oracle_calls,
            },
            indent=2,
        )
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "search":
        return _cmd_search(args)
    return _cmd_predict(args)


if __name__ == "__main__":
    sys.exit(main())
