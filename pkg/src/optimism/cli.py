"""Command line front end: list scenarios, describe their constants, run
them and write the row table as CSV or JSON.

Exit codes: 0 success, 2 unknown scenario or unusable configuration,
3 output I/O failure, 4 estimator hard error.  Diagnostics go to stderr;
with ``--out -`` stdout carries only data.
"""

from __future__ import annotations

import argparse
import sys

from .estimators import EstimatorError
from .experiments import DEFAULT_SEED, SCENARIOS, run_scenario


def _grid_arg(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"--grid expects a comma-separated list of numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="optimism",
        description="Expected-optimism and degrees-of-freedom scenarios "
                    "for regularized regression.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list available scenarios")

    describe = sub.add_parser("describe", help="print a scenario's constants")
    describe.add_argument("scenario")

    run = sub.add_parser("run", help="run a scenario and emit its rows")
    run.add_argument("scenario")
    run.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"master seed (default {DEFAULT_SEED})")
    run.add_argument("--replicates", type=int, default=None,
                     help="override the Monte Carlo replicate count")
    run.add_argument("--out", default="-",
                     help="output path, or - for stdout (default)")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--grid", type=_grid_arg, default=None,
                     help="comma-separated override of the scenario's grid")
    run.add_argument("--noise-as-sd", action="store_true",
                     help="read the lasso noise constant as an sd, not a variance")
    run.add_argument("--threads", type=int, default=1,
                     help="worker threads (results are identical at any count)")
    return parser


def cmd_list() -> int:
    for name in sorted(SCENARIOS):
        print(f"{name}: {SCENARIOS[name].anchor}")
    return 0


def cmd_describe(name: str) -> int:
    sc = SCENARIOS.get(name)
    if sc is None:
        print(f"unknown scenario: {name}", file=sys.stderr)
        return 2
    print(f"scenario: {sc.name}")
    print(f"reproduces: {sc.anchor}")
    for line in sc.describe_lines:
        print(f"  {line}")
    if sc.grid_param:
        print(f"  --grid overrides the {sc.grid_param} grid")
    return 0


def cmd_run(args) -> int:
    sc = SCENARIOS.get(args.scenario)
    if sc is None:
        print(f"unknown scenario: {args.scenario}", file=sys.stderr)
        return 2
    if args.replicates is not None and args.replicates < 2:
        print("--replicates must be >= 2", file=sys.stderr)
        return 2
    if args.threads < 1:
        print("--threads must be >= 1", file=sys.stderr)
        return 2
    if args.grid is not None and sc.grid_param is None:
        print(f"note: {sc.name} has no overridable grid; ignoring --grid",
              file=sys.stderr)
        args.grid = None
    if args.noise_as_sd and not sc.supports_noise_as_sd:
        print(f"note: {sc.name} has no sd/variance reading; "
              "ignoring --noise-as-sd", file=sys.stderr)
        args.noise_as_sd = False

    try:
        result = run_scenario(sc.name, seed=args.seed,
                              replicates=args.replicates, grid=args.grid,
                              noise_as_sd=args.noise_as_sd,
                              threads=args.threads)
    except EstimatorError as exc:
        print(f"estimator error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2

    try:
        if args.out == "-":
            _write(result, sys.stdout, args.format)
        else:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                _write(result, fh, args.format)
    except OSError as exc:
        print(f"cannot write {args.out!r}: {exc}", file=sys.stderr)
        return 3
    return 0


def _write(result, fh, fmt: str) -> None:
    if fmt == "csv":
        result.write_csv(fh)
    else:
        fh.write(result.to_json())


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        return cmd_list()
    if args.command == "describe":
        return cmd_describe(args.scenario)
    return cmd_run(args)


if __name__ == "__main__":
    sys.exit(main())
