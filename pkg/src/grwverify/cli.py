"""Command-line entry point: ``grwverify run | list-checks | validate``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import GRWError, ScenarioError
from .report import dumps_json, render_text
from .scenario import CHECKS, SamplingError, load_scenario, run_scenario

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"point count must be at least 1, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grwverify", description=__doc__)
    parser.add_argument("--version", action="version", version=f"grwverify {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and emit a report")
    run.add_argument("--scenario", required=True, help="scenario file or bundled scenario name")
    run.add_argument("--format", choices=("json", "text"), default=None)
    run.add_argument("--out", default=None, help="write the report here instead of stdout")
    run.add_argument("--seed", type=_u64, default=None)
    run.add_argument("--tol", type=_positive_float, default=None)
    run.add_argument("--points", type=_positive_int, default=None)

    sub.add_parser("list-checks", help="list available check ids")

    val = sub.add_parser("validate", help="schema-check a scenario without evaluating it")
    val.add_argument("--scenario", required=True)
    return parser


def _run(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
        report = run_scenario(scenario, seed=args.seed, tol=args.tol, points=args.points)
    except (ScenarioError, SamplingError) as exc:
        print(f"grwverify: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    fmt = args.format or scenario.output.get("format", "json")
    text = dumps_json(report) if fmt == "json" else render_text(report)
    out = args.out or scenario.output.get("path")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["overall"] == "PASS" else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "list-checks":
        width = max(map(len, CHECKS))
        for cid, (_, summary) in CHECKS.items():
            print(f"{cid:<{width}}  {summary}")
        return EXIT_OK
    if args.command == "validate":
        try:
            scenario = load_scenario(args.scenario)
        except ScenarioError as exc:
            print(f"grwverify: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"{scenario.name}: valid ({len(scenario.checks)} checks)")
        return EXIT_OK
    try:
        return _run(args)
    except GRWError as exc:
        print(f"grwverify: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
