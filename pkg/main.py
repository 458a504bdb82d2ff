"""Command-line entrypoint: ``solve``, ``verify-triangle`` and ``sweep-q``."""
from __future__ import annotations

import argparse
import logging
import sys

import commands
from config import MATCHING_SCAN_POINTS, log
from errors import ProblemFormatError
from models import ConstraintKind
from sweep import DEFAULT_WORKERS
from utils import read_problem, with_kind


def _positive_float(value: str) -> float:
    number = float(value)
    if not number > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsallis",
        description="Tsallis maxent/minxent solver and triangle-equality verifier",
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="override TSALLIS_LOG_LEVEL",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def add_common(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--input", default="-", help="problem JSON file, '-' for stdin")
        sub.add_argument("--output", default="-", help="report file, '-' for stdout")
        sub.add_argument(
            "--kind",
            choices=[kind.value for kind in ConstraintKind],
            help="override the constraint kind of the problem file",
        )
        sub.add_argument("--tolerance", type=_positive_float, help="constraint tolerance")

    add_common(subparsers.add_parser("solve", help="solve for the multipliers"))
    verify = subparsers.add_parser("verify-triangle", help="check the triangle equality")
    add_common(verify)
    verify.add_argument(
        "--scan-points",
        type=int,
        default=0,
        help=f"log a target scan around the matched target (e.g. {MATCHING_SCAN_POINTS})",
    )
    sweep = subparsers.add_parser("sweep-q", help="CSV over the problem's q_values")
    add_common(sweep)
    sweep.add_argument("--workers", type=int, default=DEFAULT_WORKERS, help="concurrent rows")
    return parser


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = build_parser().parse_args(argv)
    if args.log_level:
        logging.getLogger().setLevel(args.log_level)
        log.setLevel(args.log_level)

    try:
        problem = read_problem(args.input)
    except ProblemFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return commands.EXIT_INPUT_ERROR
    if args.kind:
        problem = with_kind(problem, args.kind)

    if args.command == "solve":
        text, code = commands.cmd_solve(problem, tolerance=args.tolerance)
    elif args.command == "verify-triangle":
        text, code = commands.cmd_verify_triangle(
            problem, tolerance=args.tolerance, scan_points=args.scan_points
        )
    else:
        text, code = commands.cmd_sweep_q(
            problem, tolerance=args.tolerance, max_workers=max(1, args.workers)
        )
    _write(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
