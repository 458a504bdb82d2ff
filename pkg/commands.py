"""CLI command handlers: each returns the rendered document and a process exit code."""
from __future__ import annotations

import asyncio
from typing import Optional

from config import log
from errors import MatchingDegenerateError, ProblemFormatError, SolverError
from models import Problem
from solvers import thermo_identities
from sweep import DEFAULT_WORKERS, SweepRunner
from utils import (
    error_report,
    format_csv,
    format_json,
    settings_for,
    solve_problem,
    solve_report,
    thermo_report,
    triangle_report,
    verify_problem,
)

EXIT_OK = 0
EXIT_SOLVER_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_MATCHING_DEGENERATE = 3


def _single_q(problem: Problem, command: str) -> float:
    if len(problem.q_values) != 1:
        raise ProblemFormatError(
            "q_values", f"{command} takes a single q, got {len(problem.q_values)}; use sweep-q"
        )
    return problem.q_values[0]


def cmd_solve(problem: Problem, *, tolerance: Optional[float] = None) -> tuple[str, int]:
    """Solve one problem and report the distribution with its identity residuals."""
    try:
        q = _single_q(problem, "solve")
        settings = settings_for(problem, tolerance)
        result = solve_problem(problem, q, settings)
    except SolverError as exc:
        log.error("Solve failed: %s", exc)
        return format_json(error_report("solve", exc)), EXIT_SOLVER_FAILURE
    except ValueError as exc:
        log.error("Invalid problem: %s", exc)
        return format_json(error_report("solve", exc)), EXIT_INPUT_ERROR
    try:
        thermo = thermo_report(thermo_identities(result, settings=settings))
    except SolverError as exc:
        # shifted re-solves can fail near the cut-off
        log.warning("Thermodynamic checks failed: %s", exc)
        thermo = {"error": str(exc)}
    return format_json(solve_report(result, thermo)), EXIT_OK


def cmd_verify_triangle(
    problem: Problem, *, tolerance: Optional[float] = None, scan_points: int = 0
) -> tuple[str, int]:
    """Run expectation matching and check the triangle equality; exit 0 iff it holds."""
    try:
        q = _single_q(problem, "verify-triangle")
        settings = settings_for(problem, tolerance)
        report = verify_problem(problem, q, settings, scan_points=scan_points)
    except MatchingDegenerateError as exc:
        log.error("Expectation matching degenerate: %s", exc)
        return format_json(error_report("verify-triangle", exc)), EXIT_MATCHING_DEGENERATE
    except SolverError as exc:
        log.error("Triangle check failed: %s", exc)
        return format_json(error_report("verify-triangle", exc)), EXIT_SOLVER_FAILURE
    except ValueError as exc:
        log.error("Invalid problem: %s", exc)
        return format_json(error_report("verify-triangle", exc)), EXIT_INPUT_ERROR
    code = EXIT_OK if report.passed() else EXIT_SOLVER_FAILURE
    return format_json(triangle_report(report)), code


def cmd_sweep_q(
    problem: Problem,
    *,
    tolerance: Optional[float] = None,
    max_workers: int = DEFAULT_WORKERS,
) -> tuple[str, int]:
    """One CSV row per q, in input order; row failures go to the error column."""
    settings = settings_for(problem, tolerance)
    runner = SweepRunner(problem, settings, max_workers)
    rows = asyncio.run(runner.run())
    return format_csv(rows, problem.constraints.labels), EXIT_OK


__all__ = [
    "EXIT_INPUT_ERROR",
    "EXIT_MATCHING_DEGENERATE",
    "EXIT_OK",
    "EXIT_SOLVER_FAILURE",
    "cmd_solve",
    "cmd_sweep_q",
    "cmd_verify_triangle",
]
