"""Problem-file parsing, problem dispatch and report formatting for the CLI."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import replace
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from distributions import trapezoid_grid, uniform_on
from errors import ProblemFormatError
from models import (
    ConstraintKind,
    ConstraintSet,
    Distribution,
    MomentFunction,
    Problem,
    SolveResult,
    SolverSettings,
    SupportGrid,
    SweepRow,
    ThermoReport,
    TriangleReport,
)
from solvers import solve
from triangle import verify_triangle, verify_triangle_normalized


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _number(raw: Any, field: str) -> float:
    if not _is_number(raw) or not math.isfinite(raw):
        raise ProblemFormatError(field, f"expected a finite number, got {raw!r}")
    return float(raw)


def _number_list(raw: Any, field: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise ProblemFormatError(field, "expected a non-empty list of numbers")
    return np.array([_number(value, f"{field}[{i}]") for i, value in enumerate(raw)], dtype=float)


def _positive_q(raw: Any, field: str) -> float:
    value = _number(raw, field)
    if value <= 0:
        raise ProblemFormatError(field, f"q must be positive, got {value!r}")
    return value


def _parse_grid(raw: Any) -> SupportGrid:
    if not isinstance(raw, dict):
        raise ProblemFormatError("grid", "expected an object")
    try:
        if "uniform" in raw:
            spec = raw["uniform"]
            if not isinstance(spec, dict):
                raise ProblemFormatError("grid.uniform", "expected an object")
            num = spec.get("num")
            if not isinstance(num, int) or isinstance(num, bool):
                raise ProblemFormatError("grid.uniform.num", f"expected an integer, got {num!r}")
            return trapezoid_grid(
                _number(spec.get("start"), "grid.uniform.start"),
                _number(spec.get("stop"), "grid.uniform.stop"),
                num,
            )
        points = _number_list(raw.get("points"), "grid.points")
        if raw.get("weights") is None:
            weights = np.ones_like(points)
        else:
            weights = _number_list(raw["weights"], "grid.weights")
        return SupportGrid(points, weights)
    except ProblemFormatError:
        raise
    except ValueError as exc:
        raise ProblemFormatError("grid", str(exc)) from exc


def _parse_distribution(raw: Any, field: str, grid: SupportGrid) -> Optional[Distribution]:
    if raw is None:
        return None
    density = _number_list(raw, field)
    try:
        return Distribution(grid, density)
    except ValueError as exc:
        raise ProblemFormatError(field, str(exc)) from exc


def _parse_constraints(raw: Any, kind: ConstraintKind, grid: SupportGrid) -> ConstraintSet:
    if raw is None:
        raw = []
    if not isinstance(raw, list):
        raise ProblemFormatError("constraints", "expected a list")
    functions = []
    targets = []
    for i, item in enumerate(raw):
        field = f"constraints[{i}]"
        if not isinstance(item, dict):
            raise ProblemFormatError(field, "expected an object")
        label = item.get("label", f"u{i + 1}")
        if not isinstance(label, str) or not label:
            raise ProblemFormatError(f"{field}.label", "expected a non-empty string")
        values = _number_list(item.get("values"), f"{field}.values")
        if values.size != grid.size:
            raise ProblemFormatError(
                f"{field}.values", f"{values.size} values for {grid.size} grid points"
            )
        try:
            functions.append(MomentFunction(values, label))
        except ValueError as exc:
            raise ProblemFormatError(f"{field}.values", str(exc)) from exc
        target = item.get("target")
        # verify-triangle computes its own targets
        targets.append(math.nan if target is None else _number(target, f"{field}.target"))
    return ConstraintSet(tuple(functions), np.array(targets, dtype=float), kind)


def _parse_q_values(document: Mapping[str, Any]) -> tuple[float, ...]:
    if "q" in document and "q_values" in document:
        raise ProblemFormatError("q", "give either q or q_values, not both")
    if "q" in document:
        return (_positive_q(document["q"], "q"),)
    if "q_values" in document:
        raw = document["q_values"]
        if not isinstance(raw, list):
            raise ProblemFormatError("q_values", "expected a list of numbers")
        return tuple(_positive_q(value, f"q_values[{i}]") for i, value in enumerate(raw))
    raise ProblemFormatError("q", "missing entropic index (q or q_values)")


def _parse_options(raw: Any) -> tuple[Optional[float], Optional[int]]:
    if raw is None:
        return None, None
    if not isinstance(raw, dict):
        raise ProblemFormatError("options", "expected an object")
    tolerance = raw.get("tolerance")
    if tolerance is not None:
        tolerance = _number(tolerance, "options.tolerance")
        if tolerance <= 0:
            raise ProblemFormatError("options.tolerance", "must be positive")
    max_iterations = raw.get("max_iterations")
    if max_iterations is not None:
        if not isinstance(max_iterations, int) or isinstance(max_iterations, bool):
            raise ProblemFormatError("options.max_iterations", "expected an integer")
        if max_iterations < 1:
            raise ProblemFormatError("options.max_iterations", "must be >= 1")
    return tolerance, max_iterations


def load_problem(text: str) -> Problem:
    """Parse a JSON problem document into model objects."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError("", exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(document, dict):
        raise ProblemFormatError("", "problem must be a JSON object")
    kind_raw = document.get("kind", ConstraintKind.Q_EXPECTATION.value)
    try:
        kind = ConstraintKind(kind_raw)
    except ValueError as exc:
        raise ProblemFormatError("kind", f"expected 'q' or 'normalized', got {kind_raw!r}") from exc
    grid = _parse_grid(document.get("grid"))
    tolerance, max_iterations = _parse_options(document.get("options"))
    return Problem(
        grid=grid,
        constraints=_parse_constraints(document.get("constraints"), kind, grid),
        q_values=_parse_q_values(document),
        prior=_parse_distribution(document.get("prior"), "prior", grid),
        observed=_parse_distribution(document.get("observed"), "observed", grid),
        tolerance=tolerance,
        max_iterations=max_iterations,
    )


def read_problem(path: str) -> Problem:
    if path == "-":
        return load_problem(sys.stdin.read())
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ProblemFormatError("", f"cannot read {path}: {exc.strerror}") from exc
    return load_problem(text)


def with_kind(problem: Problem, kind: ConstraintKind | str) -> Problem:
    return replace(problem, constraints=problem.constraints.with_kind(kind))


def settings_for(problem: Problem, tolerance: Optional[float] = None) -> SolverSettings:
    """Solver settings from the problem options, with a CLI tolerance taking precedence."""
    settings = SolverSettings()
    if problem.tolerance is not None:
        settings.tolerance = problem.tolerance
    if tolerance is not None:
        settings.tolerance = tolerance
    if problem.max_iterations is not None:
        settings.max_iterations = problem.max_iterations
    return settings


def solve_problem(
    problem: Problem, q: float, settings: Optional[SolverSettings] = None
) -> SolveResult:
    targets = problem.constraints.targets
    for i, target in enumerate(targets):
        if not math.isfinite(target):
            raise ProblemFormatError(f"constraints[{i}].target", "required to solve")
    return solve(
        problem.constraints,
        q,
        prior=problem.prior,
        grid=problem.grid,
        settings=settings or settings_for(problem),
    )


def verify_problem(
    problem: Problem,
    q: float,
    settings: Optional[SolverSettings] = None,
    *,
    scan_points: int = 0,
) -> TriangleReport:
    if problem.observed is None:
        raise ProblemFormatError("observed", "the triangle check needs the true distribution l")
    prior = problem.prior if problem.prior is not None else uniform_on(problem.grid)
    settings = settings or settings_for(problem)
    functions = problem.constraints.functions
    if problem.constraints.kind is ConstraintKind.NORMALIZED:
        return verify_triangle_normalized(problem.observed, prior, functions, q, settings=settings)
    return verify_triangle(
        problem.observed, prior, functions, q, settings=settings, scan_points=scan_points
    )


def _clean(value: Any) -> Any:
    """JSON-ready copy: numpy values become Python ones, non-finite floats become null."""
    if isinstance(value, dict):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


def thermo_report(report: ThermoReport) -> dict[str, Any]:
    return {
        "identity_residual": report.identity_residual,
        "potential_slope_residuals": report.potential_slope_residuals,
        "divergence_slope_residuals": report.divergence_slope_residuals,
        "shifted_potential": report.shifted_potential,
        "step": report.step,
        "passed": report.passed(),
    }


def solve_report(result: SolveResult, thermo: Optional[Mapping[str, Any]] = None) -> dict[str, Any]:
    return {
        "command": "solve",
        "branch": result.branch.value,
        "kind": result.constraints.kind.value,
        "q": result.q.q,
        "density": result.distribution.density,
        "multipliers": result.multipliers,
        "normalized_multipliers": result.normalized_multipliers,
        "partition_value": result.partition_value,
        "divergence": result.divergence,
        "expectations": result.expectations,
        "iterations": result.iterations,
        "outer_iterations": result.outer_iterations,
        "residual_norm": result.residual_norm,
        "thermo": thermo,
    }


def triangle_report(report: TriangleReport) -> dict[str, Any]:
    return {
        "command": "verify-triangle",
        "kind": report.kind.value,
        "q": report.q.q,
        "d_lr": report.d_lr,
        "d_lp": report.d_lp,
        "d_pr": report.d_pr,
        "residual": report.residual,
        "passed": report.passed(),
        "inequality_holds": report.inequality_holds(),
        "matched_targets": report.matched_targets,
        "fixed_point_iterations": report.fixed_point_iterations,
        "minimality_asserted": report.minimality_asserted,
        "posterior": report.posterior.distribution.density,
        "multipliers": report.posterior.multipliers,
        "scan_profile": [list(point) for point in report.scan_profile],
    }


def error_report(command: str, exc: BaseException) -> dict[str, Any]:
    document: dict[str, Any] = {
        "command": command,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }
    if isinstance(exc, ProblemFormatError):
        document["error"]["field"] = exc.field
    return document


def format_json(document: Mapping[str, Any]) -> str:
    """Deterministic JSON: insertion key order, shortest round-trip floats."""
    return json.dumps(_clean(document), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def _csv_number(value: Optional[float]) -> str:
    if value is None or not math.isfinite(value):
        return ""
    return repr(float(value))


def sweep_header(labels: Sequence[str]) -> list[str]:
    return [
        "q",
        "divergence",
        "partition_value",
        *(f"beta_{label}" for label in labels),
        "d_lr",
        "d_lp",
        "d_pr",
        "triangle_residual",
        "error",
    ]


def format_csv(rows: Iterable[SweepRow], labels: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(sweep_header(labels))
    for row in rows:
        betas = list(row.multipliers) or [None] * len(labels)
        writer.writerow(
            [
                _csv_number(row.q),
                _csv_number(row.divergence),
                _csv_number(row.partition_value),
                *(_csv_number(value) for value in betas),
                _csv_number(row.d_lr),
                _csv_number(row.d_lp),
                _csv_number(row.d_pr),
                _csv_number(row.triangle_residual),
                row.error,
            ]
        )
    return buffer.getvalue()


__all__ = [
    "error_report",
    "format_csv",
    "format_json",
    "load_problem",
    "read_problem",
    "settings_for",
    "solve_problem",
    "solve_report",
    "sweep_header",
    "thermo_report",
    "triangle_report",
    "verify_problem",
    "with_kind",
]
