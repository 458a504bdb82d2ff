"""Concurrent q-sweeps: one problem evaluated across a list of entropic indices."""
from __future__ import annotations

import asyncio
from typing import Optional, Sequence

from config import log
from errors import TsallisError
from models import Problem, SolverSettings, SweepRow
from utils import solve_problem, verify_problem

DEFAULT_WORKERS = 4


def evaluate_row(problem: Problem, q: float, settings: Optional[SolverSettings] = None) -> SweepRow:
    """Solve (and verify, when l is given) one q; failures land in ``error``."""
    row = SweepRow(q=float(q))
    try:
        if problem.observed is not None:
            report = verify_problem(problem, q, settings)
            result = report.posterior
            row.d_lr = report.d_lr
            row.d_lp = report.d_lp
            row.d_pr = report.d_pr
            row.triangle_residual = report.residual
        else:
            result = solve_problem(problem, q, settings)
        row.divergence = result.divergence
        row.partition_value = result.partition_value
        row.multipliers = tuple(float(value) for value in result.multipliers)
    except (TsallisError, ValueError) as exc:
        log.warning("Sweep row q=%s failed: %s", q, exc)
        row.error = f"{type(exc).__name__}: {exc}"
    return row


class SweepRunner:
    """Runs sweep rows on worker threads and keeps them in input order."""

    def __init__(
        self,
        problem: Problem,
        settings: Optional[SolverSettings] = None,
        max_workers: int = DEFAULT_WORKERS,
    ) -> None:
        if max_workers < 1:
            raise ValueError("max_workers must be >= 1")
        self.problem = problem
        self.settings = settings
        self.max_workers = max_workers

    async def _row(self, semaphore: asyncio.Semaphore, q: float) -> SweepRow:
        async with semaphore:
            return await asyncio.to_thread(evaluate_row, self.problem, q, self.settings)

    async def run(self, q_values: Optional[Sequence[float]] = None) -> list[SweepRow]:
        values = tuple(self.problem.q_values if q_values is None else q_values)
        if not values:
            return []
        semaphore = asyncio.Semaphore(self.max_workers)
        rows = await asyncio.gather(*(self._row(semaphore, q) for q in values))
        failed = sum(1 for row in rows if row.error)
        log.info("Sweep finished: %s rows, %s failed", len(rows), failed)
        return list(rows)


def run_sweep(
    problem: Problem,
    settings: Optional[SolverSettings] = None,
    max_workers: int = DEFAULT_WORKERS,
) -> list[SweepRow]:
    return asyncio.run(SweepRunner(problem, settings, max_workers).run())


__all__ = ["SweepRunner", "evaluate_row", "run_sweep"]
