"""Expectation matching and the nonextensive triangle equality.

For a true distribution l, a prior r and moment functions u, the posterior p
is the minimum relative-entropy solution whose targets make I_q(l||p)
stationary. The three divergences then satisfy

    I_q(l||r) = I_q(l||p) + I_q(p||r) + (q - 1) I_q(l||p) I_q(p||r).
"""
from __future__ import annotations

from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import newton

from config import MATCHING_POLISH_STEPS, MATCHING_POLISH_TOL, MATCHING_SCAN_POINTS, log
from distributions import (
    absolutely_continuous,
    normalized_q_expectation,
    q_expectation,
    require_same_grid,
)
from entropy import tsallis_relative_entropy
from errors import (
    AbsoluteContinuityError,
    MatchingDegenerateError,
    NonConvergenceError,
    SolverError,
)
from models import (
    Composition,
    ConstraintKind,
    ConstraintSet,
    Distribution,
    MatchResult,
    MomentFunction,
    QIndex,
    QLike,
    SolveResult,
    SolverSettings,
    TriangleReport,
    as_qindex,
)
from q_algebra import pseudo_add
from solvers import solve, solve_normalized

Functions = Union[ConstraintSet, Sequence[MomentFunction]]


def _moment_functions(functions: Functions) -> Tuple[MomentFunction, ...]:
    if isinstance(functions, ConstraintSet):
        return functions.functions
    return tuple(functions)


def _check_inputs(l: Distribution, prior: Distribution) -> None:
    require_same_grid(l, prior)
    if not absolutely_continuous(l, prior):
        raise AbsoluteContinuityError("l puts mass on points where the prior vanishes")


def _divergence_to_posterior(l: Distribution, posterior: SolveResult, q: QIndex) -> float:
    if not absolutely_continuous(l, posterior.distribution):
        raise AbsoluteContinuityError("posterior cuts off mass of l")
    return tsallis_relative_entropy(l, posterior.distribution, q)


class _DenominatorMap:
    """D -> 1 - (1-q) I_q(l||p) for the posterior at targets <w>_q / D.

    Keeps the last multipliers as a warm start and the evaluation with the
    smallest fixed-point gap seen so far.
    """

    def __init__(
        self,
        l: Distribution,
        prior: Distribution,
        constraints: ConstraintSet,
        observed: np.ndarray,
        index: QIndex,
        settings: SolverSettings,
    ) -> None:
        self.l = l
        self.prior = prior
        self.constraints = constraints
        self.observed = observed
        self.index = index
        self.settings = settings
        self.initial: Optional[np.ndarray] = None
        self.best: Optional[Tuple[float, float, SolveResult, float, float]] = None

    def __call__(self, denominator: float) -> Tuple[SolveResult, float, float]:
        posterior = solve(
            self.constraints.with_targets(self.observed / denominator),
            self.index,
            prior=self.prior,
            settings=self.settings,
            initial=self.initial,
        )
        self.initial = posterior.multipliers
        d_lp = _divergence_to_posterior(self.l, posterior, self.index)
        fixed = 1.0 - (1.0 - self.index.effective) * d_lp
        if fixed <= 0.0:
            raise MatchingDegenerateError(
                f"matching denominator {fixed!r} is not positive (I_q(l||p)={d_lp!r})"
            )
        gap = abs(fixed - denominator)
        if self.best is None or gap < self.best[0]:
            self.best = (gap, denominator, posterior, d_lp, fixed)
        return posterior, d_lp, fixed

    def gap(self, denominator: float) -> float:
        return self(denominator)[2] - denominator

    def polish(self, denominator: float, previous: float) -> None:
        try:
            root = newton(
                self.gap,
                denominator,
                x1=previous,
                tol=MATCHING_POLISH_TOL,
                maxiter=MATCHING_POLISH_STEPS,
                disp=False,
            )
            self.gap(float(root))
        except (SolverError, ValueError, ArithmeticError) as exc:
            log.debug("Matching polish stopped at %r: %s", denominator, exc)


def expectation_match(
    l: Distribution,
    prior: Distribution,
    functions: Functions,
    q: QLike,
    *,
    settings: Optional[SolverSettings] = None,
) -> MatchResult:
    """Self-consistent targets <u>_q = <w>_q / (1 - (1-q) I_q(l||p)).

    <w>_q are the q-expectations under l. The shared scalar denominator is
    iterated to a damped fixed point starting from 1, with a warm-started
    minxent solve at every step, then polished by secant steps on the
    fixed-point gap.
    """
    index = as_qindex(q).require_positive()
    settings = settings or SolverSettings()
    _check_inputs(l, prior)
    items = _moment_functions(functions)
    observed = np.array([q_expectation(l, u, index) for u in items], dtype=float)
    constraints = ConstraintSet(items, observed, ConstraintKind.Q_EXPECTATION)
    mapping = _DenominatorMap(l, prior, constraints, observed, index, settings)

    denominator = previous = 1.0
    damping = settings.damping
    for iteration in range(1, settings.max_matching_iterations + 1):
        _, _, fixed = mapping(denominator)
        gap = fixed - denominator
        log.debug("Matching iteration %s: denominator %r, gap %.3e", iteration, denominator, gap)
        if abs(gap) <= settings.matching_tolerance:
            if gap != 0.0:
                mapping.polish(denominator, previous if previous != denominator else fixed)
            assert mapping.best is not None
            _, used, posterior, d_lp, fixed = mapping.best
            return MatchResult(
                targets=observed / used,
                observed_targets=observed,
                posterior=posterior,
                d_lp=d_lp,
                denominator=fixed,
                iterations=iteration,
            )
        previous = denominator
        denominator += damping * gap
    raise NonConvergenceError(
        f"expectation matching did not converge in {settings.max_matching_iterations} iterations"
    )


def matching_scan(
    l: Distribution,
    prior: Distribution,
    functions: Functions,
    q: QLike,
    *,
    center: Optional[float] = None,
    half_width: Optional[float] = None,
    points: int = MATCHING_SCAN_POINTS,
    settings: Optional[SolverSettings] = None,
) -> Tuple[Tuple[float, float], ...]:
    """Profile of I_q(l||p(t)) over a single target t.

    Targets the solver cannot reach, or whose posterior cuts off mass of l,
    are left out of the profile.
    """
    index = as_qindex(q).require_positive()
    _check_inputs(l, prior)
    items = _moment_functions(functions)
    if len(items) != 1:
        raise ValueError(f"matching scan needs exactly one moment function, got {len(items)}")
    if center is None:
        center = q_expectation(l, items[0], index)
    if half_width is None:
        half_width = 0.05 * max(abs(center), 0.1)
    constraints = ConstraintSet(items, [center], ConstraintKind.Q_EXPECTATION)

    profile = []
    initial = None
    for target in np.linspace(center - half_width, center + half_width, points):
        try:
            posterior = solve(
                constraints.with_targets([target]),
                index,
                prior=prior,
                settings=settings,
                initial=initial,
            )
            divergence = _divergence_to_posterior(l, posterior, index)
        except (SolverError, AbsoluteContinuityError) as exc:
            log.debug("Scan point %r skipped: %s", float(target), exc)
            continue
        initial = posterior.multipliers
        profile.append((float(target), divergence))
    log.debug("Matching scan profile at q=%s: %s", index.q, profile)
    return tuple(profile)


def _report(
    l: Distribution,
    prior: Distribution,
    posterior: SolveResult,
    d_lp: float,
    targets: np.ndarray,
    iterations: int,
    index: QIndex,
    *,
    minimality_asserted: bool,
    scan_profile: Tuple[Tuple[float, float], ...] = (),
) -> TriangleReport:
    d_lr = tsallis_relative_entropy(l, prior, index)
    d_pr = posterior.divergence
    residual = d_lr - float(pseudo_add(d_lp, d_pr, index, Composition.DIVERGENCE))
    report = TriangleReport(
        d_lr=d_lr,
        d_lp=d_lp,
        d_pr=d_pr,
        residual=residual,
        matched_targets=tuple(float(value) for value in targets),
        fixed_point_iterations=iterations,
        kind=posterior.constraints.kind,
        q=index,
        minimality_asserted=minimality_asserted,
        posterior=posterior,
        scan_profile=scan_profile,
    )
    log.info(
        "Triangle check (%s, q=%s): residual %.3e, %s",
        report.kind.value,
        index.q,
        residual,
        "ok" if report.passed() else "FAILED",
    )
    return report


def verify_triangle(
    l: Distribution,
    r: Distribution,
    functions: Functions,
    q: QLike,
    *,
    settings: Optional[SolverSettings] = None,
    scan_points: int = 0,
) -> TriangleReport:
    """Triangle equality for the q-expectation posterior at matched targets."""
    index = as_qindex(q).require_positive()
    match = expectation_match(l, r, functions, index, settings=settings)
    profile: Tuple[Tuple[float, float], ...] = ()
    if scan_points and len(match.targets) == 1:
        profile = matching_scan(
            l,
            r,
            functions,
            index,
            center=float(match.targets[0]),
            points=scan_points,
            settings=settings,
        )
    return _report(
        l,
        r,
        match.posterior,
        match.d_lp,
        match.targets,
        match.iterations,
        index,
        minimality_asserted=True,
        scan_profile=profile,
    )


def verify_triangle_normalized(
    l: Distribution,
    r: Distribution,
    functions: Functions,
    q: QLike,
    *,
    settings: Optional[SolverSettings] = None,
) -> TriangleReport:
    """Triangle equality for the normalized q-expectation posterior.

    Targets are the normalized q-expectations under l, without any matching
    correction. The result is stationary but not necessarily minimal in d_lp.
    """
    index = as_qindex(q).require_positive()
    _check_inputs(l, r)
    items = _moment_functions(functions)
    targets = np.array([normalized_q_expectation(l, u, index) for u in items], dtype=float)
    constraints = ConstraintSet(items, targets, ConstraintKind.NORMALIZED)
    posterior = solve_normalized(r, constraints, index, settings=settings)
    d_lp = _divergence_to_posterior(l, posterior, index)
    return _report(
        l,
        r,
        posterior,
        d_lp,
        targets,
        posterior.outer_iterations,
        index,
        minimality_asserted=False,
    )


__all__ = [
    "expectation_match",
    "matching_scan",
    "verify_triangle",
    "verify_triangle_normalized",
]
