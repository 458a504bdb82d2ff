"""Lagrange-multiplier solvers for generalized maxent and minimum relative-entropy.

All three families share one density shape,

    p(x) ~ [rho(x)^(1-q) - (1-q) s(x)]^(1/(1-q)),

with rho = 1 for maximum entropy, rho = r for minimum relative entropy under
q-expectations, and s = sum_m beta_m u_m (or the centered, rescaled exponent of
the normalized q-expectation case). The multipliers are found with a damped
Newton iteration on the constraint residuals using closed-form Jacobians.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import brentq

from config import FD_STEP, log
from distributions import escort_weights, integrate, uniform_on
from entropy import tsallis_entropy, tsallis_relative_entropy
from errors import (
    CutoffCollapseError,
    FixedPointOscillationError,
    GridError,
    InfeasibleTargetsError,
    NonConvergenceError,
    SolverError,
)
from models import (
    ConstraintKind,
    ConstraintSet,
    Distribution,
    MomentFunction,
    QIndex,
    QLike,
    SolveBranch,
    SolveResult,
    SolverSettings,
    SupportGrid,
    ThermoReport,
    UniformPriorComparison,
    as_qindex,
)
from q_algebra import exp_q, ln_q, q_product

Functions = Union[ConstraintSet, Sequence[MomentFunction]]

# Armijo constant of the backtracking line search
SUFFICIENT_DECREASE = 1e-4
# residual ratio above which a Newton step counts as stalled
STALL_RATIO = 0.999
POLISH_BACKTRACKS = 4
# target continuation: first stage, smallest stage, stage budget
CONTINUATION_FIRST_STEP = 0.25
CONTINUATION_MIN_STEP = 1e-6
MAX_CONTINUATION_STAGES = 400


def _coupled_density(reference: np.ndarray, exponent: np.ndarray, q: QIndex) -> np.ndarray:
    """[reference^(1-q) - (1-q) exponent]^(1/(1-q)) with the extended cut-off.

    Zero wherever the reference vanishes or the bracket is not positive.
    """
    live = reference > 0
    safe_reference = np.where(live, reference, 1.0)
    if q.is_classical:
        with np.errstate(over="ignore"):
            values = safe_reference * np.exp(-exponent)
        return np.where(live, values, 0.0)
    k = q.one_minus_q
    # bracket - 1, kept accurate when q is close to 1
    shifted = np.expm1(k * np.log(safe_reference)) - k * exponent
    live = live & (shifted > -1.0)
    safe = np.where(live, shifted, 0.0)
    with np.errstate(over="ignore"):
        values = np.exp(np.log1p(safe) / k)
    return np.where(live, values, 0.0)


def _powered(values: np.ndarray, exponent: float) -> np.ndarray:
    positive = values > 0
    return np.where(positive, np.where(positive, values, 1.0) ** exponent, 0.0)


def _function_matrix(functions: Functions, size: int) -> np.ndarray:
    items = functions.functions if isinstance(functions, ConstraintSet) else tuple(functions)
    if not items:
        return np.zeros((0, size))
    matrix = np.vstack([item.values for item in items])
    if matrix.shape[1] != size:
        raise GridError(f"moment functions have {matrix.shape[1]} values, grid has {size}")
    return matrix


def _exponent(functions: Functions, beta: Sequence[float] | np.ndarray, size: int) -> np.ndarray:
    matrix = _function_matrix(functions, size)
    multipliers = np.asarray(beta, dtype=float).reshape(-1)
    if multipliers.size != matrix.shape[0]:
        raise GridError(f"{multipliers.size} multipliers for {matrix.shape[0]} moment functions")
    return multipliers @ matrix


def eval_maxent_density(
    grid: SupportGrid, functions: Functions, beta: Sequence[float] | np.ndarray, q: QLike
) -> np.ndarray:
    """Unnormalized Tsallis maxent density exp_q(-sum beta_m u_m)."""
    index = as_qindex(q).require_positive()
    return _coupled_density(np.ones(grid.size), _exponent(functions, beta, grid.size), index)


def eval_minxent_density(
    prior: Distribution, functions: Functions, beta: Sequence[float] | np.ndarray, q: QLike
) -> np.ndarray:
    """Unnormalized minimum Tsallis relative-entropy density."""
    index = as_qindex(q).require_positive()
    exponent = _exponent(functions, beta, prior.grid.size)
    return _coupled_density(prior.density, exponent, index)


def eval_minxent_density_q_product(
    prior: Distribution, functions: Functions, beta: Sequence[float] | np.ndarray, q: QLike
) -> np.ndarray:
    """Same density written as r (x)_q exp_q(-sum beta_m u_m)."""
    index = as_qindex(q).require_positive()
    exponent = _exponent(functions, beta, prior.grid.size)
    return np.asarray(q_product(prior.density, exp_q(-exponent, index), index))


def eval_minxent_density_merged(
    prior: Distribution, functions: Functions, beta: Sequence[float] | np.ndarray, q: QLike
) -> np.ndarray:
    """Same density written as exp_q(-sum beta_m u_m + ln_q r)."""
    index = as_qindex(q).require_positive()
    exponent = _exponent(functions, beta, prior.grid.size)
    live = prior.support
    log_prior = np.asarray(ln_q(np.where(live, prior.density, 1.0), index))
    return np.where(live, np.asarray(exp_q(log_prior - exponent, index)), 0.0)


@dataclass(slots=True)
class _State:
    beta: np.ndarray
    partition: float
    density: np.ndarray
    escort_mass: float
    expectations: np.ndarray
    residual: np.ndarray
    norm: float


class _QExpectationSystem:
    """beta -> q-expectations - targets for the coupled density family."""

    def __init__(
        self,
        reference: np.ndarray,
        weights: np.ndarray,
        matrix: np.ndarray,
        targets: np.ndarray,
        q: QIndex,
    ) -> None:
        self.reference = reference
        self.weights = weights
        self.matrix = matrix
        self.targets = targets
        self.q = q

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    def retarget(self, targets: np.ndarray) -> "_QExpectationSystem":
        return _QExpectationSystem(self.reference, self.weights, self.matrix, targets, self.q)

    def _exponent(self, beta: np.ndarray) -> np.ndarray:
        return beta @ self.matrix

    def evaluate(self, beta: np.ndarray) -> _State:
        raw = _coupled_density(self.reference, self._exponent(beta), self.q)
        partition = float(self.weights @ raw)
        if not (math.isfinite(partition) and partition > 0.0):
            raise CutoffCollapseError(f"partition value {partition!r} at beta={beta!r}")
        density = raw / partition
        escort = _powered(density, self.q.effective) * self.weights
        escort_mass = float(escort.sum())
        expectations = self._expectations(escort, escort_mass)
        residual = expectations - self.targets
        norm = float(np.linalg.norm(residual))
        if not math.isfinite(norm):
            raise CutoffCollapseError(f"non-finite residual at beta={beta!r}")
        return _State(beta, partition, density, escort_mass, expectations, residual, norm)

    def _expectations(self, escort: np.ndarray, escort_mass: float) -> np.ndarray:
        return self.matrix @ escort

    def jacobian(self, state: _State) -> np.ndarray:
        q = self.q.effective
        tail = _powered(state.density, 2.0 * q - 1.0) * self.weights
        second = (self.matrix * tail) @ self.matrix.T
        first = np.outer(state.expectations, state.expectations)
        return q * state.partition ** (q - 1.0) * (first - second)


class _EscortSystem(_QExpectationSystem):
    """beta -> normalized q-expectations - targets at a fixed escort mass c."""

    def __init__(
        self,
        reference: np.ndarray,
        weights: np.ndarray,
        matrix: np.ndarray,
        targets: np.ndarray,
        q: QIndex,
        escort_mass: float,
    ) -> None:
        super().__init__(reference, weights, matrix, targets, q)
        self.escort_mass = escort_mass
        self.centered = matrix - targets[:, None]

    def retarget(self, targets: np.ndarray) -> "_EscortSystem":
        return _EscortSystem(
            self.reference, self.weights, self.matrix, targets, self.q, self.escort_mass
        )

    def _exponent(self, beta: np.ndarray) -> np.ndarray:
        return (beta / self.escort_mass) @ self.centered

    def _expectations(self, escort: np.ndarray, escort_mass: float) -> np.ndarray:
        if escort_mass <= 0.0:
            raise CutoffCollapseError("integral of p^q vanishes")
        return (self.matrix @ escort) / escort_mass

    def jacobian(self, state: _State) -> np.ndarray:
        q = self.q.effective
        tail = _powered(state.density, 2.0 * q - 1.0) * self.weights
        spread = (self.matrix - state.expectations[:, None]) * tail
        scale = q * state.partition ** (q - 1.0) / (self.escort_mass * state.escort_mass)
        return -scale * (spread @ self.centered.T)


def _line_search(
    system: _QExpectationSystem, state: _State, settings: SolverSettings, *, polishing: bool
) -> Optional[_State]:
    jacobian = system.jacobian(state)
    step = np.linalg.lstsq(jacobian, -state.residual, rcond=None)[0]
    if not np.all(np.isfinite(step)):
        return None
    alpha = 1.0
    backtracks = POLISH_BACKTRACKS if polishing else settings.max_backtracks
    for _ in range(backtracks):
        try:
            trial = system.evaluate(state.beta + alpha * step)
        except CutoffCollapseError:
            trial = None
        if trial is not None:
            bound = state.norm if polishing else (1.0 - SUFFICIENT_DECREASE * alpha) * state.norm
            if trial.norm < bound:
                return trial
        alpha *= 0.5
    return None


def _bracket_fallback(
    system: _QExpectationSystem, state: _State, settings: SolverSettings
) -> Optional[_State]:
    """One-multiplier bracketing search for residuals made non-smooth by the cut-off.

    The residual is nonincreasing in beta, so the root lies on the side the
    residual sign points to.
    """
    log.warning("Newton step rejected at beta=%s, falling back to bracketing", state.beta)
    start = float(state.beta[0])
    sign = 1.0 if state.residual[0] > 0 else -1.0

    def residual(value: float) -> float:
        return float(system.evaluate(np.array([value])).residual[0])

    span = max(1.0, abs(start))
    for _ in range(60):
        candidate = start + sign * span
        try:
            value = residual(candidate)
        except CutoffCollapseError:
            return None
        if value * state.residual[0] <= 0.0:
            low, high = sorted((start, candidate))
            try:
                root = brentq(residual, low, high, xtol=1e-15, rtol=4 * np.finfo(float).eps)
                trial = system.evaluate(np.array([root]))
            except (CutoffCollapseError, ValueError, RuntimeError):
                return None
            return trial if trial.norm < state.norm else None
        span *= 2.0
    return None


def _target_continuation(
    system: _QExpectationSystem, state: _State, settings: SolverSettings
) -> Optional[_State]:
    """Walk the targets from the values reached at ``state`` to the requested ones.

    Every stage is a warm-started Newton solve, so the iterate never has to
    cross the cut-off in a single step. Stages shrink when a solve fails and
    grow again after a success.
    """
    log.warning("Newton step rejected at beta=%s, continuing from reached targets", state.beta)
    start = state.expectations.copy()
    goal = system.targets
    current = state
    level = 0.0
    increment = CONTINUATION_FIRST_STEP
    for _ in range(MAX_CONTINUATION_STAGES):
        if level >= 1.0:
            return system.evaluate(current.beta)
        stage = min(1.0, level + increment)
        targets = goal if stage >= 1.0 else start + stage * (goal - start)
        try:
            current, _ = _newton(system.retarget(targets), current.beta, settings, globalize=False)
        except SolverError as exc:
            log.debug("Continuation stage %.6f failed: %s", stage, exc)
            increment *= 0.5
            if increment < CONTINUATION_MIN_STEP:
                return None
            continue
        level = stage
        increment = min(2.0 * increment, 1.0)
    return None


def _globalized_step(
    system: _QExpectationSystem, state: _State, settings: SolverSettings
) -> Optional[_State]:
    if system.size == 1:
        trial = _bracket_fallback(system, state, settings)
        if trial is not None:
            return trial
    return _target_continuation(system, state, settings)


def _newton(
    system: _QExpectationSystem,
    beta0: np.ndarray,
    settings: SolverSettings,
    *,
    globalize: bool = True,
) -> tuple[_State, int]:
    state = system.evaluate(beta0)
    if system.size == 0:
        return state, 0
    iterations = 0
    polished = 0
    stalled = 0
    while True:
        converged = state.norm <= settings.tolerance
        if converged and (
            polished >= settings.polish_steps or state.norm <= settings.tolerance * 1e-4
        ):
            break
        if iterations >= settings.max_iterations:
            if converged:
                break
            raise NonConvergenceError(
                f"multipliers did not converge in {iterations} iterations"
                f" (residual {state.norm:.3e})"
            )
        trial = _line_search(system, state, settings, polishing=converged)
        if trial is None and not converged and globalize:
            trial = _globalized_step(system, state, settings)
        if trial is None:
            if converged:
                break
            raise InfeasibleTargetsError(
                f"constraint residual stuck at {state.norm:.3e}; targets look infeasible"
            )
        if converged:
            polished += 1
        else:
            stalled = stalled + 1 if trial.norm > STALL_RATIO * state.norm else 0
            if stalled >= settings.stagnation_window:
                rescued = _globalized_step(system, trial, settings) if globalize else None
                if rescued is None:
                    raise InfeasibleTargetsError(
                        f"constraint residual stagnates at {trial.norm:.3e};"
                        " targets look infeasible"
                    )
                trial = rescued
                stalled = 0
        iterations += 1
        log.debug("Newton iteration %s: residual %.3e", iterations, trial.norm)
        state = trial
    return state, iterations


def _initial(initial: Optional[Sequence[float] | np.ndarray], size: int) -> np.ndarray:
    if initial is None:
        return np.zeros(size)
    beta = np.array(initial, dtype=float).reshape(-1)
    if beta.size != size:
        raise GridError(f"{beta.size} initial multipliers for {size} constraints")
    return beta


def solve(
    constraints: ConstraintSet,
    q: QLike,
    *,
    prior: Optional[Distribution] = None,
    grid: Optional[SupportGrid] = None,
    settings: Optional[SolverSettings] = None,
    initial: Optional[Sequence[float] | np.ndarray] = None,
) -> SolveResult:
    """Solve for the multipliers reproducing the constraint targets.

    With a prior this is minimum Tsallis relative-entropy; without one it is
    Tsallis maximum entropy on ``grid``. Normalized q-expectation constraint
    sets go to :func:`solve_normalized` (with a uniform prior when none is
    given).
    """
    index = as_qindex(q).require_positive()
    settings = settings or SolverSettings()
    if prior is None and grid is None:
        raise GridError("solve needs a prior or a grid")
    if prior is not None and grid is not None and not grid.matches(prior.grid):
        raise GridError("prior lives on a different grid")
    if constraints.kind is ConstraintKind.NORMALIZED:
        reference = prior if prior is not None else uniform_on(grid)
        return solve_normalized(reference, constraints, index, settings=settings, initial=initial)

    support_grid = prior.grid if prior is not None else grid
    matrix = constraints.matrix_for(support_grid)
    reference = prior.density if prior is not None else np.ones(support_grid.size)
    system = _QExpectationSystem(
        reference, support_grid.weights, matrix, np.asarray(constraints.targets), index
    )
    state, iterations = _newton(system, _initial(initial, len(constraints)), settings)
    distribution = Distribution(support_grid, state.density)
    if prior is not None:
        divergence = tsallis_relative_entropy(distribution, prior, index)
        branch = SolveBranch.MINXENT
    else:
        divergence = tsallis_entropy(distribution, index)
        branch = SolveBranch.MAXENT
    if index.is_classical:
        branch = SolveBranch.CLASSICAL
    log.info(
        "Solved %s problem (M=%s, q=%s) in %s iterations, residual %.3e",
        "minxent" if prior is not None else "maxent",
        len(constraints),
        index.q,
        iterations,
        state.norm,
    )
    return SolveResult(
        distribution=distribution,
        multipliers=state.beta.copy(),
        partition_value=state.partition,
        divergence=divergence,
        iterations=iterations,
        residual_norm=state.norm,
        branch=branch,
        q=index,
        constraints=constraints,
        prior=prior,
        expectations=state.expectations.copy(),
    )


def solve_normalized(
    prior: Distribution,
    constraints: ConstraintSet,
    q: QLike,
    *,
    settings: Optional[SolverSettings] = None,
    initial: Optional[Sequence[float] | np.ndarray] = None,
) -> SolveResult:
    """Minimum Tsallis relative-entropy under normalized q-expectations.

    The density refers to its own escort mass c = integral of p^q. The outer
    loop is the damped fixed point c <- (1 - gamma) c + gamma * integral p^q;
    the inner loop solves the multipliers at fixed c.
    """
    index = as_qindex(q).require_positive()
    settings = settings or SolverSettings()
    constraints = constraints.with_kind(ConstraintKind.NORMALIZED)
    grid = prior.grid
    matrix = constraints.matrix_for(grid)
    targets = np.asarray(constraints.targets)
    branch = SolveBranch.CLASSICAL if index.is_classical else SolveBranch.MINXENT_NORMALIZED

    escort_mass = integrate(escort_weights(prior, index), grid)
    beta = _initial(initial, len(constraints))
    damping = settings.damping
    previous_change = math.inf
    total_inner = 0
    outer = 0
    while True:
        outer += 1
        if outer > settings.max_outer_iterations:
            raise NonConvergenceError(
                f"escort-mass fixed point did not converge in {settings.max_outer_iterations}"
                " iterations"
            )
        system = _EscortSystem(prior.density, grid.weights, matrix, targets, index, escort_mass)
        state, inner = _newton(system, beta, settings)
        total_inner += inner
        change = abs(state.escort_mass - escort_mass)
        log.debug(
            "Escort fixed point %s: c=%r, integral p^q=%r, damping %s",
            outer,
            escort_mass,
            state.escort_mass,
            damping,
        )
        if len(constraints) == 0 or change <= settings.fixed_point_tolerance * max(
            1.0, escort_mass
        ):
            break
        if change > previous_change:
            damping *= 0.5
            if damping < settings.damping_floor:
                raise FixedPointOscillationError(
                    f"escort-mass iteration oscillates (change {change:.3e})"
                )
        previous_change = change
        updated = (1.0 - damping) * escort_mass + damping * state.escort_mass
        # keep beta / c fixed across the update
        beta = state.beta * (updated / escort_mass)
        escort_mass = updated

    scaled = state.beta / escort_mass
    distribution = Distribution(grid, state.density)
    divergence = tsallis_relative_entropy(distribution, prior, index)
    log.info(
        "Solved normalized minxent problem (M=%s, q=%s): %s outer / %s inner iterations",
        len(constraints),
        index.q,
        outer,
        total_inner,
    )
    return SolveResult(
        distribution=distribution,
        multipliers=scaled * state.escort_mass,
        partition_value=state.partition,
        divergence=divergence,
        iterations=total_inner,
        residual_norm=state.norm,
        branch=branch,
        q=index,
        constraints=constraints,
        prior=prior,
        expectations=state.expectations.copy(),
        normalized_multipliers=scaled,
        escort_mass=state.escort_mass,
        outer_iterations=outer,
    )


def _central_difference(function: Callable[[float], float], step: float) -> float:
    return (function(step) - function(-step)) / (2.0 * step)


def thermo_identities(
    result: SolveResult,
    constraints: Optional[ConstraintSet] = None,
    q: Optional[QLike] = None,
    *,
    step: float = FD_STEP,
    settings: Optional[SolverSettings] = None,
) -> ThermoReport:
    """Residuals of the minimum-value identity and the thermodynamic equations.

    Slopes are central finite differences with step ``step``: of the
    q-logarithmic potential in beta, and of the optimal divergence (entropy
    for maxent) in the constraint values, each solved again at the shifted
    targets.
    """
    constraints = constraints if constraints is not None else result.constraints
    index = as_qindex(q) if q is not None else result.q
    settings = settings or SolverSettings()
    if result.is_normalized:
        return _normalized_thermo(result, constraints, index, step, settings)

    grid = result.distribution.grid
    matrix = constraints.matrix_for(grid)
    beta = result.multipliers
    expectations = np.asarray(result.expectations, dtype=float)
    reference = result.prior.density if result.prior is not None else np.ones(grid.size)
    log_partition = float(ln_q(result.partition_value, index))
    if result.is_maxent:
        identity = result.divergence - (log_partition + float(beta @ expectations))
    else:
        identity = result.divergence - (-log_partition - float(beta @ expectations))
    system = _QExpectationSystem(reference, grid.weights, matrix, expectations, index)
    jacobian = system.jacobian(system.evaluate(beta))

    def potential(h: float, unit: np.ndarray) -> float:
        raw = _coupled_density(reference, (beta + h * unit) @ matrix, index)
        return float(ln_q(float(grid.weights @ raw), index))

    def optimum(h: float, unit: np.ndarray, direction: np.ndarray) -> float:
        # the optimal value written through the potential is stationary in beta
        targets = expectations + h * unit
        state, _ = _newton(system.retarget(targets), beta + h * direction, settings)
        value = float(ln_q(state.partition, index))
        if result.is_maxent:
            return value + float(state.beta @ targets)
        return -value - float(state.beta @ targets)

    potential_slopes = []
    divergence_slopes = []
    sign = -1.0 if result.is_maxent else 1.0
    for m in range(len(constraints)):
        unit = np.eye(len(constraints))[m]
        slope = _central_difference(partial(potential, unit=unit), step)
        potential_slopes.append(slope + expectations[m])
        # first-order predictor keeps the shifted solves on the branch of beta
        direction = np.linalg.lstsq(jacobian, unit, rcond=None)[0]
        slope = _central_difference(partial(optimum, unit=unit, direction=direction), step)
        divergence_slopes.append(slope + sign * beta[m])

    return ThermoReport(
        identity_residual=identity,
        potential_slope_residuals=tuple(potential_slopes),
        divergence_slope_residuals=tuple(divergence_slopes),
        step=step,
    )


def _normalized_thermo(
    result: SolveResult,
    constraints: ConstraintSet,
    index: QIndex,
    step: float,
    settings: SolverSettings,
) -> ThermoReport:
    prior = result.prior
    assert prior is not None
    grid = prior.grid
    matrix = constraints.matrix_for(grid)
    targets = np.asarray(constraints.targets)
    centered = matrix - targets[:, None]
    beta = result.multipliers
    escort_mass = result.escort_mass if result.escort_mass is not None else 1.0
    log_partition = float(ln_q(result.partition_value, index))
    identity = result.divergence + log_partition
    shifted_potential = log_partition - float(beta @ targets)

    def potential(h: float, unit: np.ndarray) -> float:
        multipliers = beta + h * unit
        raw = _coupled_density(prior.density, (multipliers / escort_mass) @ centered, index)
        return float(ln_q(float(grid.weights @ raw), index)) - float(multipliers @ targets)

    def optimum(h: float, unit: np.ndarray) -> float:
        shifted = constraints.with_targets(targets + h * unit)
        solved = solve_normalized(prior, shifted, index, settings=settings, initial=beta)
        # -ln_q of the partition value is stationary in beta and c
        return -float(ln_q(solved.partition_value, index))

    potential_slopes = []
    divergence_slopes = []
    for m in range(len(constraints)):
        unit = np.eye(len(constraints))[m]
        slope = _central_difference(partial(potential, unit=unit), step)
        potential_slopes.append(slope + targets[m])
        slope = _central_difference(partial(optimum, unit=unit), step)
        divergence_slopes.append(slope + beta[m])

    return ThermoReport(
        identity_residual=identity,
        potential_slope_residuals=tuple(potential_slopes),
        divergence_slope_residuals=tuple(divergence_slopes),
        step=step,
        shifted_potential=shifted_potential,
    )


def escort_inequality_gap(result: SolveResult) -> float:
    """integral p^q minus (partition value)^(1-q).

    Vanishes for Tsallis maxent under normalized constraints but not for the
    relative-entropy posterior when q != 1.
    """
    mass = integrate(escort_weights(result.distribution, result.q), result.distribution.grid)
    return mass - result.partition_value ** (1.0 - result.q.effective)


def uniform_prior_comparison(
    grid: SupportGrid,
    constraints: ConstraintSet,
    q: QLike,
    *,
    settings: Optional[SolverSettings] = None,
) -> UniformPriorComparison:
    """Maxent against minxent with a uniform prior for the same q-expectations."""
    index = as_qindex(q).require_positive()
    if constraints.kind is not ConstraintKind.Q_EXPECTATION:
        raise ValueError("uniform-prior comparison needs q-expectation constraints")
    maxent = solve(constraints, index, grid=grid, settings=settings)
    minxent = solve(constraints, index, prior=uniform_on(grid), settings=settings)
    volume = grid.volume
    scale = volume ** (1.0 - index.effective)
    relation = np.abs(maxent.multipliers - scale * minxent.multipliers)
    gap = np.abs(maxent.distribution.density - minxent.distribution.density)
    differ = not np.allclose(maxent.multipliers, minxent.multipliers, rtol=1e-9, atol=1e-12)
    log.info(
        "Uniform-prior comparison at q=%s, W=%r: relation residual %.3e, multipliers differ: %s",
        index.q,
        volume,
        float(relation.max(initial=0.0)),
        differ,
    )
    return UniformPriorComparison(
        maxent=maxent,
        minxent=minxent,
        volume=volume,
        density_gap=float(gap.max(initial=0.0)),
        relation_residual=float(relation.max(initial=0.0)),
        multipliers_differ=differ,
    )


__all__ = [
    "escort_inequality_gap",
    "eval_maxent_density",
    "eval_minxent_density",
    "eval_minxent_density_merged",
    "eval_minxent_density_q_product",
    "solve",
    "solve_normalized",
    "thermo_identities",
    "uniform_prior_comparison",
]
