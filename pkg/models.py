"""Domain models: entropic index, grids, distributions, constraints and reports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from config import (
    CONSTRAINT_TOL,
    DAMPING_FLOOR,
    EPS_CLASSICAL,
    FD_TOL,
    FIXED_POINT_DAMPING,
    FIXED_POINT_TOL,
    IDENTITY_TOL,
    MATCHING_TOL,
    MAX_BACKTRACKS,
    MAX_MATCHING_ITERATIONS,
    MAX_NEWTON_ITERATIONS,
    MAX_NORMALIZED_ITERATIONS,
    NORMALIZATION_TOL,
    POLISH_STEPS,
    RENORMALIZE_TOL,
    STAGNATION_WINDOW,
    TRIANGLE_TOL,
)
from errors import (
    CutoffCollapseError,
    GridError,
    InvalidQIndexError,
    LengthMismatchError,
    NormalizationError,
)


def _frozen_array(values: Iterable[float] | np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float, copy=True)
    if array.ndim == 0:
        array = array.reshape(1)
    array.setflags(write=False)
    return array


class ConstraintKind(str, Enum):
    Q_EXPECTATION = "q"
    NORMALIZED = "normalized"


class Composition(str, Enum):
    """Sign convention of the pseudo-additive combiner."""

    ENTROPY = "entropy"
    DIVERGENCE = "divergence"


class SolveBranch(str, Enum):
    MAXENT = "maxent"
    MINXENT = "minxent"
    MINXENT_NORMALIZED = "minxent-normalized"
    CLASSICAL = "classical"


@dataclass(frozen=True, slots=True)
class QIndex:
    """Entropic index q with its classical-branch threshold."""

    q: float
    eps_classical: float = EPS_CLASSICAL

    def __post_init__(self) -> None:
        value = float(self.q)
        if not math.isfinite(value):
            raise InvalidQIndexError(f"q must be finite, got {self.q!r}")
        object.__setattr__(self, "q", value)

    @property
    def is_classical(self) -> bool:
        return abs(self.q - 1.0) < self.eps_classical

    @property
    def effective(self) -> float:
        """Exactly 1.0 on the classical branch, q otherwise."""
        return 1.0 if self.is_classical else self.q

    @property
    def one_minus_q(self) -> float:
        return 1.0 - self.q

    @property
    def is_positive(self) -> bool:
        return self.q > 0.0

    def require_positive(self) -> "QIndex":
        if not self.is_positive:
            raise InvalidQIndexError(f"q must be positive, got {self.q}")
        return self

    def __float__(self) -> float:
        return self.q


QLike = Union[QIndex, float, int]


def as_qindex(q: QLike) -> QIndex:
    if isinstance(q, QIndex):
        return q
    return QIndex(float(q))


@dataclass(frozen=True, slots=True, eq=False)
class SupportGrid:
    """Ordered abscissae with positive quadrature weights."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        points = _frozen_array(self.points)
        weights = _frozen_array(self.weights)
        if points.ndim != 1 or points.size == 0:
            raise GridError("a grid needs at least one point")
        if weights.shape != points.shape:
            raise LengthMismatchError(
                f"{weights.size} weights for {points.size} grid points"
            )
        if not (np.all(np.isfinite(points)) and np.all(np.isfinite(weights))):
            raise GridError("grid points and weights must be finite")
        if np.any(np.diff(points) <= 0):
            raise GridError("grid points must be strictly increasing")
        if np.any(weights <= 0):
            raise GridError("quadrature weights must be positive")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def size(self) -> int:
        return int(self.points.size)

    @property
    def volume(self) -> float:
        """Total weight W of the support."""
        return float(self.weights.sum())

    def matches(self, other: "SupportGrid") -> bool:
        if self is other:
            return True
        return np.array_equal(self.points, other.points) and np.array_equal(
            self.weights, other.weights
        )


@dataclass(frozen=True, slots=True, eq=False)
class Distribution:
    """Nonnegative density on a grid, normalized under its quadrature."""

    grid: SupportGrid
    density: np.ndarray

    def __post_init__(self) -> None:
        density = _frozen_array(self.density)
        if density.shape != self.grid.points.shape:
            raise LengthMismatchError(
                f"{density.size} density values for {self.grid.size} grid points"
            )
        if not np.all(np.isfinite(density)):
            raise NormalizationError("density values must be finite")
        if np.any(density < 0):
            raise NormalizationError("density values must be nonnegative")
        mass = float(np.dot(self.grid.weights, density))
        if abs(mass - 1.0) > RENORMALIZE_TOL:
            raise NormalizationError(f"density integrates to {mass!r}, expected 1")
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            density = _frozen_array(density / mass)
        object.__setattr__(self, "density", density)

    @classmethod
    def from_unnormalized(
        cls, grid: SupportGrid, values: Sequence[float] | np.ndarray
    ) -> "Distribution":
        array = np.asarray(values, dtype=float)
        if array.shape != grid.points.shape:
            raise LengthMismatchError(
                f"{array.size} density values for {grid.size} grid points"
            )
        mass = float(np.dot(grid.weights, array))
        if not (math.isfinite(mass) and mass > 0.0):
            raise CutoffCollapseError(f"unnormalized density has mass {mass!r}")
        return cls(grid, array / mass)

    @property
    def support(self) -> np.ndarray:
        return self.density > 0

    @property
    def mass(self) -> float:
        return float(np.dot(self.grid.weights, self.density))


@dataclass(frozen=True, slots=True, eq=False)
class MomentFunction:
    values: np.ndarray
    label: str = "u"

    def __post_init__(self) -> None:
        values = _frozen_array(self.values)
        if not np.all(np.isfinite(values)):
            raise GridError(f"moment function {self.label!r} has non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True, slots=True, eq=False)
class ConstraintSet:
    """Moment functions with their target values and constraint kind."""

    functions: Tuple[MomentFunction, ...] = ()
    targets: np.ndarray = field(default_factory=lambda: np.zeros(0))
    kind: ConstraintKind = ConstraintKind.Q_EXPECTATION

    def __post_init__(self) -> None:
        functions = tuple(self.functions)
        targets = _frozen_array(self.targets)
        if targets.size != len(functions):
            raise LengthMismatchError(
                f"{targets.size} targets for {len(functions)} moment functions"
            )
        sizes = {function.size for function in functions}
        if len(sizes) > 1:
            raise LengthMismatchError("moment functions sampled on different grids")
        object.__setattr__(self, "functions", functions)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "kind", ConstraintKind(self.kind))

    def __len__(self) -> int:
        return len(self.functions)

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(function.label for function in self.functions)

    def matrix_for(self, grid: SupportGrid) -> np.ndarray:
        """Moment values as an (M, N) array, checked against ``grid``."""
        if not self.functions:
            return np.zeros((0, grid.size))
        for function in self.functions:
            if function.size != grid.size:
                raise LengthMismatchError(
                    f"moment function {function.label!r} has {function.size} values,"
                    f" grid has {grid.size} points"
                )
        return np.vstack([function.values for function in self.functions])

    def with_targets(self, targets: Sequence[float] | np.ndarray) -> "ConstraintSet":
        return ConstraintSet(self.functions, np.asarray(targets, dtype=float), self.kind)

    def with_kind(self, kind: ConstraintKind | str) -> "ConstraintSet":
        return ConstraintSet(self.functions, self.targets, ConstraintKind(kind))


@dataclass(slots=True)
class SolverSettings:
    tolerance: float = CONSTRAINT_TOL
    max_iterations: int = MAX_NEWTON_ITERATIONS
    max_backtracks: int = MAX_BACKTRACKS
    polish_steps: int = POLISH_STEPS
    stagnation_window: int = STAGNATION_WINDOW
    damping: float = FIXED_POINT_DAMPING
    fixed_point_tolerance: float = FIXED_POINT_TOL
    max_outer_iterations: int = MAX_NORMALIZED_ITERATIONS
    damping_floor: float = DAMPING_FLOOR
    matching_tolerance: float = MATCHING_TOL
    max_matching_iterations: int = MAX_MATCHING_ITERATIONS


@dataclass(frozen=True, slots=True, eq=False)
class SolveResult:
    distribution: Distribution
    multipliers: np.ndarray
    partition_value: float
    divergence: float
    iterations: int
    residual_norm: float
    branch: SolveBranch
    q: QIndex
    constraints: ConstraintSet
    prior: Optional[Distribution]
    expectations: np.ndarray
    normalized_multipliers: Optional[np.ndarray] = None
    escort_mass: Optional[float] = None
    outer_iterations: int = 0

    @property
    def is_maxent(self) -> bool:
        return self.prior is None

    @property
    def is_normalized(self) -> bool:
        return self.constraints.kind is ConstraintKind.NORMALIZED


@dataclass(frozen=True, slots=True)
class ThermoReport:
    identity_residual: float
    potential_slope_residuals: Tuple[float, ...]
    divergence_slope_residuals: Tuple[float, ...]
    step: float
    shifted_potential: Optional[float] = None

    @property
    def max_slope_residual(self) -> float:
        residuals = self.potential_slope_residuals + self.divergence_slope_residuals
        return max((abs(value) for value in residuals), default=0.0)

    def passed(self, identity_tol: float = IDENTITY_TOL, fd_tol: float = FD_TOL) -> bool:
        return abs(self.identity_residual) < identity_tol and self.max_slope_residual < fd_tol


@dataclass(frozen=True, slots=True, eq=False)
class UniformPriorComparison:
    maxent: SolveResult
    minxent: SolveResult
    volume: float
    density_gap: float
    relation_residual: float
    multipliers_differ: bool


@dataclass(frozen=True, slots=True, eq=False)
class MatchResult:
    targets: np.ndarray
    observed_targets: np.ndarray
    posterior: SolveResult
    d_lp: float
    denominator: float
    iterations: int


@dataclass(frozen=True, slots=True, eq=False)
class TriangleReport:
    d_lr: float
    d_lp: float
    d_pr: float
    residual: float
    matched_targets: Tuple[float, ...]
    fixed_point_iterations: int
    kind: ConstraintKind
    q: QIndex
    minimality_asserted: bool
    posterior: SolveResult
    scan_profile: Tuple[Tuple[float, float], ...] = ()

    def passed(self, tol: float = TRIANGLE_TOL) -> bool:
        return abs(self.residual) < tol

    def inequality_holds(self, tol: float = TRIANGLE_TOL) -> bool:
        additive = self.d_lp + self.d_pr
        if self.q.effective <= 1.0:
            return self.d_lr <= additive + tol
        return self.d_lr >= additive - tol


@dataclass(frozen=True, slots=True, eq=False)
class Problem:
    """Parsed problem file."""

    grid: SupportGrid
    constraints: ConstraintSet
    q_values: Tuple[float, ...]
    prior: Optional[Distribution] = None
    observed: Optional[Distribution] = None
    tolerance: Optional[float] = None
    max_iterations: Optional[int] = None


@dataclass(slots=True)
class SweepRow:
    q: float
    divergence: Optional[float] = None
    partition_value: Optional[float] = None
    multipliers: Tuple[float, ...] = ()
    d_lr: Optional[float] = None
    d_lp: Optional[float] = None
    d_pr: Optional[float] = None
    triangle_residual: Optional[float] = None
    error: str = ""


__all__ = [
    "Composition",
    "ConstraintKind",
    "ConstraintSet",
    "Distribution",
    "MatchResult",
    "MomentFunction",
    "Problem",
    "QIndex",
    "QLike",
    "SolveBranch",
    "SolveResult",
    "SolverSettings",
    "SupportGrid",
    "SweepRow",
    "ThermoReport",
    "TriangleReport",
    "UniformPriorComparison",
    "as_qindex",
]
