"""Quadrature on support grids and the two q-expectation functionals."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from config import log
from errors import DegenerateDenominatorError, GridError, LengthMismatchError
from models import Distribution, MomentFunction, QLike, SupportGrid, as_qindex


def discrete_grid(size_or_points: int | Sequence[float]) -> SupportGrid:
    """Grid of a discrete support: unit weights."""
    if isinstance(size_or_points, int):
        if size_or_points < 1:
            raise GridError("a discrete grid needs at least one point")
        points = np.arange(size_or_points, dtype=float)
    else:
        points = np.asarray(size_or_points, dtype=float)
    return SupportGrid(points, np.ones_like(points))


def trapezoid_grid(start: float, stop: float, num: int) -> SupportGrid:
    """Uniform grid on [start, stop] with composite trapezoid weights."""
    if num < 2:
        raise GridError("a trapezoid grid needs at least two points")
    if not stop > start:
        raise GridError("trapezoid grid needs stop > start")
    points = np.linspace(start, stop, num)
    step = (stop - start) / (num - 1)
    weights = np.full(num, step)
    weights[0] = weights[-1] = step / 2.0
    return SupportGrid(points, weights)


def integrate(values: Sequence[float] | np.ndarray, grid: SupportGrid) -> float:
    array = np.asarray(values, dtype=float)
    if array.shape != grid.weights.shape:
        raise LengthMismatchError(f"{array.size} samples for {grid.size} grid points")
    return float(np.dot(grid.weights, array))


def escort_weights(p: Distribution, q: QLike) -> np.ndarray:
    """Pointwise p^q, with 0 on points outside the support."""
    index = as_qindex(q)
    support = p.support
    safe = np.where(support, p.density, 1.0)
    return np.where(support, safe**index.effective, 0.0)


def _check_moment(p: Distribution, u: MomentFunction) -> None:
    if u.size != p.grid.size:
        raise LengthMismatchError(
            f"moment function {u.label!r} has {u.size} values, grid has {p.grid.size} points"
        )


def q_expectation(p: Distribution, u: MomentFunction, q: QLike) -> float:
    """Unnormalized q-expectation of u under p."""
    _check_moment(p, u)
    return integrate(u.values * escort_weights(p, q), p.grid)


def normalized_q_expectation(p: Distribution, u: MomentFunction, q: QLike) -> float:
    """Escort-distribution (normalized) q-expectation of u under p."""
    _check_moment(p, u)
    escort = escort_weights(p, q)
    denominator = integrate(escort, p.grid)
    if denominator <= 0.0:
        raise DegenerateDenominatorError("integral of p^q vanishes")
    return integrate(u.values * escort, p.grid) / denominator


def require_same_grid(p: Distribution, r: Distribution) -> None:
    if not p.grid.matches(r.grid):
        raise GridError("distributions live on different grids")


def absolutely_continuous(p: Distribution, r: Distribution) -> bool:
    """True iff r > 0 wherever p > 0."""
    require_same_grid(p, r)
    return bool(np.all(r.support[p.support]))


def uniform_on(grid: SupportGrid) -> Distribution:
    volume = grid.volume
    log.debug("Uniform distribution on %s points, W=%r", grid.size, volume)
    return Distribution(grid, np.full(grid.size, 1.0 / volume))


def product_grid(first: SupportGrid, second: SupportGrid) -> SupportGrid:
    """Flattened grid of a composite system.

    Abscissae are flat indices (row-major over first x second), weights are
    the products of the factor weights.
    """
    weights = np.outer(first.weights, second.weights).ravel()
    return SupportGrid(np.arange(weights.size, dtype=float), weights)


def product_distribution(
    first: Distribution, second: Distribution, grid: Optional[SupportGrid] = None
) -> Distribution:
    """Distribution of two independent components on the flattened grid."""
    grid = grid or product_grid(first.grid, second.grid)
    density = np.outer(first.density, second.density).ravel()
    return Distribution(grid, density)


__all__ = [
    "absolutely_continuous",
    "discrete_grid",
    "escort_weights",
    "integrate",
    "normalized_q_expectation",
    "product_distribution",
    "product_grid",
    "q_expectation",
    "require_same_grid",
    "trapezoid_grid",
    "uniform_on",
]
