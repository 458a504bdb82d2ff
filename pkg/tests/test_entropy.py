from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distributions import discrete_grid, product_distribution, trapezoid_grid, uniform_on
from entropy import (
    entropy_divergence_link,
    kl_divergence,
    shannon_entropy,
    tsallis_entropy,
    tsallis_entropy_qlog,
    tsallis_relative_entropy,
    tsallis_relative_entropy_qlog,
)
from errors import AbsoluteContinuityError, GridError
from models import Composition, Distribution, SupportGrid
from q_algebra import ln_q, pseudo_add

Q_VALUES = (0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 3.0)


def _random_distribution(rng: np.random.Generator, grid: SupportGrid) -> Distribution:
    return Distribution.from_unnormalized(grid, rng.dirichlet(np.ones(grid.size)) + 1e-3)


def test_tsallis_entropy_examples(two_point_grid: SupportGrid, half_prior: Distribution) -> None:
    delta = Distribution(two_point_grid, [1.0, 0.0])
    assert tsallis_entropy(delta, 2.0) == 0.0
    assert tsallis_entropy(half_prior, 2.0) == pytest.approx(0.5, rel=1e-15)
    assert tsallis_entropy(half_prior, 1.0) == pytest.approx(math.log(2.0), rel=1e-15)
    assert shannon_entropy(half_prior) == pytest.approx(math.log(2.0), rel=1e-15)


def test_tsallis_relative_entropy_examples(
    two_point_grid: SupportGrid, half_prior: Distribution
) -> None:
    r = Distribution(two_point_grid, [0.25, 0.75])
    assert tsallis_relative_entropy(half_prior, half_prior, 2.0) == 0.0
    assert tsallis_relative_entropy(half_prior, r, 2.0) == pytest.approx(1.0 / 3.0, rel=1e-14)
    expected = 0.5 * math.log(4.0 / 3.0)
    assert tsallis_relative_entropy(half_prior, r, 1.0) == pytest.approx(expected, rel=1e-14)
    assert kl_divergence(half_prior, r) == pytest.approx(expected, rel=1e-14)


def test_relative_entropy_errors(two_point_grid: SupportGrid, half_prior: Distribution) -> None:
    point_mass = Distribution(two_point_grid, [1.0, 0.0])
    with pytest.raises(AbsoluteContinuityError):
        tsallis_relative_entropy(half_prior, point_mass, 2.0)
    with pytest.raises(AbsoluteContinuityError):
        kl_divergence(half_prior, point_mass)
    # the other direction is fine: zero-density points of p contribute nothing
    assert tsallis_relative_entropy(point_mass, half_prior, 2.0) == pytest.approx(1.0)
    with pytest.raises(GridError):
        tsallis_relative_entropy(half_prior, uniform_on(discrete_grid(3)), 2.0)


def test_qlog_forms_agree(rng: np.random.Generator) -> None:
    grid = trapezoid_grid(-1.0, 1.0, 11)
    for _ in range(20):
        p = _random_distribution(rng, grid)
        r = _random_distribution(rng, grid)
        for q in Q_VALUES:
            assert tsallis_entropy_qlog(p, q) == pytest.approx(
                tsallis_entropy(p, q), rel=1e-12, abs=1e-14
            )
            assert tsallis_relative_entropy_qlog(p, r, q) == pytest.approx(
                tsallis_relative_entropy(p, r, q), rel=1e-12, abs=1e-14
            )
            assert abs(entropy_divergence_link(p, r, q)) < 1e-10


def test_sign_law(rng: np.random.Generator) -> None:
    grid = discrete_grid(6)
    for _ in range(50):
        p = _random_distribution(rng, grid)
        r = _random_distribution(rng, grid)
        for q in Q_VALUES:
            assert tsallis_relative_entropy(p, r, q) > 0.0
        assert abs(tsallis_relative_entropy(p, r, 0.0)) < 1e-14


@settings(max_examples=1000, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), q=st.sampled_from([0.5, 2.0]))
def test_pseudo_additivity_on_independent_systems(seed: int, q: float) -> None:
    rng = np.random.default_rng(seed)
    first = discrete_grid(3)
    second = trapezoid_grid(0.0, 1.0, 4)
    p1, r1 = _random_distribution(rng, first), _random_distribution(rng, first)
    p2, r2 = _random_distribution(rng, second), _random_distribution(rng, second)
    joint_p = product_distribution(p1, p2)
    joint_r = product_distribution(r1, r2, joint_p.grid)

    divergence = tsallis_relative_entropy(joint_p, joint_r, q)
    combined = pseudo_add(
        tsallis_relative_entropy(p1, r1, q),
        tsallis_relative_entropy(p2, r2, q),
        q,
        Composition.DIVERGENCE,
    )
    assert divergence == pytest.approx(combined, rel=1e-10, abs=1e-12)

    entropy = tsallis_entropy(joint_p, q)
    combined = pseudo_add(tsallis_entropy(p1, q), tsallis_entropy(p2, q), q, Composition.ENTROPY)
    assert entropy == pytest.approx(combined, rel=1e-10, abs=1e-12)


def test_uniform_distribution_maximizes_entropy(rng: np.random.Generator) -> None:
    grid = trapezoid_grid(0.0, 3.0, 7)
    uniform = uniform_on(grid)
    for q in Q_VALUES:
        top = tsallis_entropy(uniform, q)
        assert top == pytest.approx(ln_q(grid.volume, q), rel=1e-12)
        for _ in range(20):
            assert tsallis_entropy(_random_distribution(rng, grid), q) <= top + 1e-12


def test_relative_entropy_is_convex_in_p(rng: np.random.Generator) -> None:
    grid = discrete_grid(5)
    for q in (0.5, 2.0):
        for _ in range(20):
            p1, p2, r = (_random_distribution(rng, grid) for _ in range(3))
            weight = rng.uniform()
            mixed = Distribution(grid, weight * p1.density + (1.0 - weight) * p2.density)
            chord = weight * tsallis_relative_entropy(p1, r, q) + (
                1.0 - weight
            ) * tsallis_relative_entropy(p2, r, q)
            assert tsallis_relative_entropy(mixed, r, q) <= chord + 1e-12


def test_functionals_converge_to_classical(rng: np.random.Generator) -> None:
    grid = discrete_grid(5)
    p, r = _random_distribution(rng, grid), _random_distribution(rng, grid)
    for delta in (1e-4, 1e-6):
        for q in (1.0 - delta, 1.0 + delta):
            assert abs(tsallis_entropy(p, q) - shannon_entropy(p)) < 50 * delta
            assert abs(tsallis_relative_entropy(p, r, q) - kl_divergence(p, r)) < 50 * delta
