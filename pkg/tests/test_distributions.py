from __future__ import annotations

import numpy as np
import pytest

from distributions import (
    absolutely_continuous,
    discrete_grid,
    integrate,
    normalized_q_expectation,
    product_distribution,
    product_grid,
    q_expectation,
    trapezoid_grid,
    uniform_on,
)
from errors import (
    CutoffCollapseError,
    GridError,
    LengthMismatchError,
    NormalizationError,
)
from models import ConstraintSet, Distribution, MomentFunction, SupportGrid


def test_integrate_examples() -> None:
    assert integrate([0.0, 0.0], discrete_grid(2)) == 0.0
    assert integrate([1.0, 1.0], discrete_grid(2)) == 2.0
    grid = SupportGrid([0.0, 1.0, 2.0], [0.5, 0.5, 0.5])
    assert integrate([1.0, 2.0, 3.0], grid) == 3.0
    with pytest.raises(LengthMismatchError):
        integrate([1.0, 2.0], grid)


def test_q_expectation_examples(half_prior: Distribution, step_function: MomentFunction) -> None:
    delta = Distribution(discrete_grid(3), [0.0, 1.0, 0.0])
    assert q_expectation(delta, MomentFunction([4.0, 4.0, 4.0]), 1.0) == 4.0
    assert q_expectation(half_prior, step_function, 2.0) == pytest.approx(0.25)
    assert q_expectation(half_prior, step_function, 1.0) == pytest.approx(0.5)


def test_normalized_q_expectation_examples(
    two_point_grid: SupportGrid, half_prior: Distribution, step_function: MomentFunction
) -> None:
    assert normalized_q_expectation(half_prior, MomentFunction([3.0, 3.0]), 0.7) == pytest.approx(
        3.0
    )
    assert normalized_q_expectation(half_prior, step_function, 2.0) == pytest.approx(0.5)
    skewed = Distribution(two_point_grid, [0.7, 0.3])
    assert normalized_q_expectation(skewed, step_function, 2.0) == pytest.approx(9.0 / 58.0)


def test_expectations_agree_at_q_one_and_are_linear(rng: np.random.Generator) -> None:
    grid = trapezoid_grid(0.0, 2.0, 9)
    p = Distribution.from_unnormalized(grid, rng.uniform(0.1, 1.0, grid.size))
    u = MomentFunction(rng.normal(size=grid.size))
    v = MomentFunction(rng.normal(size=grid.size))
    assert normalized_q_expectation(p, u, 1.0) == pytest.approx(q_expectation(p, u, 1.0))
    for q in (0.5, 2.0):
        combined = MomentFunction(2.0 * u.values - 3.0 * v.values)
        expected = 2.0 * q_expectation(p, u, q) - 3.0 * q_expectation(p, v, q)
        assert q_expectation(p, combined, q) == pytest.approx(expected, rel=1e-12, abs=1e-14)
        expected = 2.0 * normalized_q_expectation(p, u, q)
        expected -= 3.0 * normalized_q_expectation(p, v, q)
        assert normalized_q_expectation(p, combined, q) == pytest.approx(
            expected, rel=1e-12, abs=1e-14
        )


def test_uniform_on_examples() -> None:
    two = uniform_on(discrete_grid(2))
    np.testing.assert_array_equal(two.density, [0.5, 0.5])
    assert two.grid.volume == 2.0
    four = uniform_on(discrete_grid(4))
    np.testing.assert_array_equal(four.density, [0.25] * 4)
    tenth = uniform_on(SupportGrid(np.arange(10.0), np.full(10, 0.1)))
    np.testing.assert_allclose(tenth.density, np.ones(10), rtol=1e-12)
    assert tenth.grid.volume == pytest.approx(1.0)
    assert tenth.mass == pytest.approx(1.0, abs=1e-10)


def test_distribution_renormalizes_small_drift(two_point_grid: SupportGrid) -> None:
    drifted = Distribution(two_point_grid, [0.5, 0.5 + 1e-8])
    assert drifted.mass == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(NormalizationError):
        Distribution(two_point_grid, [0.5, 0.6])
    with pytest.raises(NormalizationError):
        Distribution(two_point_grid, [1.5, -0.5])
    with pytest.raises(LengthMismatchError):
        Distribution(two_point_grid, [1.0])


def test_distribution_arrays_are_read_only(half_prior: Distribution) -> None:
    with pytest.raises(ValueError):
        half_prior.density[0] = 1.0
    with pytest.raises(ValueError):
        half_prior.grid.weights[0] = 2.0


def test_from_unnormalized(two_point_grid: SupportGrid) -> None:
    p = Distribution.from_unnormalized(two_point_grid, [1.0, 3.0])
    np.testing.assert_allclose(p.density, [0.25, 0.75])
    with pytest.raises(CutoffCollapseError):
        Distribution.from_unnormalized(two_point_grid, [0.0, 0.0])


def test_grid_validation() -> None:
    with pytest.raises(GridError):
        SupportGrid([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(GridError):
        SupportGrid([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(GridError):
        SupportGrid([], [])
    with pytest.raises(LengthMismatchError):
        SupportGrid([0.0, 1.0], [1.0])
    with pytest.raises(GridError):
        trapezoid_grid(1.0, 0.0, 5)


def test_trapezoid_grid_weights() -> None:
    grid = trapezoid_grid(0.0, 1.0, 3)
    np.testing.assert_allclose(grid.weights, [0.25, 0.5, 0.25])
    assert grid.volume == pytest.approx(1.0)
    fine = trapezoid_grid(0.0, 1.0, 201)
    assert integrate(fine.points**2, fine) == pytest.approx(1.0 / 3.0, abs=1e-4)


def test_absolutely_continuous(two_point_grid: SupportGrid) -> None:
    grid = discrete_grid(3)
    p = Distribution(grid, [0.5, 0.5, 0.0])
    r = Distribution(grid, [0.5, 0.0, 0.5])
    assert not absolutely_continuous(p, r)
    assert absolutely_continuous(Distribution(grid, [1.0, 0.0, 0.0]), r)
    with pytest.raises(GridError):
        absolutely_continuous(p, Distribution(two_point_grid, [0.5, 0.5]))


def test_constraint_set_validation(step_function: MomentFunction) -> None:
    constraints = ConstraintSet((step_function,), [0.1])
    assert constraints.labels == ("u",)
    assert constraints.matrix_for(discrete_grid(2)).shape == (1, 2)
    assert ConstraintSet().matrix_for(discrete_grid(3)).shape == (0, 3)
    with pytest.raises(LengthMismatchError):
        ConstraintSet((step_function,), [0.1, 0.2])
    with pytest.raises(LengthMismatchError):
        constraints.matrix_for(discrete_grid(3))


def test_product_distribution(rng: np.random.Generator) -> None:
    first = Distribution(discrete_grid(3), rng.dirichlet(np.ones(3)))
    second = Distribution(trapezoid_grid(0.0, 1.0, 4), [1.0] * 4)
    joint = product_distribution(first, second)
    assert joint.grid.size == 12
    assert joint.mass == pytest.approx(1.0, abs=1e-12)
    assert joint.grid.matches(product_grid(first.grid, second.grid))
    assert joint.density[5] == pytest.approx(first.density[1] * second.density[1])
    assert joint.grid.volume == pytest.approx(3.0)
