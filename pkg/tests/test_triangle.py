from __future__ import annotations

import numpy as np
import pytest

import triangle
from distributions import discrete_grid, normalized_q_expectation, q_expectation
from errors import AbsoluteContinuityError, MatchingDegenerateError, SolverError
from models import ConstraintKind, Distribution, MomentFunction, SupportGrid
from triangle import (
    expectation_match,
    matching_scan,
    verify_triangle,
    verify_triangle_normalized,
)

GRID_SIZE = 6


def _random_pair(rng: np.random.Generator) -> tuple[Distribution, Distribution]:
    grid = discrete_grid(GRID_SIZE)
    r = Distribution(grid, rng.dirichlet(np.full(GRID_SIZE, 5.0)))
    l = Distribution(grid, 0.8 * r.density + 0.2 * rng.dirichlet(np.full(GRID_SIZE, 5.0)))
    return l, r


def _random_functions(rng: np.random.Generator, count: int) -> list[MomentFunction]:
    return [
        MomentFunction(0.3 * rng.normal(size=GRID_SIZE), f"u{index + 1}")
        for index in range(count)
    ]


def test_two_point_triangle(
    two_point_grid: SupportGrid, half_prior: Distribution, step_function: MomentFunction
) -> None:
    l = Distribution(two_point_grid, [0.6, 0.4])
    report = verify_triangle(l, half_prior, [step_function], 2.0)

    assert report.kind is ConstraintKind.Q_EXPECTATION
    assert report.minimality_asserted
    assert report.matched_targets == pytest.approx((0.16,), abs=1e-10)
    np.testing.assert_allclose(report.posterior.distribution.density, [0.6, 0.4], atol=1e-9)
    assert report.d_lp == pytest.approx(0.0, abs=1e-9)
    assert report.d_lr == pytest.approx(0.04, rel=1e-12)
    assert report.d_pr == pytest.approx(0.04, rel=1e-8)
    assert abs(report.residual) < 1e-8
    assert report.passed()
    assert report.inequality_holds()


def test_l_equal_to_prior_gives_zero_divergences(
    half_prior: Distribution, step_function: MomentFunction
) -> None:
    report = verify_triangle(half_prior, half_prior, [step_function], 0.7)
    assert report.d_lr == 0.0
    assert report.d_lp == pytest.approx(0.0, abs=1e-10)
    assert report.d_pr == pytest.approx(0.0, abs=1e-10)
    assert report.passed()


def test_expectation_match_is_self_consistent(rng: np.random.Generator) -> None:
    l, r = _random_pair(rng)
    functions = _random_functions(rng, 2)
    for q in (0.5, 2.0):
        match = expectation_match(l, r, functions, q)
        observed = [q_expectation(l, u, q) for u in functions]
        np.testing.assert_allclose(match.observed_targets, observed, rtol=1e-12)
        assert match.denominator == pytest.approx(1.0 - (1.0 - q) * match.d_lp, rel=1e-12)
        np.testing.assert_allclose(
            match.targets, match.observed_targets / match.denominator, atol=1e-9
        )
        np.testing.assert_allclose(match.posterior.expectations, match.targets, atol=1e-9)
        assert match.iterations >= 1


@pytest.mark.parametrize("q", [0.5, 0.8, 1.2, 2.0])
@pytest.mark.parametrize("count", [1, 2])
def test_triangle_holds_on_random_instances(
    rng: np.random.Generator, q: float, count: int
) -> None:
    for _ in range(200):
        l, r = _random_pair(rng)
        report = verify_triangle(l, r, _random_functions(rng, count), q)
        assert abs(report.residual) < 1e-8
        assert report.passed()
        assert report.inequality_holds()
        assert report.d_lp >= 0.0 and report.d_pr >= 0.0


def test_triangle_holds_for_unrelated_l_and_prior(rng: np.random.Generator) -> None:
    grid = discrete_grid(4)
    completed = 0
    for _ in range(200):
        l = Distribution(grid, rng.dirichlet(np.ones(4)))
        r = Distribution(grid, rng.dirichlet(np.ones(4)))
        functions = [MomentFunction(rng.normal(size=4), "u")]
        try:
            report = verify_triangle(l, r, functions, 2.0)
        except (SolverError, AbsoluteContinuityError):
            continue
        completed += 1
        assert abs(report.residual) < 1e-8
        assert report.passed()
        np.testing.assert_allclose(
            report.matched_targets,
            [q_expectation(l, u, 2.0) / (1.0 + report.d_lp) for u in functions],
            rtol=1e-9,
        )
    assert completed >= 100


def test_classical_triangle(rng: np.random.Generator) -> None:
    l, r = _random_pair(rng)
    functions = _random_functions(rng, 2)
    report = verify_triangle(l, r, functions, 1.0)
    assert abs(report.residual) < 1e-9
    observed = [q_expectation(l, u, 1.0) for u in functions]
    np.testing.assert_allclose(report.matched_targets, observed, atol=1e-10)


def test_triangle_is_continuous_in_q(rng: np.random.Generator) -> None:
    l, r = _random_pair(rng)
    functions = _random_functions(rng, 1)
    classical = verify_triangle(l, r, functions, 1.0)
    for q in (1.0 - 1e-6, 1.0 + 1e-6):
        nearby = verify_triangle(l, r, functions, q)
        assert nearby.d_lr == pytest.approx(classical.d_lr, abs=1e-5)
        assert nearby.d_lp == pytest.approx(classical.d_lp, abs=1e-5)
        assert nearby.d_pr == pytest.approx(classical.d_pr, abs=1e-5)


@pytest.mark.parametrize("q", [0.5, 2.0])
def test_matched_targets_minimize_divergence_to_posterior(
    rng: np.random.Generator, q: float
) -> None:
    l, r = _random_pair(rng)
    report = verify_triangle(l, r, _random_functions(rng, 1), q, scan_points=9)
    assert len(report.scan_profile) > 0
    lowest = min(divergence for _, divergence in report.scan_profile)
    assert lowest >= report.d_lp - 1e-9


def test_matching_scan_needs_one_function(rng: np.random.Generator) -> None:
    l, r = _random_pair(rng)
    with pytest.raises(ValueError):
        matching_scan(l, r, _random_functions(rng, 2), 2.0)
    profile = matching_scan(l, r, _random_functions(rng, 1), 2.0, points=5)
    targets = [target for target, _ in profile]
    assert targets == sorted(targets)


def test_normalized_two_point_triangle(
    two_point_grid: SupportGrid, half_prior: Distribution, step_function: MomentFunction
) -> None:
    l = Distribution(two_point_grid, [0.7, 0.3])
    report = verify_triangle_normalized(l, half_prior, [step_function], 2.0)

    assert report.kind is ConstraintKind.NORMALIZED
    assert not report.minimality_asserted
    assert report.matched_targets == pytest.approx((9.0 / 58.0,), rel=1e-12)
    np.testing.assert_allclose(report.posterior.distribution.density, [0.7, 0.3], atol=1e-8)
    assert report.d_lr == pytest.approx(0.16, rel=1e-12)
    assert report.d_pr == pytest.approx(0.16, rel=1e-8)
    assert report.d_lp == pytest.approx(0.0, abs=1e-8)
    assert report.passed()


def test_normalized_triangle_without_constraints(half_prior: Distribution) -> None:
    report = verify_triangle_normalized(half_prior, half_prior, [], 1.5)
    assert report.matched_targets == ()
    assert report.d_lr == 0.0
    assert report.d_pr == pytest.approx(0.0, abs=1e-12)
    assert report.passed()


@pytest.mark.parametrize("q", [0.5, 1.0, 1.5, 2.0])
def test_normalized_triangle_on_random_instances(rng: np.random.Generator, q: float) -> None:
    for _ in range(50):
        l, r = _random_pair(rng)
        functions = _random_functions(rng, 2)
        report = verify_triangle_normalized(l, r, functions, q)
        expected = [normalized_q_expectation(l, u, q) for u in functions]
        np.testing.assert_allclose(report.matched_targets, expected, rtol=1e-12)
        assert abs(report.residual) < 1e-8


def test_prior_must_cover_l() -> None:
    grid = discrete_grid(3)
    l = Distribution(grid, [0.4, 0.3, 0.3])
    r = Distribution(grid, [0.5, 0.5, 0.0])
    u = [MomentFunction([0.0, 1.0, 2.0])]
    with pytest.raises(AbsoluteContinuityError):
        verify_triangle(l, r, u, 2.0)
    with pytest.raises(AbsoluteContinuityError):
        verify_triangle_normalized(l, r, u, 2.0)


def test_degenerate_matching_denominator(
    monkeypatch: pytest.MonkeyPatch,
    two_point_grid: SupportGrid,
    half_prior: Distribution,
    step_function: MomentFunction,
) -> None:
    l = Distribution(two_point_grid, [0.6, 0.4])
    monkeypatch.setattr(triangle, "tsallis_relative_entropy", lambda *args: 10.0)
    with pytest.raises(MatchingDegenerateError):
        expectation_match(l, half_prior, [step_function], 0.5)
