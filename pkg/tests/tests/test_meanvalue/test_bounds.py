import numpy as np
import pytest

from weighted_means.geometry.shapes import Ball
from weighted_means.harmonic.catalogue import random_harmonic
from weighted_means.harmonic.functions import (
    ConstantFn,
    CoordinateFn,
    LinearCombination,
)
from weighted_means.meanvalue.bounds import (
    ContainmentError,
    derivative_bound_check,
    sample_ball,
)


def test_coordinate_bound():
    report = derivative_bound_check(
        CoordinateFn(2, 1), Ball((0, 0), 1.0), Ball((0, 0), 0.5), seed=1
    )
    assert report.distance == pytest.approx(0.5)
    assert report.max_gradient == 1.0
    assert report.bound == pytest.approx(4.0, rel=1e-3)
    assert report.bound <= 4.0
    assert report.bound_holds
    # y_1 changes sign on the unit disc
    assert report.nonnegative_bound_holds is None
    assert report.passed


def test_nonnegative_bound():
    u = LinearCombination(2, (1.0, 1.0), (ConstantFn(2), CoordinateFn(2, 1)))
    report = derivative_bound_check(
        u, Ball((0, 0), 1.0), Ball((0, 0), 0.5), x0=(0.0, 0.0)
    )
    assert report.min_value >= 0
    assert report.distance_x0 == 1.0
    assert report.gradient_x0 == 1.0
    assert report.bound_x0 == 2.0
    assert report.nonnegative_bound_holds
    assert report.to_dict()["pass"] is True


def test_random_harmonic_bound():
    u = random_harmonic(11, 3, 3)
    report = derivative_bound_check(
        u, Ball((0, 0, 0), 1.0), Ball((0, 0, 0), 0.6), n_samples=2000
    )
    assert report.bound_holds
    assert report.n_samples == 2000


def test_off_centre_inner_ball():
    report = derivative_bound_check(
        CoordinateFn(2, 2),
        Ball((0, 0), 2.0),
        Ball((0.5, 0.5), 0.5),
        n_samples=500,
    )
    assert report.distance == pytest.approx(1.5 - 0.5**0.5)
    assert report.bound_holds


def test_inner_ball_must_be_compactly_contained():
    with pytest.raises(ContainmentError):
        derivative_bound_check(
            CoordinateFn(2, 1), Ball((0, 0), 1.0), Ball((0.5, 0), 0.5)
        )


def test_x0_must_lie_inside():
    with pytest.raises(ContainmentError):
        derivative_bound_check(
            CoordinateFn(2, 1),
            Ball((0, 0), 1.0),
            Ball((0, 0), 0.5),
            n_samples=100,
            x0=(1.0, 0.0),
        )


def test_reproducible_for_a_seed():
    args = (CoordinateFn(2, 1), Ball((0, 0), 1.0), Ball((0, 0), 0.5))
    first = derivative_bound_check(*args, n_samples=300, seed=4)
    second = derivative_bound_check(*args, n_samples=300, seed=4)
    assert first.to_dict() == second.to_dict()


def random_configuration(rng, index):
    """Random u, outer ball D, inner ball D' inside D and x0 in D."""
    m = int(rng.integers(2, 4))
    outer = Ball(rng.uniform(-1, 1, size=m), rng.uniform(0.5, 1.5))
    center = outer.center.as_array()
    inner_r = rng.uniform(0.1, 0.6) * outer.radius
    offset = rng.normal(size=m)
    offset /= np.linalg.norm(offset)
    offset *= rng.uniform(0, 0.9) * (outer.radius - inner_r)
    inner = Ball(center + offset, inner_r)
    direction = rng.normal(size=m)
    direction /= np.linalg.norm(direction)
    x0 = center + rng.uniform(0, 0.9) * outer.radius * direction
    u = random_harmonic(index, m, int(rng.integers(1, 5)))
    if index % 2:
        # shift half of the cases to be positive on D
        points = sample_ball(rng, outer, 20_000)
        shift = 2 * float(np.max(np.abs(u(points)))) + 1
        u = LinearCombination(m, (1.0, shift), (u, ConstantFn(m)))
    return u, outer, inner, x0


def test_bounds_on_random_configurations():
    rng = np.random.default_rng(2024)
    reports = []
    for index in range(50):
        u, outer, inner, x0 = random_configuration(rng, index)
        reports.append(
            derivative_bound_check(u, outer, inner, 2000, index, x0)
        )
    assert all(report.bound_holds for report in reports)
    assert all(report.passed for report in reports)
    positive = [r for r in reports if r.nonnegative_bound_holds is not None]
    assert len(positive) >= 25
    assert all(r.nonnegative_bound_holds for r in positive)
