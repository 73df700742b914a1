import math

import numpy as np
import pytest

from weighted_means.geometry.shapes import Ball, Point, as_point


def test_point_requires_two_finite_coordinates():
    with pytest.raises(ValueError):
        Point((1.0,))
    with pytest.raises(ValueError):
        Point((0.0, math.inf))


def test_as_point():
    point = as_point(np.array([1, 2, 3]))
    assert point == Point((1.0, 2.0, 3.0))
    assert as_point(point) is point
    assert point.dim == 3


def test_ball_rejects_radius():
    with pytest.raises(ValueError):
        Ball(Point((0.0, 0.0)), -1.0)


def test_ball_contains():
    ball = Ball((1.0, 0.0), 0.5)
    points = np.array([[1.0, 0.0], [1.4, 0.0], [1.5, 0.0], [0.0, 0.0]])
    assert ball.contains(points).tolist() == [True, True, False, False]


def test_ball_volume_and_bbox():
    ball = Ball((1.0, 2.0, 3.0), 2.0)
    assert ball.volume == pytest.approx(32 * math.pi / 3)
    np.testing.assert_array_equal(
        ball.bbox, [[-1.0, 3.0], [0.0, 4.0], [1.0, 5.0]]
    )


def test_closure_within():
    outer = Ball((0.0, 0.0), 1.0)
    assert Ball((0.2, 0.0), 0.5).closure_within(outer)
    assert not Ball((0.5, 0.0), 0.5).closure_within(outer)
    assert Ball((0.2, 0.0), 0.5).separation_from_boundary(
        outer
    ) == pytest.approx(0.3)


def test_distance_to_boundary():
    ball = Ball((0.0, 0.0), 1.0)
    assert ball.distance_to_boundary((0.6, 0.0)) == pytest.approx(0.4)
    assert ball.distance_to_boundary((2.0, 0.0)) == pytest.approx(-1.0)


def test_ball_to_dict():
    assert Ball((0.5, 1.0), 2).to_dict() == {"center": [0.5, 1.0], "r": 2.0}
