import math

import pytest

from weighted_means.geometry.constants import (
    DimensionError,
    ball_volume,
    check_dimension,
    sphere_area,
)


@pytest.mark.parametrize(
    "m, expected",
    [
        pytest.param(2, 2 * math.pi, id="circle"),
        pytest.param(3, 4 * math.pi, id="sphere"),
        pytest.param(4, 2 * math.pi**2, id="3-sphere"),
        pytest.param(5, 8 * math.pi**2 / 3, id="4-sphere"),
    ],
)
def test_sphere_area(m, expected):
    assert sphere_area(m) == pytest.approx(expected, rel=1e-15)


def test_sphere_area_matches_gamma_formula():
    for m in range(2, 17):
        expected = 2 * math.pi ** (m / 2) / math.gamma(m / 2)
        assert sphere_area(m) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize(
    "m, r, expected",
    [
        pytest.param(3, 1.0, 4 * math.pi / 3, id="unit ball"),
        pytest.param(2, 2.0, 4 * math.pi, id="disc"),
        pytest.param(5, 1.0, 8 * math.pi**2 / 15, id="5D ball"),
    ],
)
def test_ball_volume(m, r, expected):
    assert ball_volume(m, r) == pytest.approx(expected, rel=1e-14)


def test_ball_volume_uses_sphere_area():
    for m in range(2, 17):
        assert ball_volume(m, 1.7) == sphere_area(m) * 1.7**m / m


@pytest.mark.parametrize("m", [1, 17, 2.5, True])
def test_check_dimension_rejects(m):
    with pytest.raises(DimensionError):
        check_dimension(m)


def test_ball_volume_rejects_radius():
    with pytest.raises(ValueError):
        ball_volume(2, 0.0)
