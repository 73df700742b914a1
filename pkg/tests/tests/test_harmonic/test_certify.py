import numpy as np
import pytest

from weighted_means.harmonic.catalogue import (
    catalogue,
    polynomial,
    random_harmonic,
)
from weighted_means.harmonic.certify import certify_harmonic, laplacian_fd
from weighted_means.harmonic.functions import FundamentalFn


def test_harmonic_polynomial():
    u = polynomial("x2-y2", 2)
    assert laplacian_fd(u, (0.3, -0.7), h=1e-3) == pytest.approx(0, abs=1e-8)


def test_sum_of_squares():
    u = polynomial("norm2", 2)
    assert laplacian_fd(u, (0.3, -0.7)) == pytest.approx(4.0, abs=1e-8)


def test_fundamental_solution_far_from_pole():
    u = FundamentalFn(3, pole=(4.0, 0.0, 0.0))
    assert laplacian_fd(u, (0.1, 0.2, -0.3)) == pytest.approx(0, abs=1e-6)


def test_plain_callable():
    def cube(points):
        return points[:, 0] ** 3

    assert laplacian_fd(cube, (0.5, 0.0)) == pytest.approx(3.0, abs=1e-6)


@pytest.mark.parametrize("h", [0.0, -1e-3])
def test_step_must_be_positive(h):
    with pytest.raises(ValueError):
        laplacian_fd(polynomial("xy", 2), (0.0, 0.0), h=h)


@pytest.mark.parametrize("seed", [0, 1, 2])
@pytest.mark.parametrize("m", [2, 3])
def test_random_harmonic_passes_certification(seed, m):
    u = random_harmonic(seed, m, 3)
    points = np.random.default_rng(seed).uniform(-1, 1, size=(10, m))
    assert certify_harmonic(u, points) <= 1e-6


def test_second_order_convergence():
    u = polynomial("x4-6x2y2+y4", 2)
    x = (0.4, 0.3)
    coarse = abs(laplacian_fd(u, x, h=1e-2))
    fine = abs(laplacian_fd(u, x, h=5e-3))
    assert fine == pytest.approx(coarse / 4, rel=1e-3)


def test_catalogue_residuals_scale_with_h_squared():
    h = 1e-3
    points = np.random.default_rng(4).uniform(-1, 1, size=(5, 3))
    for u in catalogue(3):
        assert certify_harmonic(u, points, h=h) <= 10 * h**2, u.describe()
