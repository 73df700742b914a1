from pathlib import Path

import pytest

from weighted_means.geometry.domains import StarDomain
from weighted_means.quadrature.rules import RuleSettings


@pytest.fixture
def data_path():
    """Directory storing all test data"""
    return Path(__file__).parent.parent / "data"


@pytest.fixture
def domains_path(data_path):
    return data_path / "domains"


@pytest.fixture
def settings():
    """Packaged rule sizes."""
    return RuleSettings.default()


@pytest.fixture
def small_settings():
    """Reduced rule sizes and Monte Carlo samples for quick checks."""
    return RuleSettings.default().with_overrides(
        sphere_n=128,
        sphere_polar=24,
        sphere_azimuth=48,
        mc_n=20_000,
        chunk_size=4096,
        workers=2,
    )


@pytest.fixture
def unit_disc():
    return StarDomain.ball((0.0, 0.0), 1.0)


@pytest.fixture
def ellipse():
    """Axis-aligned ellipse with the area of the unit disc."""
    return StarDomain.ellipsoid((0.0, 0.0), (1.2, 1 / 1.2))
