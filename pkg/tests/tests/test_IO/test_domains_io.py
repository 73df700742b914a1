import math

import numpy as np
import pytest

from weighted_means.general.exceptions import CommandLineInputError
from weighted_means.geometry.domains import (
    FourierBoundary,
    ImplicitDomain,
    RaytracedBoundary,
    SeparableBoundary,
    StarDomain,
    star_volume,
)
from weighted_means.IO.domains import (
    DomainSpecError,
    domain_from_spec,
    domain_to_spec,
    load_domain,
    save_domain,
)


def test_load_ball(domains_path):
    domain = load_domain(domains_path / "ball.json")
    assert isinstance(domain, StarDomain)
    assert domain.is_ball
    assert domain.anchor.coords == (0.25, -0.5)
    assert domain.boundary == FourierBoundary(0.75)


def test_load_star2d(domains_path):
    domain = load_domain(domains_path / "star2d.json")
    assert domain.boundary.cos == (0.0, 0.0, 0.1)
    assert domain.boundary.sin == (0.0, 0.05)


def test_load_star3d(domains_path, small_settings):
    domain = load_domain(domains_path / "star3d.yml")
    assert isinstance(domain.boundary, SeparableBoundary)
    assert domain.dim == 3
    assert star_volume(domain, small_settings) > 0


def test_load_implicit_ellipse(domains_path):
    domain = load_domain(domains_path / "ellipse.json")
    assert isinstance(domain, ImplicitDomain)
    assert domain.name == "ellipse"
    np.testing.assert_array_equal(domain.bbox, [[-2, 2], [-2, 2]])
    inside = domain.contains(np.array([[1.1, 0.0], [0.0, 0.9]]))
    assert inside.tolist() == [True, False]


def test_load_ellipsoid(domains_path, settings):
    domain = load_domain(domains_path / "ellipse_star.json")
    assert domain.anchor.coords == (0.3, -0.2)
    assert star_volume(domain, settings) == pytest.approx(math.pi, rel=1e-12)


def test_load_section(data_path):
    domain = load_domain(data_path / "yaml" / "sections.yml", "domain")
    assert domain.boundary.cos == (0.0, 0.0, 0.1)
    with pytest.raises(DomainSpecError):
        load_domain(data_path / "yaml" / "sections.yml", "domains")


def test_missing_file(domains_path):
    with pytest.raises(CommandLineInputError):
        load_domain(domains_path / "no_such_domain.json")


def test_bad_expression_keeps_position(domains_path):
    with pytest.raises(DomainSpecError, match="Boundary expression"):
        load_domain(domains_path / "bad_expr.json")


def test_negative_radius(domains_path):
    with pytest.raises(DomainSpecError, match="Invalid domain spec"):
        load_domain(domains_path / "negative_radius.json")


@pytest.mark.parametrize(
    "spec",
    [
        pytest.param([1, 2], id="not a mapping"),
        pytest.param({"kind": "torus"}, id="kind"),
        pytest.param({"kind": "ball", "m": 2, "r": 1.0}, id="missing"),
        pytest.param(
            {"kind": "ball", "m": 3, "center": [0, 0], "r": 1.0},
            id="centre",
        ),
        pytest.param(
            {"kind": "star2d", "anchor": [0, 0, 0], "a0": 1.0}, id="anchor"
        ),
        pytest.param(
            {"kind": "star3d", "anchor": [0, 0, 0], "r0": 1.0, "terms": [{}]},
            id="terms",
        ),
        pytest.param(
            {"kind": "implicit", "m": 2, "shape": "torus", "params": [1]},
            id="shape",
        ),
        pytest.param(
            {"kind": "ellipsoid", "center": [0, 0], "semi_axes": [1, -1]},
            id="axes",
        ),
    ],
)
def test_invalid_specs(spec):
    with pytest.raises(DomainSpecError):
        domain_from_spec(spec)


def test_ball_in_four_dimensions():
    domain = domain_from_spec(
        {"kind": "ball", "m": 4, "center": [0, 0, 0, 1], "r": 0.5}
    )
    assert isinstance(domain, ImplicitDomain)
    assert domain.contains(np.array([[0, 0, 0, 1.4]]))[0]


@pytest.mark.parametrize(
    "domain",
    [
        pytest.param(
            StarDomain.fourier((0.1, 0.2), 1.0, cos=[0.1], sin=[0, 0.05]),
            id="fourier",
        ),
        pytest.param(
            StarDomain.ellipsoid((0.0, 0.0), (1.2, 1 / 1.2)), id="expr"
        ),
        pytest.param(StarDomain.ball((0.0, 0.0, 1.0), 2.0), id="separable"),
        pytest.param(
            ImplicitDomain.from_catalogue(
                "union", 2, [0, 0, 1, 1.5, 0, 1], center=(1, 1)
            ),
            id="union",
        ),
    ],
)
def test_spec_rebuilds_domain(domain, tmp_path):
    spec = domain_to_spec(domain)
    rebuilt = domain_from_spec(spec)
    assert domain_to_spec(rebuilt) == spec
    rng = np.random.default_rng(0)
    points = rng.uniform(-2.5, 2.5, size=(200, domain.dim))
    np.testing.assert_array_equal(
        rebuilt.contains(points), domain.contains(points)
    )

    path = tmp_path / "domain.yml"
    save_domain(domain, path)
    assert domain_to_spec(load_domain(path)) == spec


def test_no_spec_for_traced_domains(ellipse):
    traced = StarDomain(
        2, ellipse.anchor, RaytracedBoundary(ellipse, (0.0, 0.0))
    )
    with pytest.raises(DomainSpecError):
        domain_to_spec(traced)
    with pytest.raises(DomainSpecError):
        domain_to_spec(ellipse.as_implicit())
