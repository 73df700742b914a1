import math

import numpy as np
import pytest

from weighted_means.quadrature.rules import (
    Estimate,
    RadialPanelRule,
    RuleConstructionError,
    RuleSettings,
    circle_rule,
    sphere_rule_3d,
)


def test_circle_rule_nodes():
    rule = circle_rule(4)
    np.testing.assert_allclose(
        rule.nodes, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15
    )
    np.testing.assert_allclose(rule.weights, math.pi / 2)


def test_circle_rule_integrates():
    rule = circle_rule(16)
    theta = np.arctan2(rule.nodes[:, 1], rule.nodes[:, 0])
    assert rule.integrate(np.cos(theta) ** 2) == pytest.approx(
        math.pi, abs=1e-14
    )
    assert rule.integrate(np.ones(rule.n)) == pytest.approx(
        2 * math.pi, abs=1e-14
    )


@pytest.mark.parametrize("n", [2, 7])
def test_circle_rule_rejects(n):
    with pytest.raises(RuleConstructionError):
        circle_rule(n)


def test_sphere_rule_3d_integrates():
    rule = sphere_rule_3d(8, 16)
    x, y, z = rule.nodes.T
    assert rule.integrate(np.ones(rule.n)) == pytest.approx(
        4 * math.pi, abs=1e-13
    )
    assert rule.integrate(z**2) == pytest.approx(4 * math.pi / 3, abs=1e-12)
    assert abs(rule.integrate(x * y)) < 1e-13
    np.testing.assert_allclose(np.linalg.norm(rule.nodes, axis=1), 1.0)


@pytest.mark.parametrize("n_polar, n_azimuth", [(1, 8), (4, 5), (4, 2)])
def test_sphere_rule_3d_rejects(n_polar, n_azimuth):
    with pytest.raises(RuleConstructionError):
        sphere_rule_3d(n_polar, n_azimuth)


def test_half_rules():
    assert circle_rule(256).half().n == 128
    assert sphere_rule_3d(32, 64).half().params == (16, 32)


def test_radial_rule_grading():
    rule = RadialPanelRule(2.0)
    assert rule.n_panels == 100
    assert len(rule.nodes) == 1600
    assert rule.inner_edge == pytest.approx(2.0 * 0.5**100)
    assert np.all(rule.nodes > 0)
    assert np.all(rule.nodes < 2.0)
    assert rule.weights.sum() == pytest.approx(2.0, abs=1e-14)


def test_radial_rule_truncation_warns(caplog):
    rule = RadialPanelRule(1.0, max_panels=10)
    assert rule.n_panels == 10
    assert "truncated" in caplog.text


@pytest.mark.parametrize(
    "kwargs",
    [
        pytest.param({"r": 0.0}, id="radius"),
        pytest.param({"r": 1.0, "grading_ratio": 1.0}, id="grading"),
        pytest.param({"r": 1.0, "nodes_per_panel": 0}, id="nodes"),
    ],
)
def test_radial_rule_rejects(kwargs):
    with pytest.raises(RuleConstructionError):
        RadialPanelRule(**kwargs)


def test_radial_rule_half_and_rescaled():
    rule = RadialPanelRule(1.0)
    assert rule.half().nodes_per_panel == 8
    assert rule.half().n_panels == rule.n_panels
    np.testing.assert_allclose(rule.rescaled(3.0).nodes, 3.0 * rule.nodes)


def test_estimate_contract():
    estimate = Estimate(2.0, 0.5, "mc", 10)
    assert estimate.scaled(-2.0) == Estimate(-4.0, 1.0, "mc", 10)
    with pytest.raises(ValueError):
        Estimate(1.0, -1.0, "mc", 1)
    with pytest.raises(ValueError):
        Estimate(1.0, 0.0, "simpson", 1)


def test_settings_from_packaged_config():
    settings = RuleSettings.default()
    assert settings.sphere_n == 256
    assert (settings.sphere_polar, settings.sphere_azimuth) == (32, 64)
    assert (settings.radial_panels, settings.radial_nodes) == (100, 16)
    assert settings.grading_ratio == 0.5
    assert settings.mc_n == 1_000_000
    assert settings.seed == 0


def test_settings_overrides():
    settings = RuleSettings.default().with_overrides(sphere_n=64, seed=None)
    assert settings.sphere_n == 64
    assert settings.seed == 0
    assert settings.sphere_rule(2).n == 64
    assert settings.sphere_rule(3).n == 32 * 64
    with pytest.raises(RuleConstructionError):
        settings.sphere_rule(4)
