import math

import numpy as np
import pytest
from scipy.special import i0

from weighted_means.geometry.shapes import Ball
from weighted_means.quadrature.integrate import (
    EvaluationFailure,
    integrate_ball,
    radial_integrate,
    radial_panel_sums,
)
from weighted_means.quadrature.rules import (
    RadialPanelRule,
    circle_rule,
    sphere_rule_3d,
)


@pytest.mark.parametrize(
    "f, r, expected, tol",
    [
        pytest.param(
            lambda rho: rho * np.log(1 / rho), 1.0, 0.25, 1e-12, id="log"
        ),
        pytest.param(lambda rho: rho**-0.5, 1.0, 2.0, 1e-10, id="sqrt"),
        pytest.param(
            lambda rho: np.ones_like(rho), 2.0, 2.0, 1e-14, id="constant"
        ),
    ],
)
def test_radial_integrate(f, r, expected, tol):
    estimate = radial_integrate(f, RadialPanelRule(r))
    assert estimate.value == pytest.approx(expected, abs=tol)
    assert estimate.method == "product_rule"


def test_radial_integrate_reports_failure():
    with pytest.raises(EvaluationFailure) as error:
        radial_integrate(
            lambda rho: np.where(rho > 0.5, np.nan, 1.0), RadialPanelRule(1.0)
        )
    assert error.value.radius > 0.5


def test_panel_sums_add_up():
    rule = RadialPanelRule(1.0)
    sums = radial_panel_sums(lambda rho: rho, rule)
    assert sums.shape == (rule.n_panels,)
    assert sums.sum() == pytest.approx(0.5, abs=1e-15)
    # panel contributions shrink by q^2 for rho
    assert sums[1] / sums[0] == pytest.approx(0.25)


@pytest.fixture
def disc():
    return Ball((0.0, 0.0), 1.0)


def test_integrate_constant_over_disc(disc):
    estimate = integrate_ball(
        lambda p: np.ones(p.shape[:-1]),
        disc,
        circle_rule(64),
        RadialPanelRule(1.0),
    )
    assert estimate.value == pytest.approx(math.pi, abs=1e-13)


def test_integrate_norm_squared_over_disc(disc):
    estimate = integrate_ball(
        lambda p: np.sum(p**2, axis=-1),
        disc,
        circle_rule(64),
        RadialPanelRule(1.0),
    )
    assert estimate.value == pytest.approx(math.pi / 2, abs=1e-12)


@pytest.mark.parametrize(
    "ball, sphere",
    [
        pytest.param(Ball((0.3, -1.2), 0.7), circle_rule(32), id="2D"),
        pytest.param(
            Ball((0.3, -1.2, 2.0), 0.4), sphere_rule_3d(8, 16), id="3D"
        ),
    ],
)
def test_integrate_linear_function(ball, sphere):
    estimate = integrate_ball(
        lambda p: p[..., 0], ball, sphere, RadialPanelRule(1.0)
    )
    expected = ball.center.coords[0] * ball.volume
    assert estimate.value == pytest.approx(expected, rel=1e-11)


def test_radial_weight_applied(disc):
    # int_B log(1/|y|) dy = 2 pi * 1/4
    estimate = integrate_ball(
        lambda p: np.ones(p.shape[:-1]),
        disc,
        circle_rule(16),
        RadialPanelRule(1.0),
        radial_weight=lambda rho: np.log(1 / rho),
    )
    assert estimate.value == pytest.approx(math.pi / 2, abs=1e-12)


def test_workers_do_not_change_result(mocker):
    mocker.patch("weighted_means.quadrature.integrate.BLOCK_POINTS", 1600)
    ball = Ball((0.1, 0.2), 0.5)

    def g(p):
        return np.exp(p[..., 0]) * np.cos(p[..., 1])

    results = [
        integrate_ball(
            g, ball, circle_rule(64), RadialPanelRule(0.5), workers=workers
        )
        for workers in (1, 4)
    ]
    assert results[0] == results[1]


def test_dimension_mismatch(disc):
    with pytest.raises(ValueError):
        integrate_ball(
            lambda p: p[..., 0], disc, sphere_rule_3d(4, 8), RadialPanelRule(1)
        )


def decreasing_to_floor(errors, floor=1e-13):
    return all(
        later < earlier or later <= floor
        for earlier, later in zip(errors, errors[1:])
    )


def test_error_shrinks_when_panels_double():
    errors = [
        abs(
            radial_integrate(
                lambda rho: rho**-0.5, RadialPanelRule(1.0, max_panels=n)
            ).value
            - 2.0
        )
        for n in (5, 10, 20, 40)
    ]
    assert decreasing_to_floor(errors, floor=0.0)
    # truncation below the innermost edge dominates
    assert errors[0] == pytest.approx(2 * 2**-2.5, rel=1e-6)


def test_error_shrinks_when_radial_nodes_double():
    errors = [
        abs(
            radial_integrate(
                lambda rho: rho * np.log(1 / rho),
                RadialPanelRule(1.0, nodes_per_panel=n),
            ).value
            - 0.25
        )
        for n in (1, 2, 4, 8)
    ]
    assert errors[0] > 1e-6
    assert decreasing_to_floor(errors)


def test_error_shrinks_when_sphere_nodes_double():
    # int over S^1 of exp(x) = 2 pi I_0(1), over S^2 of exp(z) = 4 pi sinh 1
    circle_errors = [
        abs(
            circle_rule(n).integrate(np.exp(circle_rule(n).nodes[:, 0]))
            - 2 * math.pi * i0(1.0)
        )
        for n in (4, 8, 16, 32)
    ]
    sphere_errors = [
        abs(
            sphere_rule_3d(n, 2 * n).integrate(
                np.exp(sphere_rule_3d(n, 2 * n).nodes[:, 2])
            )
            - 4 * math.pi * math.sinh(1.0)
        )
        for n in (2, 4, 8, 16)
    ]
    for errors in (circle_errors, sphere_errors):
        assert errors[0] > 1e-4
        assert decreasing_to_floor(errors)
