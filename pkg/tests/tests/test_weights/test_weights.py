import math

import numpy as np
import pytest

from weighted_means.expr.parser import ExprSyntaxError
from weighted_means.weights.weights import (
    CustomWeight,
    LogWeight,
    PowerWeight,
    RieszWeight,
    WeightDivergenceError,
    WeightParameterError,
    WeightSpecError,
    numeric_mean_constant,
    numeric_radial_primitive,
    parse_weight_spec,
)


@pytest.mark.parametrize(
    "weight, t, r, expected",
    [
        pytest.param(LogWeight(2), 1.3, 1.3, 0.0, id="log at r"),
        pytest.param(RieszWeight(3, alpha=1.0), 0.5, 1.0, 3.0, id="riesz"),
        pytest.param(PowerWeight(2, beta=2.0), 2.0, 1.0, -3.0, id="power"),
        pytest.param(CustomWeight(2, source="r - t"), 0.25, 1.0, 0.75),
    ],
)
def test_value(weight, t, r, expected):
    assert float(weight.value(t, r)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "weight, T, r, expected",
    [
        pytest.param(LogWeight(2), 1.0, 1.0, 0.25, id="log"),
        pytest.param(RieszWeight(3, alpha=1.0), 2.0, 2.0, 4 / 3, id="riesz"),
        pytest.param(PowerWeight(2, beta=2.0), 1.0, 1.0, 0.25, id="power"),
    ],
)
def test_radial_primitive(weight, T, r, expected):
    assert weight.radial_primitive(T, r) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize(
    "weight, r",
    [
        pytest.param(LogWeight(2), 0.3, id="log"),
        pytest.param(RieszWeight(3, alpha=1.0), 2.0, id="riesz"),
        pytest.param(PowerWeight(2, beta=2.0), 1.0, id="power"),
    ],
)
def test_mean_constant_examples(weight, r):
    assert weight.mean_constant(r) == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("r", [0.5, 1.0, 2.5])
def test_mean_constant_closed_forms(m, r):
    assert LogWeight(m).mean_constant(r) == pytest.approx(1 / m, rel=1e-11)
    for alpha in (0.5, 1.0, m - 1.5, m - 0.5):
        expected = (m / alpha - 1) * r ** (alpha - m)
        assert RieszWeight(m, alpha=alpha).mean_constant(r) == pytest.approx(
            expected, rel=1e-11
        )
    for beta in (0.5, 1.0, 2.0, 5.0):
        expected = (1 - m / (m + beta)) * r**beta
        assert PowerWeight(m, beta=beta).mean_constant(r) == pytest.approx(
            expected, rel=1e-11
        )


def test_closed_forms_match_quadrature(settings):
    rng = np.random.default_rng(17)
    for _ in range(30):
        m = int(rng.integers(2, 6))
        r = float(rng.uniform(0.2, 3.0))
        T = float(rng.uniform(0.1, 1.0)) * r
        weights = [
            LogWeight(m),
            RieszWeight(m, alpha=float(rng.uniform(0.3, m - 0.3))),
            PowerWeight(m, beta=float(rng.uniform(0.2, 4.0))),
        ]
        for weight in weights:
            numeric = numeric_radial_primitive(weight, T, r, settings)
            assert numeric.value == pytest.approx(
                weight.radial_primitive(T, r), rel=1e-10
            )


def test_vectorised_primitives():
    weight = RieszWeight(3, alpha=1.5)
    T = np.array([0.25, 0.5, 1.0])
    expected = [weight.radial_primitive(t, 1.0) for t in T]
    np.testing.assert_allclose(weight.radial_primitives(T, 1.0), expected)


def test_custom_primitive_uses_quadrature():
    weight = CustomWeight(2, source="log(r/t)")
    assert weight.radial_primitive(1.0, 1.0) == pytest.approx(
        0.25, abs=1e-12
    )
    np.testing.assert_allclose(
        weight.radial_primitives(np.array([0.5, 1.0]), 1.0),
        LogWeight(2).radial_primitives(np.array([0.5, 1.0]), 1.0),
        rtol=1e-10,
    )


def test_divergent_custom_weight():
    weight = CustomWeight(3, source="t^(-5)")
    with pytest.raises(WeightDivergenceError):
        weight.radial_primitive(1.0, 1.0)


def test_numeric_mean_constant_of_sine_weight():
    # c_w = 2 * int_0^1 t sin(pi (1 - t)) dt = 2 / pi
    weight = CustomWeight(2, source="sin(pi*(r-t)/r)")
    estimate = numeric_mean_constant(weight, 1.0)
    assert estimate.value == pytest.approx(2 / math.pi, rel=1e-12)


@pytest.mark.parametrize(
    "make",
    [
        pytest.param(lambda: RieszWeight(3, alpha=3.0), id="alpha = m"),
        pytest.param(lambda: RieszWeight(2, alpha=0.0), id="alpha = 0"),
        pytest.param(lambda: PowerWeight(2, beta=-1.0), id="beta < 0"),
    ],
)
def test_parameter_errors(make):
    with pytest.raises(WeightParameterError):
        make()


def test_finite_variance():
    assert LogWeight(3).finite_variance
    assert RieszWeight(4, alpha=2.5).finite_variance
    assert not RieszWeight(4, alpha=2.0).finite_variance


@pytest.mark.parametrize(
    "spec, expected",
    [
        pytest.param("log", LogWeight(3), id="log"),
        pytest.param("riesz:alpha=0.5", RieszWeight(3, alpha=0.5)),
        pytest.param("power:beta=2", PowerWeight(3, beta=2.0)),
        pytest.param(" custom: t - r ", CustomWeight(3, source="t - r")),
    ],
)
def test_parse_weight_spec(spec, expected):
    weight = parse_weight_spec(spec, 3)
    assert weight == expected
    assert parse_weight_spec(weight.describe(), 3) == weight


@pytest.mark.parametrize(
    "spec, error",
    [
        pytest.param("gauss", WeightSpecError, id="unknown kind"),
        pytest.param("log:2", WeightSpecError, id="log parameter"),
        pytest.param("riesz:beta=1", WeightSpecError, id="wrong name"),
        pytest.param("power:beta=x", WeightSpecError, id="not a number"),
        pytest.param("custom:", WeightSpecError, id="empty custom"),
        pytest.param("riesz:alpha=5", WeightParameterError, id="alpha"),
        pytest.param("custom:log(r/t", ExprSyntaxError, id="syntax"),
    ],
)
def test_parse_weight_spec_errors(spec, error):
    with pytest.raises(error):
        parse_weight_spec(spec, 3)
