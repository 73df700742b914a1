import math

import numpy as np
import pytest

from weighted_means.expr.evaluate import ExprEvaluationError, evaluate
from weighted_means.expr.nodes import WEIGHT_VARIABLES
from weighted_means.expr.parser import parse


def weight_expr(source):
    return parse(source, WEIGHT_VARIABLES)


@pytest.mark.parametrize(
    "source, t, r, expected",
    [
        pytest.param("t^2 - r^2", 2.0, 1.0, 3.0, id="arithmetic"),
        pytest.param("log(r/t)", 1.0, math.e, 1.0, id="log"),
        pytest.param("sqrt(abs(t-r))", 0.75, 1.0, 0.5, id="sqrt"),
        pytest.param("-2^2", 0.0, 1.0, -4.0, id="unary minus"),
        pytest.param("pow(t, 3) / e", 2.0, 1.0, 8 / math.e, id="pow"),
    ],
)
def test_evaluate_scalar(source, t, r, expected):
    value = evaluate(weight_expr(source), {"t": t, "r": r})
    assert isinstance(value, float)
    assert value == pytest.approx(expected, rel=1e-15)


def test_evaluate_vectorised():
    t = np.array([0.25, 0.5, 1.0])
    value = evaluate(weight_expr("log(r/t)"), {"t": t, "r": 1.0})
    np.testing.assert_allclose(value, np.log(1 / t))


@pytest.mark.parametrize(
    "source, t",
    [
        pytest.param("log(r/t)", 0.0, id="division"),
        pytest.param("log(t - r)", 0.5, id="log of negative"),
        pytest.param("sqrt(t - r)", 0.5, id="sqrt of negative"),
        pytest.param("t^-1", 0.0, id="zero to negative power"),
        pytest.param("(t - r)^0.5", 0.5, id="negative base"),
        pytest.param("exp(1000*t)", 1.0, id="overflow"),
    ],
)
def test_domain_errors(source, t):
    with pytest.raises(ExprEvaluationError):
        evaluate(weight_expr(source), {"t": t, "r": 1.0})


def test_error_names_subexpression():
    with pytest.raises(ExprEvaluationError) as error:
        evaluate(weight_expr("1 + log(t - r)"), {"t": 0.5, "r": 1.0})
    assert error.value.subexpression == "log((t - r))"


def test_any_bad_element_is_an_error():
    with pytest.raises(ExprEvaluationError):
        evaluate(
            weight_expr("log(t)"), {"t": np.array([1.0, 0.0]), "r": 1.0}
        )


def test_missing_binding():
    with pytest.raises(ExprEvaluationError, match="'r'"):
        evaluate(weight_expr("t + r"), {"t": 1.0})
