import pytest

from weighted_means.weights.validation import (
    TAIL_RATIO,
    dyadic_integrals,
    validate_weight,
)
from weighted_means.weights.weights import (
    CustomWeight,
    LogWeight,
    PowerWeight,
    RieszWeight,
)


@pytest.mark.parametrize(
    "weight",
    [
        pytest.param(LogWeight(2), id="log"),
        pytest.param(LogWeight(3), id="log 3D"),
        pytest.param(RieszWeight(3, alpha=0.5), id="riesz"),
        pytest.param(PowerWeight(2, beta=2.0), id="power"),
    ],
)
def test_admissible_weights_pass(weight):
    report = validate_weight(weight, 1.0)
    assert report.passed, report.to_dict()
    assert report.errors == []


def test_flipped_sign_fails():
    report = validate_weight(CustomWeight(3, source="t - r"), 1.0)
    assert not report.sign_below
    assert not report.sign_above
    assert report.zero_at_r
    assert report.integrable
    assert not report.passed
    assert report.to_dict()["passed"] is False


def test_non_integrable_weight_fails():
    report = validate_weight(CustomWeight(3, source="t^(-5)"), 1.0)
    assert not report.integrable
    assert report.tail_ratio > 1


def test_evaluation_errors_become_verdicts():
    # log(t - r) is undefined below r
    report = validate_weight(CustomWeight(2, source="log(t - r)"), 1.0)
    assert not report.sign_below
    assert not report.passed
    assert any(error.startswith("t < r") for error in report.errors)


def test_dimension_override():
    report = validate_weight(LogWeight(2), 2.0, m=4)
    assert report.m == 4
    assert report.passed


def test_dyadic_integrals_decay_for_log():
    integrals = dyadic_integrals(LogWeight(2), 1.0, levels=10)
    assert integrals.shape == (10,)
    ratios = integrals[1:] / integrals[:-1]
    assert ratios.max() < 0.5


def test_radius_must_be_positive():
    with pytest.raises(ValueError):
        validate_weight(LogWeight(2), 0.0)


def test_sine_weight_changes_sign_beyond_r():
    # sin(pi (r - t) / r) is positive again for 2r < t < 3r
    report = validate_weight(CustomWeight(2, source="sin(pi*(r-t)/r)"), 1.0)
    assert report.sign_below
    assert report.zero_at_r
    assert report.integrable
    assert not report.sign_above


def test_riesz_with_tiny_alpha_is_integrable():
    # dyadic ratio 2^(-alpha) sits above the heuristic threshold
    report = validate_weight(RieszWeight(3, alpha=1e-3), 1.0)
    assert report.tail_ratio > TAIL_RATIO
    assert report.integrable
    assert report.passed
