"""
Sampling checks of the conditions a weight must satisfy to characterise
balls: positive inside the ball, negative outside, zero on the sphere and
locally integrable at t = 0.

The integrability verdict for custom weights is a heuristic dyadic ratio
test. Built-in families are integrable by their parameter ranges; their
ratio is still reported.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np
from scipy.special import roots_legendre

from weighted_means.expr.evaluate import ExprEvaluationError
from weighted_means.weights.weights import Weight

SIGN_SAMPLES = 10_000
ZERO_TOLERANCE = 1e-12
DYADIC_LEVELS = 60
# levels at the small-t end used for the ratio test
TAIL_LEVELS = 20
TAIL_RATIO = 1 - 1e-3
GAUSS_POINTS = 16


@dataclass
class WeightValidityReport:
    """
    Verdicts of ``validate_weight`` and the numbers behind them.

    Attributes
    ----------
    weight : str
        Spec string of the weight.
    m : int
        Dimension.
    r : float
        Radius the weight was checked at.
    sign_below : bool
        w(t, r) > 0 at every sample t in (0, r).
    sign_above : bool
        w(t, r) < 0 at every sample t in (r, 4r).
    zero_at_r : bool
        |w(r, r)| <= 1e-12.
    integrable : bool
        Dyadic integrals of t^(m-1) |w| decay geometrically towards t = 0.
    """

    weight: str
    m: int
    r: float
    sign_below: bool = False
    sign_above: bool = False
    zero_at_r: bool = False
    integrable: bool = False
    min_below: Optional[float] = None
    max_above: Optional[float] = None
    value_at_r: Optional[float] = None
    tail_ratio: Optional[float] = None
    errors: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.sign_below
            and self.sign_above
            and self.zero_at_r
            and self.integrable
        )

    def to_dict(self):
        report = asdict(self)
        report["passed"] = self.passed
        return report


def dyadic_integrals(
    weight: Weight, r: float, levels: int = DYADIC_LEVELS
) -> np.ndarray:
    """
    I_k = int over [r 2^(-k-1), r 2^(-k)] of t^(m-1) |w(t, r)| dt for
    k = 1..levels, each with Gauss-Legendre on the interval.
    """
    x, w = roots_legendre(GAUSS_POINTS)
    k = np.arange(1, levels + 1)
    upper = r * 2.0 ** (-k)
    lower = upper / 2
    half = 0.5 * (upper - lower)
    t = (0.5 * (upper + lower))[:, None] + half[:, None] * x[None, :]
    with np.errstate(all="ignore"):
        integrand = t ** (weight.dim - 1) * np.abs(weight.value(t, r))
    return half * (integrand @ w)


def _sample(weight, t, r, report, label):
    try:
        with np.errstate(all="ignore"):
            values = np.asarray(weight.value(t, r), dtype=np.float64)
    except ExprEvaluationError as error:
        report.errors.append(f"{label}: {error}")
        return None
    if not np.all(np.isfinite(values)):
        report.errors.append(f"{label}: weight is not finite")
        return None
    return values


def validate_weight(
    weight: Weight, r: float, m: Optional[int] = None
) -> WeightValidityReport:
    """
    Check the sign, zero and integrability conditions of a weight.

    Parameters
    ----------
    weight : Weight
        The weight.
    r : float
        Radius, > 0.
    m : int, optional
        Dimension; the weight's own if None.

    Returns
    -------
    WeightValidityReport
        Failures are verdicts: evaluation errors fail the affected check and
        are listed in ``errors``.
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    if m is not None and m != weight.dim:
        weight = weight.with_dim(m)
    report = WeightValidityReport(weight.describe(), weight.dim, float(r))

    midpoints = (np.arange(SIGN_SAMPLES) + 0.5) / SIGN_SAMPLES
    below = _sample(weight, r * midpoints, r, report, "t < r")
    if below is not None:
        report.min_below = float(below.min())
        report.sign_below = bool(np.all(below > 0))

    above = _sample(weight, r + 3 * r * midpoints, r, report, "t > r")
    if above is not None:
        report.max_above = float(above.max())
        report.sign_above = bool(np.all(above < 0))

    at_r = _sample(weight, np.array([r]), r, report, "t = r")
    if at_r is not None:
        report.value_at_r = float(at_r[0])
        report.zero_at_r = bool(abs(at_r[0]) <= ZERO_TOLERANCE)

    try:
        integrals = dyadic_integrals(weight, r)
    except ExprEvaluationError as error:
        report.errors.append(f"integrability: {error}")
    else:
        report.integrable, report.tail_ratio = _ratio_test(integrals)
    if weight.closed_form:
        # the parameter ranges of the built-in families are integrable at 0
        report.integrable = True

    logging.debug(f"Weight validity for {report.weight}: {report.to_dict()}")
    return report


def _ratio_test(integrals: np.ndarray):
    if not np.all(np.isfinite(integrals)):
        return False, None
    tail = integrals[-TAIL_LEVELS - 1 :]
    if tail[0] == 0:
        return bool(np.all(tail == 0)), 0.0
    ratio = float((tail[-1] / tail[0]) ** (1.0 / TAIL_LEVELS))
    return ratio < TAIL_RATIO, ratio
