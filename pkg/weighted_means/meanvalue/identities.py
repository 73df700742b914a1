"""
Verifiers of the mean value identities for harmonic functions over balls.

Each verifier compares an analytic side ("claimed") with a computed
integral side and returns an ``IdentityReport``. A failed check is a
verdict in the report, never an exception.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import pandas as pd
from tqdm import tqdm

from weighted_means.general.config import packaged_default
from weighted_means.geometry.shapes import Ball
from weighted_means.harmonic.functions import (
    HarmonicFn,
    evaluate,
    gradient_analytic,
)
from weighted_means.meanvalue.means import (
    gradient_weighted,
    spherical_mean,
    volume_mean,
    weighted_mean,
)
from weighted_means.quadrature.rules import (
    Estimate,
    RuleSettings,
    resolve_settings,
)
from weighted_means.weights.validation import validate_weight
from weighted_means.weights.weights import (
    Weight,
    WeightDivergenceError,
    numeric_mean_constant,
)

# Monte Carlo checks pass within this many standard errors
MC_BAND = 3.0

IDENTITIES = ("spherical", "volume", "weighted", "gradient")


@dataclass
class IdentityReport:
    """
    Outcome of one identity check.

    Attributes
    ----------
    identity : str
        Which identity was checked.
    claimed : float
        Analytic side.
    computed : Estimate
        Integral side.
    tolerance : float
        The pass threshold used.
    metadata : dict
        Function, ball, weight and rule sizes.
    """

    identity: str
    claimed: float
    computed: Estimate
    tolerance: float
    metadata: dict = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return abs(self.claimed - self.computed.value)

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def to_dict(self):
        return {
            "identity": self.identity,
            "claimed": self.claimed,
            "computed": self.computed.to_dict(),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            **self.metadata,
        }


def _tolerance(tol: Optional[float], estimate: Estimate, key: str) -> float:
    """
    Explicit tolerance if given, otherwise the packaged default for
    deterministic rules and a standard error band for Monte Carlo.
    """
    if tol is not None:
        return tol
    if estimate.method == "mc":
        return MC_BAND * estimate.error
    return packaged_default("tolerances", key)


def _metadata(u, ball, settings, weight=None):
    metadata = {
        "function": u.describe(),
        "m": ball.dim,
        "ball": ball.to_dict(),
        "rules": _rule_sizes(ball.dim, settings),
    }
    if weight is not None:
        metadata["weight"] = weight.describe()
    return metadata


def _rule_sizes(m, settings):
    if m == 2:
        return {"sphere_n": settings.sphere_n, **_radial_sizes(settings)}
    if m == 3:
        return {
            "sphere_polar": settings.sphere_polar,
            "sphere_azimuth": settings.sphere_azimuth,
            **_radial_sizes(settings),
        }
    return {"mc_n": settings.mc_n, "seed": settings.seed}


def _radial_sizes(settings):
    return {
        "radial_panels": settings.radial_panels,
        "radial_nodes": settings.radial_nodes,
        "grading_ratio": settings.grading_ratio,
    }


def verify_spherical_mean(
    u: HarmonicFn,
    ball: Ball,
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
) -> IdentityReport:
    """The spherical mean of u over S_r(x) equals u(x)."""
    settings = resolve_settings(settings)
    center = ball.center.as_array()
    computed = spherical_mean(u, center, ball.radius, settings=settings)
    return IdentityReport(
        "spherical",
        evaluate(u, center),
        computed,
        _tolerance(tol, computed, "identity"),
        _metadata(u, ball, settings),
    )


def verify_volume_mean(
    u: HarmonicFn,
    ball: Ball,
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
) -> IdentityReport:
    """The volume mean of u over B_r(x) equals u(x)."""
    settings = resolve_settings(settings)
    computed = volume_mean(u, ball, settings)
    return IdentityReport(
        "volume",
        evaluate(u, ball.center),
        computed,
        _tolerance(tol, computed, "identity"),
        _metadata(u, ball, settings),
    )


def verify_identity(
    u: HarmonicFn,
    ball: Ball,
    weight: Weight,
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
) -> IdentityReport:
    """
    Weighted mean value identity

        (1 / |B_r|) int_{B_r(x)} u(y) w(|x - y|, r) dy = c_w(r) u(x)

    with the closed-form mean constant c_w. For the log weight, c_w = 1/m,
    so multiplying by m gives u(x) itself.

    Parameters
    ----------
    u : HarmonicFn
        Function harmonic on a neighbourhood of the closed ball.
    ball : Ball
        Admissible ball.
    weight : Weight
        Built-in or custom weight.
    settings : RuleSettings, optional
        Rule sizes and Monte Carlo settings.
    tol : float, optional
        Pass threshold on |claimed - computed|. Defaults to 1e-8 for the
        product rules and 3 standard errors for Monte Carlo.

    Returns
    -------
    IdentityReport
    """
    settings = resolve_settings(settings)
    mean_constant = weight.mean_constant(ball.radius, settings)
    computed = weighted_mean(u, ball, weight, settings)
    metadata = _metadata(u, ball, settings, weight)
    metadata["mean_constant"] = mean_constant
    return IdentityReport(
        "weighted",
        mean_constant * evaluate(u, ball.center),
        computed,
        _tolerance(tol, computed, "identity"),
        metadata,
    )


def verify_gradient(
    u: HarmonicFn,
    ball: Ball,
    i: int,
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
) -> IdentityReport:
    """The gradient integral reproduces the exact partial derivative."""
    settings = resolve_settings(settings)
    computed = gradient_weighted(u, ball, i, settings)
    metadata = _metadata(u, ball, settings)
    metadata["axis"] = i
    return IdentityReport(
        "gradient",
        gradient_analytic(u, ball.center).coords[i - 1],
        computed,
        _tolerance(tol, computed, "identity"),
        metadata,
    )


def conjecture_probe(
    u: HarmonicFn,
    ball: Ball,
    weight: Weight,
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
) -> IdentityReport:
    """
    Test whether a (custom) weight yields a mean value identity, with the
    mean constant from the numeric radial primitive. The residual is
    experimental evidence only.

    Raises
    ------
    WeightDivergenceError
        If the weight fails the integrability check.
    """
    settings = resolve_settings(settings)
    validity = validate_weight(weight, ball.radius)
    if not validity.integrable:
        raise WeightDivergenceError(
            f"{weight.describe()} is not integrable at t = 0 in "
            f"R^{weight.dim}: {validity.errors or validity.tail_ratio}"
        )
    mean_constant = numeric_mean_constant(weight, ball.radius, settings)
    computed = weighted_mean(u, ball, weight, settings)
    metadata = _metadata(u, ball, settings, weight)
    metadata["mean_constant"] = mean_constant.value
    metadata["sign_conditions"] = (
        validity.sign_below and validity.sign_above and validity.zero_at_r
    )
    return IdentityReport(
        "probe",
        mean_constant.value * evaluate(u, ball.center),
        computed,
        _tolerance(tol, computed, "probe"),
        metadata,
    )


def run_identity_suite(
    functions: Sequence[HarmonicFn],
    balls: Sequence[Ball],
    weights: Iterable[Optional[Weight]] = (None,),
    identities: Sequence[str] = ("weighted",),
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
    progress: bool = False,
) -> pd.DataFrame:
    """
    Run identity checks over every (function, ball) pair.

    The ``weighted`` identity is checked once per weight; the other
    identities once per pair (axis 1..m for ``gradient``).

    Returns
    -------
    pd.DataFrame
        One row per report, with the columns of ``IdentityReport.to_dict``
        and the computed estimate flattened into ``value``, ``error``,
        ``method`` and ``n_evals``.
    """
    unknown = set(identities) - set(IDENTITIES)
    if unknown:
        raise ValueError(f"Unknown identities: {sorted(unknown)}")
    weights = [w for w in weights if w is not None]
    cases = [(u, b) for u in functions for b in balls]
    rows = []
    for u, ball in tqdm(cases, disable=not progress):
        reports = []
        if "spherical" in identities:
            reports.append(verify_spherical_mean(u, ball, settings, tol))
        if "volume" in identities:
            reports.append(verify_volume_mean(u, ball, settings, tol))
        if "weighted" in identities:
            reports += [
                verify_identity(u, ball, w, settings, tol) for w in weights
            ]
        if "gradient" in identities:
            reports += [
                verify_gradient(u, ball, i, settings, tol)
                for i in range(1, ball.dim + 1)
            ]
        for report in reports:
            row = report.to_dict()
            row.update(row.pop("computed"))
            rows.append(row)
    logging.debug(f"Identity suite: {len(rows)} reports")
    return pd.DataFrame(rows)
