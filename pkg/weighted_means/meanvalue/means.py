"""
Spherical, volume and weighted means over balls, and the gradient from a
ball integral.

For m = 2, 3 the deterministic product rules are used; for m >= 4 every
mean switches to its Monte Carlo form (``Estimate.method == "mc"``).
"""

import logging
from typing import Optional

import numpy as np

from weighted_means.geometry.constants import sphere_area
from weighted_means.geometry.shapes import Ball, PointLike, as_array
from weighted_means.harmonic.functions import HarmonicFn
from weighted_means.quadrature.integrate import integrate_ball
from weighted_means.quadrature.montecarlo import (
    mc_integrate_ball,
    mc_sphere_mean,
    resolve_workers,
)
from weighted_means.quadrature.rules import (
    Estimate,
    RuleSettings,
    SphereRule,
    resolve_settings,
)
from weighted_means.weights.weights import Weight

# samples closer than this to the centre are dropped from singular
# Monte Carlo integrands
SINGULARITY_GUARD = 1e-12


def uses_product_rule(m: int) -> bool:
    return m in (2, 3)


def spherical_mean(
    u: HarmonicFn,
    x: PointLike,
    r: float,
    rule: Optional[SphereRule] = None,
    settings: Optional[RuleSettings] = None,
) -> Estimate:
    """
    Mean of u over the sphere S_r(x).

    Parameters
    ----------
    u : HarmonicFn
        Vectorised function.
    x : point-like
        Centre.
    r : float
        Radius.
    rule : SphereRule, optional
        Sphere rule (m = 2, 3); built from ``settings`` if None.
    settings : RuleSettings, optional
        Rule sizes and Monte Carlo settings.

    Returns
    -------
    Estimate
        Error is the change against the half rule, or the Monte Carlo
        standard error for m >= 4.
    """
    settings = resolve_settings(settings)
    x = as_array(x)
    m = x.size
    if not r > 0:
        raise ValueError(f"Radius must be positive, got {r}")

    if not uses_product_rule(m):
        return mc_sphere_mean(
            lambda directions: u(x + r * directions),
            m,
            settings.mc_n,
            settings.seed,
            settings,
        )

    rule = settings.sphere_rule(m) if rule is None else rule
    values = []
    for current in (rule, rule.half()):
        samples = np.asarray(u(x + r * current.nodes), dtype=np.float64)
        if not np.all(np.isfinite(samples)):
            raise ArithmeticError("Function is not finite on the sphere")
        values.append(current.integrate(samples) / sphere_area(m))
    return Estimate(
        values[0],
        abs(values[0] - values[1]),
        "product_rule",
        rule.n + rule.half().n,
    )


def ball_integral(
    g,
    ball: Ball,
    settings: Optional[RuleSettings] = None,
    radial_weight=None,
) -> Estimate:
    """
    Integral of g over a ball: product rule for m = 2, 3, Monte Carlo with
    samples uniform in the ball otherwise. ``radial_weight`` is a factor
    depending on the distance to the centre.
    """
    settings = resolve_settings(settings)
    m = ball.dim
    if uses_product_rule(m):
        return integrate_ball(
            g,
            ball,
            settings.sphere_rule(m),
            settings.radial_rule(ball.radius),
            radial_weight=radial_weight,
            workers=resolve_workers(settings),
        )

    center = ball.center.as_array()

    def weighted(points):
        values = np.asarray(g(points), dtype=np.float64)
        if radial_weight is None:
            return values
        distance = np.linalg.norm(points - center, axis=-1)
        near = distance < SINGULARITY_GUARD
        factor = radial_weight(np.where(near, 1.0, distance))
        return np.where(near, 0.0, values * factor)

    logging.debug(
        f"Monte Carlo ball integral over {ball} with {settings.mc_n} samples"
    )
    return mc_integrate_ball(
        weighted, ball, settings.mc_n, settings.seed, settings
    )


def volume_mean(
    u: HarmonicFn, ball: Ball, settings: Optional[RuleSettings] = None
) -> Estimate:
    """Mean of u over the ball, (1 / |B_r|) int_B u."""
    return ball_integral(u, ball, settings).scaled(1 / ball.volume)


def weighted_mean(
    u: HarmonicFn,
    ball: Ball,
    weight: Weight,
    settings: Optional[RuleSettings] = None,
) -> Estimate:
    """
    (1 / |B_r|) int_{B_r(x)} u(y) w(|x - y|, r) dy, without any leading
    factor.

    The weight only depends on the distance to the centre, so it is
    evaluated once per radial node.
    """
    if weight.dim != ball.dim:
        raise ValueError(
            f"Weight dimension {weight.dim} does not match ball dimension "
            f"{ball.dim}"
        )
    r = ball.radius
    if not uses_product_rule(ball.dim) and not weight.finite_variance:
        logging.warning(
            f"{weight.describe()} is not square integrable in R^{ball.dim}: "
            "the Monte Carlo standard error is unreliable"
        )

    def radial_weight(rho):
        return weight.value(rho, r)

    return ball_integral(u, ball, settings, radial_weight).scaled(
        1 / ball.volume
    )


def gradient_weighted(
    u: HarmonicFn,
    ball: Ball,
    i: int,
    settings: Optional[RuleSettings] = None,
) -> Estimate:
    """
    The i-th partial derivative of u at the ball centre from the integral

        (m / |B_r|) int_{B_r(x)} u(y) (y_i - x_i) / |x - y|^2 dy.

    Parameters
    ----------
    i : int
        Axis, 1-based, 1 <= i <= m.
    """
    m = ball.dim
    if not 1 <= i <= m:
        raise ValueError(f"Axis must lie in 1..{m}, got {i}")
    center = ball.center.as_array()

    def integrand(points):
        offsets = points - center
        squared = np.einsum("...i,...i->...", offsets, offsets)
        near = squared < SINGULARITY_GUARD**2
        kernel = offsets[..., i - 1] / np.where(near, 1.0, squared)
        return np.where(near, 0.0, np.asarray(u(points)) * kernel)

    return ball_integral(integrand, ball, settings).scaled(m / ball.volume)
