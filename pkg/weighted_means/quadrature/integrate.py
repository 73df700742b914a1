"""
Deterministic product-rule integration: graded radial rules and the polar
factorisation of ball integrals.

Integrands are vectorised: a radial integrand maps an array of radii to an
array of values, a ball integrand maps points of shape (..., m) to values of
shape (...).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from weighted_means.geometry.shapes import Ball
from weighted_means.quadrature.rules import (
    Estimate,
    RadialPanelRule,
    SphereRule,
)
from weighted_means.quadrature.summation import (
    compensated_row_sums,
    compensated_sum,
)

RadialIntegrand = Callable[[np.ndarray], np.ndarray]
PointIntegrand = Callable[[np.ndarray], np.ndarray]

# points evaluated per block of directions
BLOCK_POINTS = 2**20


class EvaluationFailure(ArithmeticError):
    """
    Raised when an integrand is not finite at a quadrature node.

    Attributes
    ----------
    radius : float
        Distance from the integration centre of the offending node.
    """

    def __init__(self, message, radius):
        super().__init__(message)
        self.radius = radius


def _evaluate_radial(f: RadialIntegrand, rule: RadialPanelRule) -> np.ndarray:
    values = np.asarray(f(rule.nodes), dtype=np.float64)
    values = np.broadcast_to(values, rule.nodes.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        radius = float(rule.nodes[np.argmax(bad)])
        raise EvaluationFailure(
            f"Integrand is not finite at radius {radius:.6g}", radius
        )
    return values


def radial_integrate(f: RadialIntegrand, rule: RadialPanelRule) -> Estimate:
    """
    Integrate f over (0, r] with a graded panel rule.

    The error field is |I - I_half| where I_half uses half the Gauss points
    per panel; a heuristic, not a bound.

    Parameters
    ----------
    f : callable
        Vectorised integrand of the radius. May be singular at 0 only.
    rule : RadialPanelRule
        The radial rule.

    Returns
    -------
    Estimate

    Raises
    ------
    EvaluationFailure
        If f is not finite at a node.
    """
    half = rule.half()
    value = compensated_sum(rule.weights * _evaluate_radial(f, rule))
    value_half = compensated_sum(half.weights * _evaluate_radial(f, half))
    return Estimate(
        value,
        abs(value - value_half),
        "product_rule",
        len(rule.nodes) + len(half.nodes),
    )


def radial_panel_sums(
    f: RadialIntegrand, rule: RadialPanelRule
) -> np.ndarray:
    """Contribution of each panel, outermost first."""
    values = rule.weights * _evaluate_radial(f, rule)
    return compensated_row_sums(
        values.reshape(rule.n_panels, rule.nodes_per_panel)
    )


def _direction_integrals(
    g: PointIntegrand,
    center: np.ndarray,
    directions: np.ndarray,
    rule: RadialPanelRule,
    radial_factor: np.ndarray,
    workers: int,
) -> np.ndarray:
    rho = rule.nodes
    block = max(1, BLOCK_POINTS // len(rho))
    starts = range(0, len(directions), block)

    def integrate_block(start):
        dirs = directions[start : start + block]
        points = center + rho[None, :, None] * dirs[:, None, :]
        values = np.asarray(g(points), dtype=np.float64)
        bad = ~np.isfinite(values)
        if bad.any():
            i, j = np.unravel_index(np.argmax(bad), bad.shape)
            raise EvaluationFailure(
                f"Integrand is not finite at radius {rho[j]:.6g} in "
                f"direction {np.round(dirs[i], 6).tolist()}",
                float(rho[j]),
            )
        return compensated_row_sums(values * radial_factor[None, :])

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            blocks = list(executor.map(integrate_block, starts))
    else:
        blocks = [integrate_block(start) for start in starts]
    return np.concatenate(blocks)


def integrate_ball(
    g: PointIntegrand,
    ball: Ball,
    sphere: SphereRule,
    radial: RadialPanelRule,
    radial_weight: Optional[RadialIntegrand] = None,
    workers: int = 1,
) -> Estimate:
    """
    Integrate g over a ball by the polar factorisation

        sum_theta w_theta int_0^r rho^(m-1) k(rho) g(x + rho theta) d rho,

    where k is the optional ``radial_weight`` (1 if None).

    Parameters
    ----------
    g : callable
        Vectorised integrand on points of shape (..., m).
    ball : Ball
        Integration ball. The radial rule is rescaled to its radius.
    sphere : SphereRule
        Rule on the unit sphere of the ball's dimension.
    radial : RadialPanelRule
        Radial rule; only its grading and node counts are used.
    radial_weight : callable, optional
        Factor depending on rho only, evaluated once per radial node.
    workers : int
        Threads for fanning out over blocks of directions. The reduction
        order is fixed, so the result does not depend on this.

    Returns
    -------
    Estimate
        Error is the change when halving the Gauss points per panel.

    Raises
    ------
    EvaluationFailure
        If g (or the radial weight) is not finite at a node.
    """
    m = ball.dim
    if sphere.dim != m:
        raise ValueError(
            f"Sphere rule dimension {sphere.dim} does not match ball "
            f"dimension {m}"
        )
    if radial.r != ball.radius:
        radial = radial.rescaled(ball.radius)
    center = ball.center.as_array()

    totals = []
    n_evals = 0
    for rule in (radial, radial.half()):
        factor = rule.weights * rule.nodes ** (m - 1)
        if radial_weight is not None:
            factor = factor * _evaluate_radial(radial_weight, rule)
        per_direction = _direction_integrals(
            g, center, sphere.nodes, rule, factor, workers
        )
        totals.append(sphere.integrate(per_direction))
        n_evals += sphere.n * len(rule.nodes)

    logging.debug(
        f"Ball integral over {ball}: {sphere.n} directions x "
        f"{len(radial.nodes)} radial nodes"
    )
    return Estimate(
        totals[0], abs(totals[0] - totals[1]), "product_rule", n_evals
    )
