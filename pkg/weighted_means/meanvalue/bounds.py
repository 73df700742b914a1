"""
Sampled checks of the interior derivative estimates for harmonic functions

    max_{D'} |d_i u| <= (m / d) sup_D |u|,   d = dist(D', boundary of D),

and, for u >= 0 on D, |d_i u(x0)| <= (m / d0) u(x0) with d0 the distance
from x0 to the boundary of D.

The sup is approximated by samples on the boundary and in the interior of
D, so the check is one-sided: a sampled violation is a genuine failure.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from weighted_means.general.config import packaged_default
from weighted_means.geometry.shapes import Ball, PointLike, as_array
from weighted_means.harmonic.functions import HarmonicFn
from weighted_means.quadrature.montecarlo import uniform_directions


class ContainmentError(ValueError):
    """The inner ball is not compactly contained in the outer ball."""

    pass


@dataclass
class BoundReport:
    """
    Both derivative bound verdicts and the sampled quantities behind them.

    ``nonnegative_bound_holds`` is None when the sampled minimum of u over
    D is negative and the second bound does not apply.
    """

    function: str
    m: int
    outer: dict
    inner: dict
    n_samples: int
    seed: int
    distance: float
    max_gradient: float
    sup_abs: float
    bound: float
    bound_holds: bool
    min_value: float
    x0: list
    distance_x0: float
    gradient_x0: Optional[float] = None
    bound_x0: Optional[float] = None
    nonnegative_bound_holds: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return self.bound_holds and self.nonnegative_bound_holds is not False

    def to_dict(self):
        report = asdict(self)
        report["pass"] = self.passed
        return report


def sample_ball(
    rng: np.random.Generator, ball: Ball, n: int, surface: bool = False
) -> np.ndarray:
    """Uniform samples in a ball, or on its boundary sphere."""
    directions = uniform_directions(rng, ball.dim, n)
    if surface:
        radii = np.full(n, ball.radius)
    else:
        radii = ball.radius * rng.random(n) ** (1.0 / ball.dim)
    return ball.center.as_array() + radii[:, None] * directions


def derivative_bound_check(
    u: HarmonicFn,
    outer: Ball,
    inner: Ball,
    n_samples: Optional[int] = None,
    seed: int = 0,
    x0: Optional[PointLike] = None,
) -> BoundReport:
    """
    Check both derivative bounds on sampled points.

    Parameters
    ----------
    u : HarmonicFn
        Function harmonic on a neighbourhood of the closed outer ball.
    outer : Ball
        D.
    inner : Ball
        D', with closure inside D. Need not be concentric.
    n_samples : int, optional
        Samples per region (interior and boundary of each ball). Packaged
        default if None.
    seed : int
        Seed for the samples.
    x0 : point-like, optional
        Point for the nonnegative case; the centre of D if None.

    Returns
    -------
    BoundReport

    Raises
    ------
    ContainmentError
        If the closure of D' is not inside D, or x0 is not in D.
    """
    if not inner.closure_within(outer):
        raise ContainmentError(
            f"{inner} is not compactly contained in {outer}"
        )
    if n_samples is None:
        n_samples = packaged_default("bounds", "samples", int)
    m = outer.dim
    rng = np.random.default_rng(seed)
    distance = inner.separation_from_boundary(outer)

    inner_points = np.concatenate(
        [
            sample_ball(rng, inner, n_samples),
            sample_ball(rng, inner, n_samples, surface=True),
        ]
    )
    max_gradient = float(np.max(np.abs(u.gradient(inner_points))))

    outer_points = np.concatenate(
        [
            sample_ball(rng, outer, n_samples, surface=True),
            sample_ball(rng, outer, n_samples),
        ]
    )
    values = np.asarray(u(outer_points))
    sup_abs = float(np.max(np.abs(values)))
    bound = m / distance * sup_abs

    x0 = outer.center.as_array() if x0 is None else as_array(x0)
    distance_x0 = outer.distance_to_boundary(x0)
    if not distance_x0 > 0:
        raise ContainmentError(f"x0 = {x0.tolist()} is not inside {outer}")

    report = BoundReport(
        function=u.describe(),
        m=m,
        outer=outer.to_dict(),
        inner=inner.to_dict(),
        n_samples=n_samples,
        seed=seed,
        distance=distance,
        max_gradient=max_gradient,
        sup_abs=sup_abs,
        bound=bound,
        bound_holds=max_gradient <= bound,
        min_value=float(values.min()),
        x0=x0.tolist(),
        distance_x0=distance_x0,
    )
    if report.min_value >= 0:
        value_x0 = float(u(x0[None, :])[0])
        report.gradient_x0 = float(np.max(np.abs(u.gradient(x0[None, :]))))
        report.bound_x0 = m / distance_x0 * value_x0
        report.nonnegative_bound_holds = report.gradient_x0 <= report.bound_x0

    logging.debug(
        f"Derivative bounds for {report.function}: {max_gradient:.6g} <= "
        f"{bound:.6g} is {report.bound_holds}"
    )
    return report
