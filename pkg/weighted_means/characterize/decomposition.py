"""
Monte Carlo view of the regions behind the ball characterisation:

    G_i = D minus the closed ball,   G_e = the ball minus the closed D.

Since w(|x - y|, r) < 0 outside the ball and > 0 inside it, the integral
of w over G_i is nonpositive and over G_e nonnegative. With
int_D w = |D| Phi and int_B w = |B| c_w,

    (|D| - |B|) c_w - (int_{G_i} w - int_{G_e} w) = |D| delta,

so the gap between the two sides is the deficiency scaled by |D|.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from weighted_means.characterize.functional import (
    SINGULARITY_GUARD,
    PointOutsideDomainError,
)
from weighted_means.geometry.domains import Domain, StarDomain
from weighted_means.geometry.shapes import Ball
from weighted_means.quadrature.montecarlo import (
    MIN_SAMPLES,
    bbox_volume,
    run_chunked,
    uniform_in_bbox,
)
from weighted_means.quadrature.rules import (
    Estimate,
    RuleSettings,
    resolve_settings,
)
from weighted_means.quadrature.summation import chunk_moments, merge_moments
from weighted_means.weights.weights import Weight

# standard errors allowed in the sign and consistency verdicts
BAND = 3.0

# per-sample columns, integrated over the sampling box
COLUMNS = (
    "volume_gi",
    "volume_ge",
    "integral_gi",
    "integral_ge",
    "volume_domain",
    "integral_domain",
    "integral_ball",
    "gap",
)


@dataclass
class DecompositionReport:
    """
    Region estimates and verdicts.

    Attributes
    ----------
    estimates : dict
        Monte Carlo Estimate per quantity: |G_i|, |G_e|, int_{G_i} w,
        int_{G_e} w, |D|, int_D w, int_B w and the gap.
    c_w : float
        Mean constant at the ball radius.
    ball_volume : float
        |B_r|, exact.
    lhs, rhs : float
        (|D| - |B|) c_w and int_{G_i} w - int_{G_e} w.
    consistency_residual : float
        Monte Carlo int_B w minus the exact |B| c_w.
    consistency_error : float
        Standard error of the Monte Carlo int_B w.
    empty_regions : list of str
        Regions no sample fell in ("G_i", "G_e").

    The gap lhs - rhs equals |D| times the deficiency, so
    ``identity_holds`` is the ball verdict of the decomposition.
    """

    weight: str
    ball: dict
    n: int
    seed: int
    estimates: dict
    c_w: float
    ball_volume: float
    lhs: float
    rhs: float
    consistency_residual: float
    consistency_error: float
    empty_regions: List[str] = field(default_factory=list)

    @property
    def inner_sign_ok(self) -> bool:
        integral = self.estimates["integral_gi"]
        return integral.value <= BAND * integral.error

    @property
    def outer_sign_ok(self) -> bool:
        integral = self.estimates["integral_ge"]
        return integral.value >= -BAND * integral.error

    @property
    def consistent(self) -> bool:
        return abs(self.consistency_residual) <= max(
            BAND * self.consistency_error, 1e-12 * self.ball_volume
        )

    @property
    def gap(self) -> Estimate:
        return self.estimates["gap"]

    @property
    def identity_holds(self) -> bool:
        """lhs = rhs within the band, which happens only when D is the ball."""
        return abs(self.gap.value) <= max(
            BAND * self.gap.error,
            1e-12 * self.ball_volume * max(1.0, abs(self.c_w)),
        )

    @property
    def passed(self) -> bool:
        return self.inner_sign_ok and self.outer_sign_ok and self.consistent

    def to_dict(self):
        return {
            "weight": self.weight,
            "ball": self.ball,
            "n": self.n,
            "seed": self.seed,
            **{k: e.to_dict() for k, e in self.estimates.items()},
            "c_w": self.c_w,
            "ball_volume": self.ball_volume,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "consistency_residual": self.consistency_residual,
            "consistency_error": self.consistency_error,
            "empty_regions": self.empty_regions,
            "inner_sign_ok": self.inner_sign_ok,
            "outer_sign_ok": self.outer_sign_ok,
            "consistent": self.consistent,
            "identity_holds": self.identity_holds,
            "pass": self.passed,
        }


def _union_bbox(domain: Domain, ball: Ball) -> np.ndarray:
    lower = np.minimum(domain.bbox[:, 0], ball.bbox[:, 0])
    upper = np.maximum(domain.bbox[:, 1], ball.bbox[:, 1])
    return np.stack([lower, upper], axis=1)


def proof_decomposition(
    domain: Domain,
    ball: Ball,
    weight: Weight,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    settings: Optional[RuleSettings] = None,
) -> DecompositionReport:
    """
    Monte Carlo estimates of the region volumes and weight integrals.

    Parameters
    ----------
    domain : ImplicitDomain or StarDomain
        D, used through its indicator.
    ball : Ball
        B_r(x) with x in D.
    weight : Weight
        Weight w(t, r) of the same dimension.
    n : int, optional
        Samples in the union of the bounding boxes.
    seed : int, optional
        Base seed.

    Returns
    -------
    DecompositionReport

    Raises
    ------
    PointOutsideDomainError
        If the ball centre is not in D.
    """
    settings = resolve_settings(settings)
    n = settings.mc_n if n is None else n
    seed = settings.seed if seed is None else seed
    if n < MIN_SAMPLES:
        raise ValueError(f"Need at least {MIN_SAMPLES} samples, got {n}")
    if isinstance(domain, StarDomain):
        domain = domain.as_implicit()
    center = ball.center.as_array()
    if not domain.contains(center[None, :])[0]:
        raise PointOutsideDomainError(f"Ball centre {ball.center} is not in D")

    r = ball.radius
    c_w = weight.mean_constant(r, settings)
    box = _union_bbox(domain, ball)

    def chunk(rng, size):
        points = uniform_in_bbox(rng, box, size)
        distance = np.linalg.norm(points - center, axis=-1)
        in_domain = domain.contains(points)
        in_ball = distance < r
        in_gi = in_domain & (distance > r)
        in_ge = in_ball & ~in_domain
        w = np.zeros(size)
        safe = distance >= SINGULARITY_GUARD
        w[safe] = weight.value(distance[safe], r)
        columns = (
            in_gi,
            in_ge,
            w * in_gi,
            w * in_ge,
            in_domain,
            w * in_domain,
            w * in_ball,
            c_w * in_domain - c_w * in_ball - w * in_gi + w * in_ge,
        )
        hits = (int(in_gi.sum()), int(in_ge.sum()))
        moments = [
            chunk_moments(np.asarray(c, dtype=np.float64)) for c in columns
        ]
        return hits, moments

    results = run_chunked(n, seed, chunk, settings)
    box_volume = bbox_volume(box)
    estimates = {}
    for j, name in enumerate(COLUMNS):
        count, mean, m2 = merge_moments([res[1][j] for res in results])
        error = box_volume * math.sqrt(m2 / (count - 1) / count)
        estimates[name] = Estimate(box_volume * mean, error, "mc", n)

    empty = [
        region
        for region, k in (("G_i", 0), ("G_e", 1))
        if sum(res[0][k] for res in results) == 0
    ]
    if empty:
        logging.debug(f"Empty regions: {', '.join(empty)}")

    exact_ball = ball.volume * c_w
    report = DecompositionReport(
        weight=weight.describe(),
        ball=ball.to_dict(),
        n=n,
        seed=seed,
        estimates=estimates,
        c_w=c_w,
        ball_volume=ball.volume,
        lhs=(estimates["volume_domain"].value - ball.volume) * c_w,
        rhs=estimates["integral_gi"].value - estimates["integral_ge"].value,
        consistency_residual=estimates["integral_ball"].value - exact_ball,
        consistency_error=estimates["integral_ball"].error,
        empty_regions=empty,
    )
    logging.debug(
        f"Decomposition: lhs {report.lhs:.6g}, rhs {report.rhs:.6g}, gap "
        f"{report.gap.value:.6g} +/- {report.gap.error:.2g}"
    )
    return report
