"""
The averaged-weight functional

    Phi_w(D, x, r) = (1 / |D|) int_D w(|x - y|, r) dy

and the deficiency c_w(r) - Phi_w(D, x, r), which vanishes for D = B_r(x)
and is positive for any other domain with |D| >= |B_r|.

Star path: for a domain star-shaped about x with boundary rho(theta),
int_D w = int over the sphere of W(rho(theta)), with W the radial
primitive of the weight, so only a sphere rule is needed. Monte Carlo
path: uniform samples in the bounding box, hit-filtered by the indicator.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from weighted_means.general.config import packaged_default
from weighted_means.geometry.constants import ball_volume, sphere_area
from weighted_means.geometry.domains import (
    Domain,
    ImplicitDomain,
    RaytracedBoundary,
    StarDomain,
    ray_exit_radii,
    star_volume,
)
from weighted_means.geometry.shapes import Point, PointLike, as_array
from weighted_means.quadrature.montecarlo import (
    MIN_SAMPLES,
    EmptyDomainError,
    bbox_volume,
    run_chunked,
    uniform_in_bbox,
)
from weighted_means.quadrature.rules import (
    Estimate,
    RuleSettings,
    resolve_settings,
)
from weighted_means.quadrature.summation import (
    chunk_moments,
    compensated_sum,
    merge_moments,
)
from weighted_means.weights.weights import Weight

METHODS = ("auto", "star", "mc")

# Monte Carlo samples this close to x are rejected
SINGULARITY_GUARD = 1e-12


class PointOutsideDomainError(ValueError):
    """The evaluation point x is not inside the domain."""

    pass


class AnchorMismatchError(ValueError):
    """The star path was requested at a point other than the anchor."""

    pass


@dataclass(frozen=True)
class FunctionalParts:
    """Phi together with the volume it was normalised by."""

    phi: Estimate
    volume: Estimate
    path: str


def _check_inside(domain: Domain, x: np.ndarray):
    if not domain.contains(x[None, :])[0]:
        raise PointOutsideDomainError(
            f"x = {Point(tuple(x))} is not inside the domain"
        )


def _star_parts(
    domain: StarDomain,
    x: np.ndarray,
    r: float,
    weight: Weight,
    settings: RuleSettings,
    traced: bool,
) -> Optional[FunctionalParts]:
    rule = settings.sphere_rule(domain.dim)
    m = domain.dim
    results = []
    for current in (rule, rule.half()):
        if traced:
            rho = ray_exit_radii(domain, x, current.nodes)
            if rho is None:
                return None
        else:
            rho = domain.radius(current.nodes)
        primitives = weight.radial_primitives(rho, r, settings)
        integral = compensated_sum(current.weights * primitives)
        volume = compensated_sum(current.weights * rho**m) / m
        results.append((integral / volume, volume))

    (phi, volume), (phi_half, volume_half) = results
    n_evals = rule.n + rule.half().n
    return FunctionalParts(
        Estimate(phi, abs(phi - phi_half), "product_rule", n_evals),
        Estimate(volume, abs(volume - volume_half), "product_rule", n_evals),
        "traced" if traced else "star",
    )


def mc_functional_parts(
    domain: Domain,
    x: np.ndarray,
    r: float,
    weight: Weight,
    n: int,
    seed,
    settings: Optional[RuleSettings] = None,
) -> FunctionalParts:
    """
    Monte Carlo Phi as the mean of w over the samples that hit D, with the
    hit fraction giving |D|.

    Raises
    ------
    EmptyDomainError
        If no sample hits the domain.
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"Need at least {MIN_SAMPLES} samples, got {n}")
    if isinstance(domain, StarDomain):
        domain = domain.as_implicit()
    if not weight.finite_variance:
        logging.warning(
            f"{weight.describe()} is not square integrable in "
            f"R^{weight.dim}: the Monte Carlo standard error is unreliable"
        )
    bbox = domain.bbox

    def chunk(rng, size):
        points = uniform_in_bbox(rng, bbox, size)
        distance = np.linalg.norm(points - x, axis=-1)
        hit = domain.contains(points) & (distance >= SINGULARITY_GUARD)
        values = np.asarray(weight.value(distance[hit], r), dtype=np.float64)
        return chunk_moments(values), chunk_moments(hit.astype(np.float64))

    results = run_chunked(n, seed, chunk, settings)
    hits, mean, m2 = merge_moments([c[0] for c in results])
    if hits == 0:
        raise EmptyDomainError("domain not detected in bbox")
    variance = m2 / (hits - 1) if hits > 1 else 0.0
    phi = Estimate(mean, math.sqrt(variance / hits), "mc", n)

    count, fraction, m2_hit = merge_moments([c[1] for c in results])
    box = bbox_volume(bbox)
    volume = Estimate(
        box * fraction,
        box * math.sqrt(m2_hit / (count - 1) / count),
        "mc",
        n,
    )
    logging.debug(
        f"Monte Carlo functional: {hits}/{n} hits, phi = {phi.value:.10g} "
        f"+/- {phi.error:.2g}"
    )
    return FunctionalParts(phi, volume, "mc")


def functional_parts(
    domain: Domain,
    x: PointLike,
    r: float,
    weight: Weight,
    method: str = "auto",
    settings: Optional[RuleSettings] = None,
    seed=None,
    n: Optional[int] = None,
) -> FunctionalParts:
    """
    Phi_w(D, x, r), the volume of D and which path computed them.

    ``auto`` uses the star path at the anchor of a star domain, the star
    path with ray-traced radii elsewhere when D is star-shaped about x,
    and Monte Carlo otherwise (always for implicit domains). ``seed`` and
    ``n`` override the Monte Carlo settings.
    """
    if method not in METHODS:
        raise ValueError(f"Unknown method {method!r}, expected {METHODS}")
    settings = resolve_settings(settings)
    x = as_array(x)
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    if weight.dim != x.size or x.size != domain.dim:
        raise ValueError("Domain, point and weight dimensions differ")
    _check_inside(domain, x)

    if method != "mc" and isinstance(domain, StarDomain):
        at_anchor = np.array_equal(x, domain.anchor.as_array())
        if method == "star" and not at_anchor:
            raise AnchorMismatchError(
                f"Star path needs x at the anchor {domain.anchor}, got "
                f"{Point(tuple(x))}"
            )
        parts = _star_parts(
            domain, x, r, weight, settings, traced=not at_anchor
        )
        if parts is not None:
            return parts
        logging.debug("Falling back to Monte Carlo for the functional")
    elif method == "star":
        raise AnchorMismatchError("Star path needs a star domain")

    return mc_functional_parts(
        domain,
        x,
        r,
        weight,
        settings.mc_n if n is None else n,
        settings.seed if seed is None else seed,
        settings,
    )


def functional(
    domain: Domain,
    x: PointLike,
    r: float,
    weight: Weight,
    method: str = "auto",
    settings: Optional[RuleSettings] = None,
) -> Estimate:
    """
    Phi_w(D, x, r) = (1 / |D|) int_D w(|x - y|, r) dy.

    Parameters
    ----------
    domain : StarDomain or ImplicitDomain
        Bounded domain.
    x : point-like
        Point inside D.
    r : float
        Weight radius.
    weight : Weight
        Radial weight of the same dimension.
    method : str
        "auto", "star" (x must be the anchor of a star domain) or "mc".
    settings : RuleSettings, optional
        Rule sizes and Monte Carlo settings.

    Returns
    -------
    Estimate

    Raises
    ------
    PointOutsideDomainError
        If x is not in D.
    AnchorMismatchError
        If the star path is requested away from the anchor.
    """
    return functional_parts(domain, x, r, weight, method, settings).phi


def reanchor(domain: StarDomain, x: PointLike) -> StarDomain:
    """
    The same domain as a star domain anchored at x, with the boundary found
    by ray tracing.

    Raises
    ------
    DomainConstructionError
        If the domain is not star-shaped about x.
    """
    x = as_array(x)
    _check_inside(domain, x)
    return StarDomain(
        domain.dim, Point(tuple(x)), RaytracedBoundary(domain, tuple(x))
    )


def domain_volume(
    domain: Domain, settings: Optional[RuleSettings] = None
) -> Estimate:
    """|D|: sphere rule for star domains, Monte Carlo for implicit ones."""
    settings = resolve_settings(settings)
    if isinstance(domain, StarDomain):
        volume = star_volume(domain, settings)
        rule = settings.sphere_rule(domain.dim).half()
        rho = domain.radius(rule.nodes)
        volume_half = compensated_sum(rule.weights * rho**domain.dim)
        volume_half /= domain.dim
        return Estimate(
            volume, abs(volume - volume_half), "product_rule", 3 * rule.n
        )
    return mc_volume(domain, settings.mc_n, settings.seed, settings)


def mc_volume(
    domain: ImplicitDomain, n: int, seed, settings: Optional[RuleSettings]
) -> Estimate:
    bbox = domain.bbox

    def chunk(rng, size):
        hit = domain.contains(uniform_in_bbox(rng, bbox, size))
        return chunk_moments(hit.astype(np.float64))

    count, mean, m2 = merge_moments(run_chunked(n, seed, chunk, settings))
    if mean == 0:
        raise EmptyDomainError("domain not detected in bbox")
    box = bbox_volume(bbox)
    return Estimate(
        box * mean, box * math.sqrt(m2 / (count - 1) / count), "mc", n
    )


def matched_radius(
    domain: Domain, settings: Optional[RuleSettings] = None
) -> float:
    """The radius r with |B_r| = |D|, (m |D| / omega_m)^(1/m)."""
    m = domain.dim
    volume = domain_volume(domain, settings).value
    return (m * volume / sphere_area(m)) ** (1.0 / m)


@dataclass(frozen=True)
class Deficiency:
    """
    delta = c_w(r) - Phi_w(D, x, r).

    Attributes
    ----------
    value : float
        The deficiency.
    phi : Estimate
        The functional.
    c_w : float
        Mean constant of the weight at r.
    domain_volume : float
        |D| as used to normalise Phi.
    r : float
        Weight radius.
    volume_condition_ok : bool
        |D| >= |B_r|, within the volume estimate's error.
    is_ball : bool or None
        delta <= max(tol, 3 * phi.error); None when the volume condition
        fails and no verdict can be drawn.
    """

    value: float
    phi: Estimate
    c_w: float
    domain_volume: float
    r: float
    volume_condition_ok: bool
    is_ball: Optional[bool]
    tolerance: float
    x: Tuple[float, ...] = ()
    path: str = ""
    weight: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        """delta in units of the functional's error estimate."""
        if self.phi.error == 0:
            return math.inf if self.value > 0 else 0.0
        return self.value / self.phi.error

    def to_dict(self):
        return {
            "deficiency": self.value,
            "phi": self.phi.to_dict(),
            "c_w": self.c_w,
            "domain_volume": self.domain_volume,
            "r": self.r,
            "x": list(self.x),
            "volume_condition_ok": self.volume_condition_ok,
            "is_ball": self.is_ball,
            "tolerance": self.tolerance,
            "path": self.path,
            "weight": self.weight,
            **self.extra,
        }


def deficiency_from_parts(
    parts: FunctionalParts,
    x: np.ndarray,
    r: float,
    weight: Weight,
    tol: float,
    settings: Optional[RuleSettings] = None,
) -> Deficiency:
    c_w = weight.mean_constant(r, settings)
    value = c_w - parts.phi.value
    ball = ball_volume(weight.dim, r)
    volume_ok = bool(
        parts.volume.value
        >= ball * (1 - 1e-12) - 3 * parts.volume.error
    )
    is_ball = None
    if volume_ok:
        is_ball = bool(value <= max(tol, 3 * parts.phi.error))
    return Deficiency(
        value=value,
        phi=parts.phi,
        c_w=c_w,
        domain_volume=parts.volume.value,
        r=r,
        volume_condition_ok=volume_ok,
        is_ball=is_ball,
        tolerance=tol,
        x=tuple(float(c) for c in x),
        path=parts.path,
        weight=weight.describe(),
    )


def deficiency(
    domain: Domain,
    x: PointLike,
    r: float,
    weight: Weight,
    method: str = "auto",
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
) -> Deficiency:
    """
    c_w(r) - Phi_w(D, x, r), with the volume condition |D| >= |B_r| and,
    when it holds, the ball verdict.

    Parameters
    ----------
    tol : float, optional
        Ball verdict threshold; packaged default (1e-9) if None.

    Returns
    -------
    Deficiency
    """
    if tol is None:
        tol = packaged_default("tolerances", "ball")
    x = as_array(x)
    parts = functional_parts(domain, x, r, weight, method, settings)
    return deficiency_from_parts(parts, x, r, weight, tol, settings)
