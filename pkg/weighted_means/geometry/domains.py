"""
Bounded test domains.

``StarDomain`` is star-shaped about its anchor, with the boundary given as a
radial function on the unit sphere (m = 2, 3). ``ImplicitDomain`` is a
membership oracle with a bounding box, drawn from a small built-in
catalogue, for any supported m.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from weighted_means.expr.evaluate import ExprEvaluationError, evaluate
from weighted_means.expr.nodes import (
    BOUNDARY_2D_VARIABLES,
    BOUNDARY_3D_VARIABLES,
    Expr,
)
from weighted_means.expr.parser import parse
from weighted_means.geometry.constants import check_dimension
from weighted_means.geometry.shapes import Point, PointLike, as_array, as_point
from weighted_means.quadrature.rules import RuleSettings, resolve_settings
from weighted_means.quadrature.summation import compensated_sum

# positivity sampling of star boundaries
CHECK_ANGLES_2D = 4096
CHECK_POLAR_3D = 128
CHECK_AZIMUTH_3D = 256

BBOX_MARGIN = 1.01

RAY_PROBES = 64
RAY_BISECTIONS = 60

IMPLICIT_SHAPES = ("ball", "ellipse", "ellipsoid", "box", "union")


class DomainConstructionError(ValueError):
    """Raised when a domain's parameters do not describe a valid domain."""

    pass


def polar_angle(directions: np.ndarray) -> np.ndarray:
    """Angle in [0, 2 pi) of 2D unit vectors."""
    angle = np.arctan2(directions[..., 1], directions[..., 0])
    return np.mod(angle, 2 * np.pi)


def spherical_angles(
    directions: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """(polar angle in [0, pi], azimuth in [0, 2 pi)) of 3D unit vectors."""
    polar = np.arccos(np.clip(directions[..., 2], -1.0, 1.0))
    azimuth = np.mod(
        np.arctan2(directions[..., 1], directions[..., 0]), 2 * np.pi
    )
    return polar, azimuth


def check_directions(dim: int) -> np.ndarray:
    """The dense direction sample used to validate star boundaries."""
    if dim == 2:
        angles = 2 * np.pi * np.arange(CHECK_ANGLES_2D) / CHECK_ANGLES_2D
        return np.stack([np.cos(angles), np.sin(angles)], axis=1)
    polar = (np.arange(CHECK_POLAR_3D) + 0.5) * np.pi / CHECK_POLAR_3D
    azimuth = 2 * np.pi * np.arange(CHECK_AZIMUTH_3D) / CHECK_AZIMUTH_3D
    polar, azimuth = np.meshgrid(polar, azimuth, indexing="ij")
    return np.stack(
        [
            (np.sin(polar) * np.cos(azimuth)).ravel(),
            (np.sin(polar) * np.sin(azimuth)).ravel(),
            np.cos(polar).ravel(),
        ],
        axis=1,
    )


@dataclass(frozen=True)
class FourierBoundary:
    """
    rho(theta) = a0 + sum_k (a_k cos(k theta) + b_k sin(k theta)), k >= 1.
    """

    a0: float
    cos: Tuple[float, ...] = ()
    sin: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos", tuple(float(a) for a in self.cos))
        object.__setattr__(self, "sin", tuple(float(b) for b in self.sin))

    dim = 2

    def radius(self, directions: np.ndarray) -> np.ndarray:
        theta = polar_angle(directions)
        rho = np.full(theta.shape, self.a0)
        for k, a in enumerate(self.cos, start=1):
            rho = rho + a * np.cos(k * theta)
        for k, b in enumerate(self.sin, start=1):
            rho = rho + b * np.sin(k * theta)
        return rho

    def rotated(self, angle: float) -> "FourierBoundary":
        """Boundary of the domain rotated by ``angle`` about the anchor."""
        n = max(len(self.cos), len(self.sin))
        a = np.zeros(n)
        b = np.zeros(n)
        a[: len(self.cos)] = self.cos
        b[: len(self.sin)] = self.sin
        k = np.arange(1, n + 1)
        cos_k, sin_k = np.cos(k * angle), np.sin(k * angle)
        return FourierBoundary(
            self.a0,
            tuple(a * cos_k - b * sin_k),
            tuple(a * sin_k + b * cos_k),
        )

    def describe(self) -> str:
        return f"fourier(a0={self.a0:g}, cos={self.cos}, sin={self.sin})"


@dataclass(frozen=True)
class SeparableTerm:
    """
    amplitude * sin(polar)^q * cos(p * polar) * trig(q * azimuth), with trig
    cos or sin. The sin(polar)^q factor keeps the term continuous at the
    poles.
    """

    amplitude: float
    p: int
    q: int
    trig: str = "cos"

    def __post_init__(self):
        if self.trig not in ("cos", "sin"):
            raise DomainConstructionError(
                f"Separable term trig must be 'cos' or 'sin': {self.trig!r}"
            )
        if self.p < 0 or self.q < 0:
            raise DomainConstructionError(
                "Separable term indices must be nonnegative"
            )

    def value(self, polar: np.ndarray, azimuth: np.ndarray) -> np.ndarray:
        trig = np.cos if self.trig == "cos" else np.sin
        return (
            self.amplitude
            * np.sin(polar) ** self.q
            * np.cos(self.p * polar)
            * trig(self.q * azimuth)
        )


@dataclass(frozen=True)
class SeparableBoundary:
    """rho = r0 + sum of separable perturbation terms (dim 3)."""

    r0: float
    terms: Tuple[SeparableTerm, ...] = ()

    dim = 3

    def __post_init__(self):
        object.__setattr__(self, "r0", float(self.r0))
        object.__setattr__(self, "terms", tuple(self.terms))

    def radius(self, directions: np.ndarray) -> np.ndarray:
        polar, azimuth = spherical_angles(directions)
        rho = np.full(polar.shape, self.r0)
        for term in self.terms:
            rho = rho + term.value(polar, azimuth)
        return rho

    def describe(self) -> str:
        return f"separable(r0={self.r0:g}, {len(self.terms)} terms)"


@dataclass(frozen=True)
class ExprBoundary:
    """
    Boundary given by an expression in ``theta`` (dim 2) or in ``theta``
    (polar angle) and ``phi`` (azimuth) (dim 3).
    """

    source: str
    dim: int
    expr: Expr = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise DomainConstructionError(
                f"Expression boundaries exist for dim 2, 3 only: {self.dim}"
            )
        allowed = BOUNDARY_2D_VARIABLES if self.dim == 2 else (
            BOUNDARY_3D_VARIABLES
        )
        object.__setattr__(self, "expr", parse(self.source, allowed))

    def radius(self, directions: np.ndarray) -> np.ndarray:
        if self.dim == 2:
            bindings = {"theta": polar_angle(directions)}
        else:
            polar, azimuth = spherical_angles(directions)
            bindings = {"theta": polar, "phi": azimuth}
        shape = directions.shape[:-1]
        return np.broadcast_to(evaluate(self.expr, bindings), shape)

    def describe(self) -> str:
        return f"expr({self.source})"


@dataclass(frozen=True, eq=False)
class RaytracedBoundary:
    """
    Boundary of ``source`` seen from ``origin``, found by tracing rays.
    Only valid when ``source`` is star-shaped about ``origin``.
    """

    source: "Domain"
    origin: Tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.origin)

    def radius(self, directions: np.ndarray) -> np.ndarray:
        radii = ray_exit_radii(self.source, self.origin, directions)
        if radii is None:
            raise DomainConstructionError(
                f"Domain is not star-shaped about {Point(self.origin)}"
            )
        return radii

    def translated(self, offset: np.ndarray) -> "RaytracedBoundary":
        return RaytracedBoundary(
            self.source.translated(offset),
            tuple(np.asarray(self.origin) + offset),
        )

    def describe(self) -> str:
        return f"raytraced(from {Point(self.origin)})"


Boundary = Union[
    FourierBoundary, SeparableBoundary, ExprBoundary, RaytracedBoundary
]


@dataclass(frozen=True, eq=False)
class StarDomain:
    """
    A domain star-shaped about ``anchor``: the points anchor + t * theta
    with 0 <= t < rho(theta).

    The boundary is sampled densely at construction: it must be finite and
    positive everywhere, and the sample gives ``rho_min``/``rho_max``.

    Parameters
    ----------
    dim : int
        2 or 3.
    anchor : Point
        Centre of star-shapedness.
    boundary : Boundary
        Radial function on the unit sphere.

    Raises
    ------
    DomainConstructionError
        If the boundary is not positive everywhere on the sample.
    """

    dim: int
    anchor: Point
    boundary: Boundary
    rho_min: float = field(init=False)
    rho_max: float = field(init=False)

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise DomainConstructionError(
                f"Star domains exist for dim 2, 3 only, got {self.dim}"
            )
        object.__setattr__(self, "anchor", as_point(self.anchor))
        if self.anchor.dim != self.dim or self.boundary.dim != self.dim:
            raise DomainConstructionError(
                "Anchor, boundary and domain dimensions differ"
            )
        try:
            rho = np.asarray(self.boundary.radius(check_directions(self.dim)))
        except ExprEvaluationError as error:
            raise DomainConstructionError(
                f"Boundary cannot be evaluated: {error}"
            ) from error
        if not np.all(np.isfinite(rho)):
            raise DomainConstructionError("Boundary is not finite everywhere")
        rho_min = float(rho.min())
        if rho_min <= 0:
            raise DomainConstructionError(
                f"Boundary radius must be positive, sampled minimum is "
                f"{rho_min:.6g}"
            )
        object.__setattr__(self, "rho_min", rho_min)
        object.__setattr__(self, "rho_max", float(rho.max()))
        logging.debug(
            f"Star domain {self.boundary.describe()} about {self.anchor}: "
            f"rho in [{self.rho_min:.6g}, {self.rho_max:.6g}]"
        )

    @classmethod
    def ball(cls, center: PointLike, radius: float) -> "StarDomain":
        center = as_point(center)
        if center.dim == 2:
            return cls(2, center, FourierBoundary(radius))
        return cls(center.dim, center, SeparableBoundary(radius))

    @classmethod
    def fourier(
        cls,
        anchor: PointLike,
        a0: float,
        cos: Sequence[float] = (),
        sin: Sequence[float] = (),
    ) -> "StarDomain":
        return cls(2, anchor, FourierBoundary(a0, tuple(cos), tuple(sin)))

    @classmethod
    def separable(
        cls,
        anchor: PointLike,
        r0: float,
        terms: Sequence[SeparableTerm] = (),
    ) -> "StarDomain":
        return cls(3, anchor, SeparableBoundary(r0, tuple(terms)))

    @classmethod
    def from_expression(cls, anchor: PointLike, source: str) -> "StarDomain":
        anchor = as_point(anchor)
        return cls(anchor.dim, anchor, ExprBoundary(source, anchor.dim))

    @classmethod
    def ellipsoid(
        cls, center: PointLike, semi_axes: Sequence[float]
    ) -> "StarDomain":
        """Axis-aligned ellipse (dim 2) or ellipsoid (dim 3)."""
        center = as_point(center)
        if len(semi_axes) != center.dim or min(semi_axes) <= 0:
            raise DomainConstructionError(
                f"Need {center.dim} positive semi-axes, got {semi_axes}"
            )
        if center.dim == 2:
            components = ("cos(theta)", "sin(theta)")
        else:
            components = (
                "sin(theta)*cos(phi)",
                "sin(theta)*sin(phi)",
                "cos(theta)",
            )
        terms = " + ".join(
            f"({c}/{float(a)!r})^2" for c, a in zip(components, semi_axes)
        )
        return cls.from_expression(center, f"1/sqrt({terms})")

    @property
    def is_ball(self) -> bool:
        """True if the boundary is a constant by construction."""
        if isinstance(self.boundary, FourierBoundary):
            return not any(self.boundary.cos) and not any(self.boundary.sin)
        if isinstance(self.boundary, SeparableBoundary):
            return not any(t.amplitude for t in self.boundary.terms)
        return False

    def radius(self, directions: np.ndarray) -> np.ndarray:
        return self.boundary.radius(np.asarray(directions, dtype=np.float64))

    @property
    def bbox(self) -> np.ndarray:
        center = self.anchor.as_array()
        half = BBOX_MARGIN * self.rho_max
        return np.stack([center - half, center + half], axis=1)

    @property
    def center(self) -> Point:
        return self.anchor

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of points (shape (..., m)) inside the domain."""
        offsets = np.asarray(points, dtype=np.float64) - self.anchor.as_array()
        distance = np.linalg.norm(offsets, axis=-1)
        at_anchor = distance == 0
        directions = offsets / np.where(at_anchor, 1.0, distance)[..., None]
        directions[at_anchor] = np.eye(self.dim)[0]
        return at_anchor | (distance < self.radius(directions))

    def translated(self, offset: PointLike) -> "StarDomain":
        offset = as_array(offset)
        boundary = self.boundary
        if isinstance(boundary, RaytracedBoundary):
            boundary = boundary.translated(offset)
        return StarDomain(
            self.dim, Point(tuple(self.anchor.as_array() + offset)), boundary
        )

    def rotated(self, angle: float) -> "StarDomain":
        """Rotate a 2D Fourier domain by ``angle`` about its anchor."""
        if not isinstance(self.boundary, FourierBoundary):
            raise NotImplementedError(
                "Rotation is supported for 2D Fourier boundaries only"
            )
        return StarDomain(2, self.anchor, self.boundary.rotated(angle))

    def as_implicit(self) -> "ImplicitDomain":
        """Indicator view of the domain, as used by Monte Carlo paths."""
        return ImplicitDomain(
            self.dim,
            self.contains,
            self.bbox,
            name=f"star:{self.boundary.describe()}",
            center=self.anchor,
        )

    def describe(self) -> str:
        return f"star{self.dim}d {self.boundary.describe()} at {self.anchor}"


def star_volume(
    domain: StarDomain, settings: Optional[RuleSettings] = None
) -> float:
    """
    Volume (1/m) * integral over S^(m-1) of rho^m, with the sphere rule of
    the given settings.

    Parameters
    ----------
    domain : StarDomain
        The domain.
    settings : RuleSettings, optional
        Rule sizes. Packaged defaults if None.

    Returns
    -------
    float
        The volume |D|.
    """
    rule = resolve_settings(settings).sphere_rule(domain.dim)
    rho = domain.radius(rule.nodes)
    return compensated_sum(rule.weights * rho**domain.dim) / domain.dim


Indicator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class ImplicitDomain:
    """
    A domain given by a membership oracle and a bounding box. Points outside
    the box are always outside the domain.

    Parameters
    ----------
    dim : int
        Dimension m.
    indicator : callable
        Maps points of shape (..., m) to a boolean mask.
    bbox : np.ndarray
        Shape (m, 2): lower and upper bound per axis.
    name : str
        Catalogue shape or description.
    center : Point, optional
        A designated interior point (catalogue centre).
    params : tuple of float
        Catalogue parameters.
    """

    dim: int
    indicator: Indicator = field(repr=False)
    bbox: np.ndarray = field(repr=False)
    name: str = "implicit"
    center: Optional[Point] = None
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        check_dimension(self.dim)
        bbox = np.asarray(self.bbox, dtype=np.float64)
        if bbox.shape != (self.dim, 2) or not np.all(bbox[:, 0] < bbox[:, 1]):
            raise DomainConstructionError(
                f"Bounding box must be {self.dim} (lower, upper) pairs with "
                "lower < upper"
            )
        object.__setattr__(self, "bbox", bbox)
        if self.center is None:
            object.__setattr__(self, "center", Point(tuple(bbox.mean(axis=1))))
        else:
            object.__setattr__(self, "center", as_point(self.center))

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=np.float64)
        in_box = np.all(
            (points > self.bbox[:, 0]) & (points < self.bbox[:, 1]), axis=-1
        )
        return in_box & np.asarray(self.indicator(points), dtype=bool)

    def translated(self, offset: PointLike) -> "ImplicitDomain":
        offset = as_array(offset)
        indicator = self.indicator

        def shifted(points):
            return indicator(np.asarray(points) - offset)

        return ImplicitDomain(
            self.dim,
            shifted,
            self.bbox + offset[:, None],
            self.name,
            Point(tuple(self.center.as_array() + offset)),
            self.params,
        )

    @classmethod
    def from_catalogue(
        cls,
        shape: str,
        m: int,
        params: Sequence[float],
        center: Optional[PointLike] = None,
        bbox: Optional[np.ndarray] = None,
    ) -> "ImplicitDomain":
        """
        Build a catalogue domain.

        Parameters
        ----------
        shape : str
            "ball" (params [r]), "ellipse"/"ellipsoid" (semi-axes),
            "box" (half-widths) or "union" (c1..., r1, c2..., r2).
        m : int
            Dimension.
        params : sequence of float
            Shape parameters.
        center : point-like, optional
            Translation applied to the shape (origin if None).
        bbox : array-like, optional
            Bounding box; the shape's tight box if None.

        Raises
        ------
        DomainConstructionError
            On an unknown shape or wrong parameters.
        """
        m = check_dimension(m)
        params = tuple(float(p) for p in params)
        offset = np.zeros(m) if center is None else as_array(center)
        if offset.shape != (m,):
            raise DomainConstructionError(
                f"Centre needs {m} coordinates, got {offset.size}"
            )
        indicator, tight, interior = _catalogue_shape(shape, m, params)

        def shifted(points):
            return indicator(np.asarray(points) - offset)

        tight = tight + offset[:, None]
        if bbox is None:
            bbox = tight
        else:
            bbox = np.asarray(bbox, dtype=np.float64)
            if bbox.shape == (m, 2) and (
                np.any(bbox[:, 0] > tight[:, 0])
                or np.any(bbox[:, 1] < tight[:, 1])
            ):
                logging.warning(
                    f"Bounding box does not enclose the {shape}; the domain "
                    "is clipped to the box"
                )
        return cls(
            m, shifted, bbox, shape, Point(tuple(interior + offset)), params
        )

    def describe(self) -> str:
        return f"implicit {self.name}{list(self.params)} in R^{self.dim}"


def _catalogue_shape(shape: str, m: int, params: Tuple[float, ...]):
    """Indicator, tight bounding box and an interior point of a shape."""
    if shape not in IMPLICIT_SHAPES:
        raise DomainConstructionError(
            f"Unknown implicit shape {shape!r}, expected one of "
            + ", ".join(IMPLICIT_SHAPES)
        )
    origin = np.zeros(m)
    if shape == "ball":
        _check_params(shape, params, 1)
        (r,) = params

        def indicator(points):
            return np.sum(points**2, axis=-1) < r**2

        return indicator, np.stack([origin - r, origin + r], axis=1), origin

    if shape in ("ellipse", "ellipsoid", "box"):
        _check_params(shape, params, m)
        axes = np.array(params)
        if shape == "box":

            def indicator(points):
                return np.all(np.abs(points) < axes, axis=-1)

        else:

            def indicator(points):
                return np.sum((points / axes) ** 2, axis=-1) < 1

        return indicator, np.stack([-axes, axes], axis=1), origin

    _check_params(shape, params, 2 * m + 2, positive=False)
    c1, r1 = np.array(params[:m]), params[m]
    c2, r2 = np.array(params[m + 1 : 2 * m + 1]), params[2 * m + 1]
    if r1 <= 0 or r2 <= 0:
        raise DomainConstructionError("Union radii must be positive")

    def indicator(points):
        return (np.sum((points - c1) ** 2, axis=-1) < r1**2) | (
            np.sum((points - c2) ** 2, axis=-1) < r2**2
        )

    lower = np.minimum(c1 - r1, c2 - r2)
    upper = np.maximum(c1 + r1, c2 + r2)
    return indicator, np.stack([lower, upper], axis=1), c1


def _check_params(shape, params, expected, positive=True):
    if len(params) != expected:
        raise DomainConstructionError(
            f"Shape {shape!r} needs {expected} parameters, got {len(params)}"
        )
    if positive and any(not (p > 0 and math.isfinite(p)) for p in params):
        raise DomainConstructionError(
            f"Shape {shape!r} parameters must be positive: {list(params)}"
        )


Domain = Union[StarDomain, ImplicitDomain]


def ray_exit_radii(
    domain: Domain,
    origin: PointLike,
    directions: np.ndarray,
    n_probe: int = RAY_PROBES,
    n_bisect: int = RAY_BISECTIONS,
) -> Optional[np.ndarray]:
    """
    Distance from ``origin`` to the boundary along each direction.

    Each ray is probed at ``n_probe`` equispaced radii up to the far corner
    of the bounding box. If on some ray the domain is re-entered after being
    left, the domain is not star-shaped about ``origin`` (as far as the
    probes can tell) and None is returned. Otherwise the exit radius is
    refined by bisection on the membership oracle.

    Parameters
    ----------
    domain : StarDomain or ImplicitDomain
        Domain with ``contains`` and ``bbox``.
    origin : point-like
        Interior point.
    directions : np.ndarray
        Unit vectors, shape (k, m).

    Returns
    -------
    np.ndarray or None
        Exit radii, shape (k,), or None when not star-shaped.

    Raises
    ------
    ValueError
        If ``origin`` is not inside the domain.
    """
    origin = as_array(origin)
    directions = np.asarray(directions, dtype=np.float64)
    if not domain.contains(origin[None, :])[0]:
        raise ValueError(f"Ray origin {Point(tuple(origin))} is outside")
    corners = np.abs(domain.bbox - origin[:, None]).max(axis=1)
    reach = float(np.linalg.norm(corners))

    step = reach / n_probe
    probes = step * np.arange(1, n_probe + 1)
    points = origin + probes[None, :, None] * directions[:, None, :]
    inside = domain.contains(points)
    n_inside = inside.sum(axis=1)
    # star-shaped along a ray: a run of inside probes, then only outside
    prefix = np.arange(n_probe)[None, :] < n_inside[:, None]
    if np.any(inside != prefix):
        logging.debug(
            f"Domain is not star-shaped about {Point(tuple(origin))}"
        )
        return None

    lower = step * n_inside
    upper = lower + step
    for _ in range(n_bisect):
        middle = 0.5 * (lower + upper)
        hit = domain.contains(origin + middle[:, None] * directions)
        lower = np.where(hit, middle, lower)
        upper = np.where(hit, upper, middle)
    return 0.5 * (lower + upper)
