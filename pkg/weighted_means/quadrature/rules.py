"""
Quadrature rules on the unit sphere (m = 2, 3) and singularity-graded radial
panel rules, plus the settings bundle that builds them.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from scipy.special import roots_legendre

from weighted_means.general.config import load_config
from weighted_means.general.numerical import is_even
from weighted_means.geometry.constants import sphere_area
from weighted_means.quadrature.summation import compensated_sum

ESTIMATE_METHODS = ("product_rule", "mc")


class RuleConstructionError(ValueError):
    """Raised for invalid node counts or grading parameters."""

    pass


@dataclass(frozen=True)
class Estimate:
    """
    A numeric value bundled with an error estimate.

    Attributes
    ----------
    value : float
        The estimate.
    error : float
        Deterministic convergence heuristic (product rules) or Monte Carlo
        standard error. Never negative.
    method : str
        "product_rule" or "mc".
    n_evals : int
        Number of integrand evaluations spent.
    """

    value: float
    error: float
    method: str
    n_evals: int

    def __post_init__(self):
        if not self.error >= 0:
            raise ValueError(f"Estimate error must be >= 0, got {self.error}")
        if self.method not in ESTIMATE_METHODS:
            raise ValueError(f"Unknown estimate method {self.method!r}")
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "error", float(self.error))
        object.__setattr__(self, "n_evals", int(self.n_evals))

    def scaled(self, factor: float) -> "Estimate":
        return replace(
            self, value=self.value * factor, error=self.error * abs(factor)
        )

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SphereRule:
    """
    Nodes and positive weights on the unit sphere S^(dim-1).

    ``params`` holds the construction arguments so that a coarser companion
    rule can be built for error estimates.
    """

    dim: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    kind: str
    params: Tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.weights)

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum of values given at the nodes."""
        return compensated_sum(self.weights * np.asarray(values))

    def half(self) -> "SphereRule":
        """The rule with about half the nodes per direction."""
        if self.kind == "trapezoid":
            n = max(4, self.params[0] // 2)
            return circle_rule(n + n % 2)
        n_polar = max(2, self.params[0] // 2)
        n_azimuth = max(4, self.params[1] // 2)
        return sphere_rule_3d(n_polar, n_azimuth + n_azimuth % 2)


def circle_rule(n: int) -> SphereRule:
    """
    Trapezoid rule on the unit circle: n equispaced nodes, weights 2 pi / n.
    Spectrally accurate for smooth periodic integrands.

    Parameters
    ----------
    n : int
        Node count, even and at least 4.

    Raises
    ------
    RuleConstructionError
        If n is too small or odd.
    """
    if n < 4 or not is_even(n):
        raise RuleConstructionError(
            f"Circle rule needs an even node count >= 4, got {n}"
        )
    angles = 2 * np.pi * np.arange(n) / n
    nodes = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    weights = np.full(n, 2 * np.pi / n)
    return SphereRule(2, nodes, weights, "trapezoid", (n,))


def sphere_rule_3d(n_polar: int, n_azimuth: int) -> SphereRule:
    """
    Product rule on S^2: Gauss-Legendre in cos(polar angle) times the
    trapezoid rule in azimuth. Weights sum to 4 pi.

    Parameters
    ----------
    n_polar : int
        Gauss-Legendre points in cos(polar angle), at least 2.
    n_azimuth : int
        Equispaced azimuths, even and at least 4 (antipodal symmetry).

    Raises
    ------
    RuleConstructionError
        If the counts are invalid.
    """
    if n_polar < 2 or n_azimuth < 4 or not is_even(n_azimuth):
        raise RuleConstructionError(
            "3D sphere rule needs n_polar >= 2 and an even n_azimuth >= 4, "
            f"got ({n_polar}, {n_azimuth})"
        )
    cos_polar, polar_weights = roots_legendre(n_polar)
    sin_polar = np.sqrt(1.0 - cos_polar**2)
    azimuths = 2 * np.pi * np.arange(n_azimuth) / n_azimuth

    nodes = np.stack(
        [
            np.outer(sin_polar, np.cos(azimuths)).ravel(),
            np.outer(sin_polar, np.sin(azimuths)).ravel(),
            np.repeat(cos_polar, n_azimuth),
        ],
        axis=1,
    )
    weights = np.repeat(polar_weights, n_azimuth) * (2 * np.pi / n_azimuth)
    return SphereRule(3, nodes, weights, "gauss_product", (n_polar, n_azimuth))


@dataclass(frozen=True, eq=False)
class RadialPanelRule:
    """
    Composite Gauss-Legendre rule on (0, r] over geometrically graded panels
    [r q^(k+1), r q^k], k = 0, 1, ..., accumulating at 0.

    Panels are added until the innermost edge is at most ``cutoff * r``,
    capped at ``max_panels``. Nodes never touch 0, so integrands with an
    integrable singularity at the origin can be evaluated directly.

    Parameters
    ----------
    r : float
        Outer radius.
    max_panels : int
        Maximum number of panels.
    nodes_per_panel : int
        Gauss-Legendre points per panel.
    grading_ratio : float
        Ratio q in (0, 1) between consecutive panel edges.
    cutoff : float
        Target innermost edge, relative to r.
    """

    r: float
    max_panels: int = 100
    nodes_per_panel: int = 16
    grading_ratio: float = 0.5
    cutoff: float = 1e-30
    n_panels: int = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0):
            raise RuleConstructionError(f"Outer radius must be > 0: {self.r}")
        if not 0 < self.grading_ratio < 1:
            raise RuleConstructionError(
                f"Grading ratio must lie in (0, 1): {self.grading_ratio}"
            )
        if self.nodes_per_panel < 1 or self.max_panels < 1:
            raise RuleConstructionError(
                "Radial rule needs at least one panel and one node per panel"
            )

        needed = math.ceil(
            math.log(self.cutoff) / math.log(self.grading_ratio)
        )
        n_panels = min(self.max_panels, max(needed, 1))
        if n_panels < needed:
            logging.warning(
                f"Radial rule truncated at {n_panels} panels: innermost edge "
                f"{self.grading_ratio**n_panels:.3g}*r exceeds the "
                f"{self.cutoff:g}*r cutoff"
            )

        x, w = roots_legendre(self.nodes_per_panel)
        outer = self.r * self.grading_ratio ** np.arange(n_panels)
        inner = outer * self.grading_ratio
        half_width = 0.5 * (outer - inner)
        midpoint = 0.5 * (outer + inner)
        nodes = (midpoint[:, None] + half_width[:, None] * x[None, :]).ravel()
        weights = (half_width[:, None] * w[None, :]).ravel()

        object.__setattr__(self, "n_panels", n_panels)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def inner_edge(self) -> float:
        return self.r * self.grading_ratio**self.n_panels

    def half(self) -> "RadialPanelRule":
        """Same panels, half the nodes per panel (error heuristic)."""
        return replace(self, nodes_per_panel=max(1, self.nodes_per_panel // 2))

    def rescaled(self, r: float) -> "RadialPanelRule":
        return replace(self, r=r)


@dataclass(frozen=True)
class RuleSettings:
    """
    Rule sizes and sampling settings shared by every integrating operation.

    Attributes
    ----------
    sphere_n : int
        Circle rule nodes (m = 2).
    sphere_polar, sphere_azimuth : int
        3D product rule sizes (m = 3).
    radial_panels, radial_nodes : int
        Maximum panel count and Gauss points per panel of radial rules.
    grading_ratio : float
        Radial panel grading ratio.
    mc_n : int
        Default Monte Carlo sample count.
    seed : int
        Base seed for every Monte Carlo stream.
    chunk_size : int
        Samples per independently seeded Monte Carlo chunk.
    workers : int, optional
        Worker threads for chunked work. None: decided from the machine.
    """

    sphere_n: int = 256
    sphere_polar: int = 32
    sphere_azimuth: int = 64
    radial_panels: int = 100
    radial_nodes: int = 16
    grading_ratio: float = 0.5
    mc_n: int = 1_000_000
    seed: int = 0
    chunk_size: int = 65536
    workers: Optional[int] = None

    @classmethod
    def from_config(cls, config) -> "RuleSettings":
        quadrature = config["quadrature"]
        montecarlo = config["montecarlo"]
        return cls(
            sphere_n=int(quadrature["sphere_n"]),
            sphere_polar=int(quadrature["sphere_polar"]),
            sphere_azimuth=int(quadrature["sphere_azimuth"]),
            radial_panels=int(quadrature["radial_panels"]),
            radial_nodes=int(quadrature["radial_nodes"]),
            grading_ratio=float(quadrature["grading_ratio"]),
            mc_n=int(montecarlo["mc_n"]),
            seed=int(montecarlo["seed"]),
            chunk_size=int(montecarlo["chunk_size"]),
        )

    @classmethod
    def default(cls) -> "RuleSettings":
        return _packaged_settings()

    def with_overrides(self, **overrides) -> "RuleSettings":
        """Copy with the non-None overrides applied."""
        return replace(
            self, **{k: v for k, v in overrides.items() if v is not None}
        )

    def sphere_rule(self, m: int) -> SphereRule:
        if m == 2:
            return circle_rule(self.sphere_n)
        if m == 3:
            return sphere_rule_3d(self.sphere_polar, self.sphere_azimuth)
        raise RuleConstructionError(
            f"Deterministic sphere rules exist for m = 2, 3 only, got {m}"
        )

    def radial_rule(self, r: float) -> RadialPanelRule:
        return RadialPanelRule(
            r,
            max_panels=self.radial_panels,
            nodes_per_panel=self.radial_nodes,
            grading_ratio=self.grading_ratio,
        )

    def to_dict(self):
        return asdict(self)


@lru_cache(maxsize=1)
def _packaged_settings() -> RuleSettings:
    return RuleSettings.from_config(load_config())


def resolve_settings(settings: Optional[RuleSettings]) -> RuleSettings:
    return RuleSettings.default() if settings is None else settings
