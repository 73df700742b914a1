import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from weighted_means.geometry.constants import ball_volume, check_dimension


@dataclass(frozen=True)
class Point:
    """
    A location in R^m, m >= 2.

    Attributes
    ----------
    coords : Tuple[float, ...]
        Coordinates (x_1, ..., x_m). All finite.
    """

    coords: Tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 2:
            raise ValueError(
                f"A point needs at least 2 coordinates, got {len(coords)}"
            )
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"Point coordinates must be finite: {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.float64)

    def distance_to(self, other: "PointLike") -> float:
        return float(np.linalg.norm(self.as_array() - as_array(other)))

    def __str__(self) -> str:
        return "(" + ", ".join(f"{c:g}" for c in self.coords) + ")"


PointLike = Union[Point, Sequence[float], np.ndarray]


def as_point(value: PointLike) -> Point:
    if isinstance(value, Point):
        return value
    return Point(tuple(np.asarray(value, dtype=np.float64).ravel()))


def as_array(value: PointLike) -> np.ndarray:
    if isinstance(value, Point):
        return value.as_array()
    return np.asarray(value, dtype=np.float64)


@dataclass(frozen=True)
class Ball:
    """
    The open ball B_r(x) of radius ``radius`` centred at ``center``.
    """

    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        check_dimension(self.center.dim)
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"Ball radius must be positive: {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return self.center.dim

    @property
    def volume(self) -> float:
        return ball_volume(self.dim, self.radius)

    @property
    def bbox(self) -> np.ndarray:
        c = self.center.as_array()
        return np.stack([c - self.radius, c + self.radius], axis=1)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask of the points (shape (..., m)) inside the ball."""
        points = np.asarray(points, dtype=np.float64)
        offsets = points - self.center.as_array()
        return np.einsum("...i,...i->...", offsets, offsets) < self.radius**2

    def distance_to_boundary(self, point: PointLike) -> float:
        """
        Distance from a point inside the ball to the sphere S_r(x).
        Negative for points outside.
        """
        return self.radius - self.center.distance_to(point)

    def closure_within(self, other: "Ball") -> bool:
        """True if the closure of this ball lies in the open ball ``other``."""
        return self.separation_from_boundary(other) > 0

    def separation_from_boundary(self, other: "Ball") -> float:
        """Distance between this ball and the boundary of ``other``."""
        return other.radius - (
            self.center.distance_to(other.center) + self.radius
        )

    def to_dict(self):
        return {"center": list(self.center.coords), "r": self.radius}

    def __str__(self) -> str:
        return f"B_{self.radius:g}{self.center}"
