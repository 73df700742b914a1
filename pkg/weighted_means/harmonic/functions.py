"""
Harmonic test functions with exact values and gradients.

Every function is vectorised: ``u(points)`` takes points of shape (..., m)
and returns values of shape (...). ``evaluate`` and ``gradient`` accept a
single point as well.
"""

from dataclasses import dataclass, field
from typing import ClassVar, Tuple

import numpy as np

from weighted_means.geometry.constants import check_dimension
from weighted_means.geometry.shapes import Point, PointLike, as_array


class PoleEvaluationError(ArithmeticError):
    """A fundamental solution evaluated at its pole."""

    pass


def _points(points, dim) -> np.ndarray:
    points = as_array(points)
    if points.shape[-1] != dim:
        raise ValueError(
            f"Expected points in R^{dim}, got shape {points.shape}"
        )
    return points


@dataclass(frozen=True)
class HarmonicFn:
    """
    Base class of the test functions.

    Attributes
    ----------
    dim : int
        Dimension m of the space.
    """

    dim: int

    harmonic: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "dim", check_dimension(self.dim))

    def _values(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _gradients(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self._values(_points(points, self.dim))

    def evaluate(self, points: PointLike):
        """Exact value; a float for a single point."""
        values = self(points)
        return float(values) if np.ndim(values) == 0 else values

    def gradient(self, points: PointLike) -> np.ndarray:
        """Exact gradient, shape (..., m)."""
        return self._gradients(_points(points, self.dim))

    def describe(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantFn(HarmonicFn):
    value: float = 1.0

    def _values(self, points):
        return np.full(points.shape[:-1], float(self.value))

    def _gradients(self, points):
        return np.zeros(points.shape)

    def describe(self) -> str:
        return f"const:{self.value!r}"


@dataclass(frozen=True)
class CoordinateFn(HarmonicFn):
    """u(y) = y_i, with i 1-based."""

    index: int = 1

    def __post_init__(self):
        super().__post_init__()
        if not 1 <= self.index <= self.dim:
            raise ValueError(
                f"Coordinate index must lie in 1..{self.dim}: {self.index}"
            )

    def _values(self, points):
        return np.array(points[..., self.index - 1])

    def _gradients(self, points):
        gradients = np.zeros(points.shape)
        gradients[..., self.index - 1] = 1.0
        return gradients

    def describe(self) -> str:
        return f"coord:{self.index}"


@dataclass(frozen=True)
class ComplexPowerFn(HarmonicFn):
    """
    Real or imaginary part of z^n with z = y_1 + i y_2. Harmonic in any
    dimension since it does not depend on the other coordinates.
    """

    n: int = 2
    part: str = "re"

    def __post_init__(self):
        super().__post_init__()
        if self.part not in ("re", "im"):
            raise ValueError(f"Part must be 're' or 'im': {self.part!r}")
        if self.n < 0:
            raise ValueError(f"Power must be nonnegative: {self.n}")

    def _z(self, points):
        return points[..., 0] + 1j * points[..., 1]

    def _values(self, points):
        power = self._z(points) ** self.n
        return power.real if self.part == "re" else power.imag

    def _gradients(self, points):
        gradients = np.zeros(points.shape)
        if self.n == 0:
            return gradients
        derivative = self.n * self._z(points) ** (self.n - 1)
        if self.part == "re":
            gradients[..., 0] = derivative.real
            gradients[..., 1] = -derivative.imag
        else:
            gradients[..., 0] = derivative.imag
            gradients[..., 1] = derivative.real
        return gradients

    def describe(self) -> str:
        return f"{self.part}_z:{self.n}"


Monomial = Tuple[float, Tuple[int, ...]]


@dataclass(frozen=True)
class PolynomialFn(HarmonicFn):
    """
    A polynomial given as (coefficient, exponents) monomials. Exponent
    tuples shorter than ``dim`` are padded with zeros.
    """

    name: str = ""
    terms: Tuple[Monomial, ...] = ()
    harmonic: bool = field(init=False)

    def __post_init__(self):
        super().__post_init__()
        terms = []
        for coefficient, exponents in self.terms:
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) > self.dim and any(exponents[self.dim :]):
                raise ValueError(
                    f"Polynomial {self.name!r} needs more than "
                    f"{self.dim} variables"
                )
            exponents = (exponents + (0,) * self.dim)[: self.dim]
            terms.append((float(coefficient), exponents))
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "harmonic", not self.laplacian_terms())

    @property
    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def _values(self, points):
        values = np.zeros(points.shape[:-1])
        for coefficient, exponents in self.terms:
            values = values + coefficient * np.prod(
                points ** np.array(exponents), axis=-1
            )
        return values

    def _gradients(self, points):
        gradients = np.zeros(points.shape)
        for coefficient, exponents in self.terms:
            for i, e in enumerate(exponents):
                if e == 0:
                    continue
                lowered = list(exponents)
                lowered[i] -= 1
                gradients[..., i] += (
                    coefficient
                    * e
                    * np.prod(points ** np.array(lowered), axis=-1)
                )
        return gradients

    def laplacian_terms(self) -> dict:
        """Exact Laplacian as {exponents: coefficient}, zeros dropped."""
        laplacian = {}
        for coefficient, exponents in self.terms:
            for i, e in enumerate(exponents):
                if e < 2:
                    continue
                lowered = list(exponents)
                lowered[i] -= 2
                key = tuple(lowered)
                laplacian[key] = laplacian.get(key, 0.0) + coefficient * e * (
                    e - 1
                )
        return {k: c for k, c in laplacian.items() if c != 0}

    def describe(self) -> str:
        return f"poly:{self.name}"


@dataclass(frozen=True)
class FundamentalFn(HarmonicFn):
    """
    log|y - p| (m = 2) or |y - p|^(2 - m) (m >= 3), harmonic away from the
    pole p.
    """

    pole: Point = None

    def __post_init__(self):
        super().__post_init__()
        pole = Point(tuple(as_array(self.pole)))
        if pole.dim != self.dim:
            raise ValueError(f"Pole needs {self.dim} coordinates")
        object.__setattr__(self, "pole", pole)

    def _offsets(self, points):
        offsets = points - self.pole.as_array()
        distance = np.linalg.norm(offsets, axis=-1)
        if np.any(distance == 0):
            raise PoleEvaluationError(
                f"Fundamental solution evaluated at its pole {self.pole}"
            )
        return offsets, distance

    def _values(self, points):
        _, distance = self._offsets(points)
        if self.dim == 2:
            return np.log(distance)
        return distance ** (2 - self.dim)

    def _gradients(self, points):
        offsets, distance = self._offsets(points)
        if self.dim == 2:
            return offsets / (distance**2)[..., None]
        return (2 - self.dim) * offsets * (distance ** (-self.dim))[..., None]

    def describe(self) -> str:
        return "fund:" + ",".join(repr(c) for c in self.pole.coords)


@dataclass(frozen=True)
class LinearCombination(HarmonicFn):
    coefficients: Tuple[float, ...] = ()
    terms: Tuple[HarmonicFn, ...] = ()
    label: str = ""

    def __post_init__(self):
        super().__post_init__()
        if len(self.coefficients) != len(self.terms):
            raise ValueError("One coefficient per term is needed")
        if any(term.dim != self.dim for term in self.terms):
            raise ValueError("All terms must share the combination's dim")
        object.__setattr__(
            self, "coefficients", tuple(float(c) for c in self.coefficients)
        )
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def harmonic(self) -> bool:
        return all(term.harmonic for term in self.terms)

    def _values(self, points):
        values = np.zeros(points.shape[:-1])
        for coefficient, term in zip(self.coefficients, self.terms):
            values = values + coefficient * term._values(points)
        return values

    def _gradients(self, points):
        gradients = np.zeros(points.shape)
        for coefficient, term in zip(self.coefficients, self.terms):
            gradients = gradients + coefficient * term._gradients(points)
        return gradients

    def describe(self) -> str:
        if self.label:
            return self.label
        return " + ".join(
            f"{c!r}*[{t.describe()}]"
            for c, t in zip(self.coefficients, self.terms)
        )


def evaluate(u: HarmonicFn, x: PointLike) -> float:
    """Exact value u(x) at one point."""
    return float(u(as_array(x)[None, :])[0])


def gradient_analytic(u: HarmonicFn, x: PointLike) -> Point:
    """Exact gradient of u at one point."""
    return Point(tuple(u.gradient(as_array(x)[None, :])[0]))
