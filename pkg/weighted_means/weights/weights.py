"""
Radial weights w(t, r) with their radial primitives

    W(T) = int_0^T t^(m-1) w(t, r) dt

and mean constants c_w(r) = (m / r^m) W(r), the weighted ball mean of the
constant function 1.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import ClassVar, Optional

import numpy as np

from weighted_means.expr.evaluate import evaluate
from weighted_means.expr.nodes import WEIGHT_VARIABLES, Expr
from weighted_means.expr.parser import parse
from weighted_means.geometry.constants import check_dimension
from weighted_means.quadrature.integrate import (
    radial_integrate,
    radial_panel_sums,
)
from weighted_means.quadrature.rules import (
    Estimate,
    RuleSettings,
    resolve_settings,
)

# panels whose sums are compared when checking a numeric primitive
DIVERGENCE_PANELS = 10
DIVERGENCE_RATIO = 1 - 1e-3

WEIGHT_KINDS = ("log", "riesz", "power", "custom")


class WeightParameterError(ValueError):
    """Riesz alpha outside (0, m), or Power beta not positive."""

    pass


class WeightSpecError(ValueError):
    """Malformed weight spec string."""

    pass


class WeightDivergenceError(ArithmeticError):
    """The radial integral of a weight does not converge at t = 0."""

    pass


def _check_radius(name, value):
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class Weight:
    """
    Base class of radial weights.

    Attributes
    ----------
    dim : int
        Dimension m of the space the weight is used in.
    """

    dim: int

    kind: ClassVar[str] = ""
    closed_form: ClassVar[bool] = True

    def __post_init__(self):
        object.__setattr__(self, "dim", check_dimension(self.dim))

    def value(self, t, r):
        """w(t, r), vectorised over t (and r)."""
        raise NotImplementedError

    def _closed_primitive(self, T: float, r: float) -> float:
        raise NotImplementedError

    def radial_primitive(
        self, T: float, r: float, settings: Optional[RuleSettings] = None
    ) -> float:
        """
        W(T) = int_0^T t^(m-1) w(t, r) dt.

        Closed form for the built-in weights, graded quadrature for custom
        weights.

        Raises
        ------
        WeightDivergenceError
            If a custom weight is not integrable at 0.
        """
        _check_radius("T", T)
        _check_radius("r", r)
        if self.closed_form:
            return float(self._closed_primitive(T, r))
        return numeric_radial_primitive(self, T, r, settings).value

    def radial_primitives(
        self,
        T: np.ndarray,
        r: float,
        settings: Optional[RuleSettings] = None,
    ) -> np.ndarray:
        """
        W at every entry of an array of upper limits T. Closed forms are
        evaluated in one vectorised call; custom weights one limit at a
        time.
        """
        T = np.asarray(T, dtype=np.float64)
        if not np.all(T > 0):
            raise ValueError("Upper limits T must be positive")
        _check_radius("r", r)
        if self.closed_form:
            return np.asarray(self._closed_primitive(T, r), dtype=np.float64)
        values = [
            numeric_radial_primitive(self, t, r, settings).value
            for t in T.ravel()
        ]
        return np.array(values).reshape(T.shape)

    def mean_constant(
        self, r: float, settings: Optional[RuleSettings] = None
    ) -> float:
        """c_w(r) = (1 / |B_r|) int_{B_r(x)} w(|x - y|, r) dy."""
        return self.dim / r**self.dim * self.radial_primitive(r, r, settings)

    @property
    def finite_variance(self) -> bool:
        """Whether w(|x - y|, r) is square integrable near y = x."""
        return True

    def with_dim(self, m: int) -> "Weight":
        return replace(self, dim=m)

    def describe(self) -> str:
        return self.kind


@dataclass(frozen=True)
class LogWeight(Weight):
    """w(t, r) = log(r / t)."""

    kind: ClassVar[str] = "log"

    def value(self, t, r):
        return np.log(r / np.asarray(t, dtype=np.float64))

    def _closed_primitive(self, T, r):
        m = self.dim
        return T**m / m**2 * (m * np.log(r / T) + 1)


@dataclass(frozen=True)
class RieszWeight(Weight):
    """w(t, r) = t^(alpha - m) - r^(alpha - m), 0 < alpha < m."""

    alpha: float = 1.0

    kind: ClassVar[str] = "riesz"

    def __post_init__(self):
        super().__post_init__()
        if not 0 < self.alpha < self.dim:
            raise WeightParameterError(
                f"Riesz weight needs 0 < alpha < m = {self.dim}, "
                f"got alpha = {self.alpha}"
            )
        object.__setattr__(self, "alpha", float(self.alpha))

    def value(self, t, r):
        exponent = self.alpha - self.dim
        return np.asarray(t, dtype=np.float64) ** exponent - np.power(
            r, exponent
        )

    def _closed_primitive(self, T, r):
        m, alpha = self.dim, self.alpha
        return T**alpha / alpha - r ** (alpha - m) * T**m / m

    @property
    def finite_variance(self) -> bool:
        return self.alpha > self.dim / 2

    def describe(self) -> str:
        return f"riesz:alpha={self.alpha!r}"


@dataclass(frozen=True)
class PowerWeight(Weight):
    """w(t, r) = r^beta - t^beta, beta > 0."""

    beta: float = 1.0

    kind: ClassVar[str] = "power"

    def __post_init__(self):
        super().__post_init__()
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise WeightParameterError(
                f"Power weight needs beta > 0, got beta = {self.beta}"
            )
        object.__setattr__(self, "beta", float(self.beta))

    def value(self, t, r):
        return np.power(r, self.beta) - np.asarray(t, dtype=np.float64) ** (
            self.beta
        )

    def _closed_primitive(self, T, r):
        m, beta = self.dim, self.beta
        return r**beta * T**m / m - T ** (m + beta) / (m + beta)

    def describe(self) -> str:
        return f"power:beta={self.beta!r}"


@dataclass(frozen=True)
class CustomWeight(Weight):
    """A weight given by an expression in t and r."""

    source: str = ""
    expr: Expr = field(init=False, repr=False, compare=False)

    kind: ClassVar[str] = "custom"
    closed_form: ClassVar[bool] = False

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "expr", parse(self.source, WEIGHT_VARIABLES))

    def value(self, t, r):
        t = np.asarray(t, dtype=np.float64)
        values = evaluate(self.expr, {"t": t, "r": r})
        shape = np.broadcast_shapes(t.shape, np.shape(r))
        return np.broadcast_to(values, shape)

    def describe(self) -> str:
        return f"custom:{self.source}"


def numeric_radial_primitive(
    weight: Weight,
    T: float,
    r: float,
    settings: Optional[RuleSettings] = None,
) -> Estimate:
    """
    W(T) by graded quadrature on (0, T], for any weight.

    The innermost panel sums must decay geometrically; if they do not, the
    integral is declared divergent.

    Raises
    ------
    WeightDivergenceError
        If the inner panel sums do not decay.
    """
    _check_radius("T", T)
    _check_radius("r", r)
    m = weight.dim
    rule = resolve_settings(settings).radial_rule(T)

    def integrand(t):
        return t ** (m - 1) * weight.value(t, r)

    sums = np.abs(radial_panel_sums(integrand, rule))
    ratio = _inner_decay_ratio(sums)
    if ratio >= DIVERGENCE_RATIO:
        raise WeightDivergenceError(
            f"Radial integral of {weight.describe()} in R^{m} does not "
            f"converge at t = 0 (inner panel ratio {ratio:.4g})"
        )
    estimate = radial_integrate(integrand, rule)
    logging.debug(
        f"Numeric primitive of {weight.describe()} at T={T:g}, r={r:g}: "
        f"{estimate.value:.17g} +/- {estimate.error:.2g}"
    )
    return estimate


def _inner_decay_ratio(panel_sums: np.ndarray) -> float:
    """Mean ratio between consecutive inner panel sums."""
    k = min(DIVERGENCE_PANELS, len(panel_sums) - 1)
    if k < 1:
        return 0.0
    first, last = panel_sums[-k - 1], panel_sums[-1]
    if first == 0:
        return 0.0 if last == 0 else math.inf
    return float((last / first) ** (1.0 / k))


def numeric_mean_constant(
    weight: Weight, r: float, settings: Optional[RuleSettings] = None
) -> Estimate:
    """c_w(r) through graded quadrature of the radial primitive."""
    return numeric_radial_primitive(weight, r, r, settings).scaled(
        weight.dim / r**weight.dim
    )


def parse_weight_spec(spec: str, m: int) -> Weight:
    """
    Build a weight from its spec string.

    Parameters
    ----------
    spec : str
        ``log``, ``riesz:alpha=<real>``, ``power:beta=<real>`` or
        ``custom:<expression in t, r>``.
    m : int
        Dimension.

    Raises
    ------
    WeightSpecError
        If the spec is malformed.
    WeightParameterError
        If a parameter is out of range.
    ExprSyntaxError
        If a custom expression does not parse.
    """
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "log":
        if rest.strip():
            raise WeightSpecError(f"'log' takes no parameters: {spec!r}")
        return LogWeight(m)
    if kind == "custom":
        if not rest.strip():
            raise WeightSpecError("'custom:' needs an expression in t, r")
        return CustomWeight(m, source=rest.strip())
    if kind in ("riesz", "power"):
        name = "alpha" if kind == "riesz" else "beta"
        key, _, number = rest.partition("=")
        if key.strip() != name:
            raise WeightSpecError(
                f"Expected '{kind}:{name}=<real>', got {spec!r}"
            )
        try:
            value = float(number)
        except ValueError:
            raise WeightSpecError(
                f"{name} must be a real number, got {number!r}"
            )
        if kind == "riesz":
            return RieszWeight(m, alpha=value)
        return PowerWeight(m, beta=value)
    raise WeightSpecError(
        f"Unknown weight {kind!r}, expected one of " + ", ".join(WEIGHT_KINDS)
    )
