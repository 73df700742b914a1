"""
Ball recovery: with r fixed to the matched radius of D, the deficiency
delta(x) = c_w(r) - Phi_w(D, x, r) is nonnegative and vanishes only when D
is the ball B_r(x). Minimising delta over x therefore finds the centre of
a ball, and a positive minimum shows D is not a ball.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from weighted_means.characterize.functional import (
    Deficiency,
    PointOutsideDomainError,
    deficiency,
    functional_parts,
    matched_radius,
    reanchor,
)
from weighted_means.characterize.simplex import minimize_simplex
from weighted_means.general.config import packaged_default
from weighted_means.geometry.domains import DomainConstructionError, StarDomain
from weighted_means.geometry.shapes import PointLike, as_array
from weighted_means.quadrature.rules import RuleSettings, resolve_settings
from weighted_means.weights.weights import Weight

# objective value for candidates outside D
OUTSIDE_PENALTY = 1e6


@dataclass
class RecoveryReport:
    """
    Outcome of ``recover_ball``.

    Attributes
    ----------
    center : tuple of float
        Minimiser of the deficiency.
    r : float
        Matched radius of D.
    delta_min : float
        Final high-accuracy deficiency at ``center``.
    is_ball : bool
        delta_min <= max(tol, 3 * final error estimate).
    converged : bool
        The simplex diameter dropped below its tolerance.
    iterations, n_evaluations : int
        Optimiser effort.
    paths : dict
        How many objective evaluations used each path ("star", "traced",
        "mc", "outside").
    final : Deficiency
        Final evaluation, after re-anchoring at ``center`` when D is
        star-shaped about it.
    trace : pd.DataFrame
        One row per iteration.
    """

    center: tuple
    r: float
    delta_min: float
    is_ball: bool
    converged: bool
    iterations: int
    n_evaluations: int
    tolerance: float
    weight: str
    paths: dict
    final: Deficiency
    trace: pd.DataFrame = field(repr=False)

    def to_dict(self):
        return {
            "center": list(self.center),
            "r": self.r,
            "delta_min": self.delta_min,
            "is_ball": self.is_ball,
            "converged": self.converged,
            "iterations": self.iterations,
            "n_evaluations": self.n_evaluations,
            "tolerance": self.tolerance,
            "weight": self.weight,
            "paths": dict(self.paths),
            "final": self.final.to_dict(),
            "trace": self.trace.to_dict(orient="records"),
        }


def recover_ball(
    domain: StarDomain,
    weight: Weight,
    x0: Optional[PointLike] = None,
    tol: Optional[float] = None,
    settings: Optional[RuleSettings] = None,
    max_iterations: Optional[int] = None,
    diameter_tol: Optional[float] = None,
    edge_fraction: Optional[float] = None,
    mc_start: Optional[int] = None,
) -> RecoveryReport:
    """
    Search for the centre x minimising delta(x) at the matched radius.

    Each objective evaluation uses the exact star path with ray-traced
    radii when D is star-shaped about the candidate, and Monte Carlo
    otherwise, with the sample count growing as the simplex shrinks. Seeds
    per evaluation come from (base seed, evaluation index).

    Parameters
    ----------
    domain : StarDomain
        The domain.
    weight : Weight
        Weight of the domain's dimension.
    x0 : point-like, optional
        Initial guess inside D; the anchor if None.
    tol : float, optional
        Verdict tolerance; packaged default (1e-7) if None.
    settings : RuleSettings, optional
        Rule sizes and Monte Carlo settings.
    max_iterations, diameter_tol, edge_fraction, mc_start : optional
        Optimiser settings; packaged defaults if None. The initial simplex
        edge is ``edge_fraction * rho_min``.

    Returns
    -------
    RecoveryReport

    Raises
    ------
    PointOutsideDomainError
        If x0 is not in D.
    """
    settings = resolve_settings(settings)
    if tol is None:
        tol = packaged_default("tolerances", "recovery")
    if max_iterations is None:
        max_iterations = packaged_default("recovery", "max_iterations", int)
    if diameter_tol is None:
        diameter_tol = packaged_default("recovery", "diameter_tol")
    if edge_fraction is None:
        edge_fraction = packaged_default("recovery", "edge_fraction")
    if mc_start is None:
        mc_start = packaged_default("recovery", "mc_start", int)

    x0 = domain.anchor.as_array() if x0 is None else as_array(x0)
    if not domain.contains(x0[None, :])[0]:
        raise PointOutsideDomainError(
            f"Initial guess {x0.tolist()} is not in D"
        )

    r = matched_radius(domain, settings)
    c_w = weight.mean_constant(r, settings)
    edge = edge_fraction * domain.rho_min
    paths = Counter()
    state = {"evaluations": 0, "n": min(mc_start, settings.mc_n)}
    logging.info(
        f"Recovering a ball from {domain.describe()} with r = {r:.10g}"
    )

    def objective(x):
        state["evaluations"] += 1
        if not domain.contains(x[None, :])[0]:
            paths["outside"] += 1
            return OUTSIDE_PENALTY
        parts = functional_parts(
            domain,
            x,
            r,
            weight,
            settings=settings,
            seed=[settings.seed, state["evaluations"]],
            n=state["n"],
        )
        paths[parts.path] += 1
        return c_w - parts.phi.value

    def tighten(iteration, vertices):
        if not paths["mc"]:
            return False
        diameter = np.ptp(vertices, axis=0).max()
        level = max(0, int(math.log2(edge / max(diameter, 1e-300))))
        n = min(settings.mc_n, mc_start * 4**level)
        if n == state["n"]:
            return False
        logging.debug(f"Monte Carlo samples per evaluation raised to {n}")
        state["n"] = n
        return True

    result = minimize_simplex(
        objective,
        x0,
        edge,
        max_iterations=max_iterations,
        diameter_tol=diameter_tol,
        callback=tighten,
    )
    if not result.converged:
        logging.warning(
            f"Simplex did not converge in {result.iterations} iterations"
        )

    final = _final_deficiency(domain, result.x, r, weight, settings, tol)
    is_ball = bool(final.value <= max(tol, 3 * final.phi.error))
    return RecoveryReport(
        center=tuple(float(c) for c in result.x),
        r=r,
        delta_min=final.value,
        is_ball=is_ball,
        converged=result.converged,
        iterations=result.iterations,
        n_evaluations=result.n_evaluations,
        tolerance=tol,
        weight=weight.describe(),
        paths=dict(paths),
        final=final,
        trace=pd.DataFrame(result.trace),
    )


def _final_deficiency(domain, center, r, weight, settings, tol):
    try:
        anchored = reanchor(domain, center)
    except (DomainConstructionError, PointOutsideDomainError):
        logging.debug("Not star-shaped about the centre: final Monte Carlo")
        return deficiency(domain, center, r, weight, "mc", settings, tol)
    return deficiency(anchored, center, r, weight, "star", settings, tol)
