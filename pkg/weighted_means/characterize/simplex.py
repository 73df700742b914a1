"""
Nelder-Mead simplex minimisation with the standard coefficients
(reflection 1, expansion 2, contraction 0.5, shrink 0.5) and a simplex
diameter stopping rule.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@dataclass
class SimplexResult:
    """
    Attributes
    ----------
    x : np.ndarray
        Best vertex found.
    value : float
        Objective at ``x``.
    iterations : int
        Iterations run.
    converged : bool
        True if the diameter dropped below the tolerance.
    n_evaluations : int
        Objective evaluations spent.
    trace : list of dict
        One entry per iteration: iteration, x, value, diameter, step.
    """

    x: np.ndarray
    value: float
    iterations: int
    converged: bool
    n_evaluations: int
    trace: List[dict] = field(default_factory=list)


def simplex_diameter(vertices: np.ndarray) -> float:
    """Largest distance between two vertices."""
    differences = vertices[:, None, :] - vertices[None, :, :]
    return float(np.sqrt(np.max(np.sum(differences**2, axis=-1))))


def minimize_simplex(
    func: Callable[[np.ndarray], float],
    x0,
    initial_edge: float,
    max_iterations: int = 500,
    diameter_tol: float = 1e-8,
    callback: Optional[Callable[[int, np.ndarray], bool]] = None,
) -> SimplexResult:
    """
    Minimise ``func`` without derivatives.

    Parameters
    ----------
    func : callable
        Objective of a 1D array. May return ``inf`` to reject a point.
    x0 : array-like
        Starting vertex; the others are x0 + initial_edge * e_i.
    initial_edge : float
        Edge length of the initial simplex.
    max_iterations : int
        Iteration cap.
    diameter_tol : float
        Stop when the simplex diameter is below this.
    callback : callable, optional
        Called as ``callback(iteration, vertices)`` before each iteration.
        Returning True means the objective changed (e.g. its accuracy was
        tightened) and the vertices are re-evaluated.

    Returns
    -------
    SimplexResult
    """
    x0 = np.asarray(x0, dtype=np.float64)
    n = x0.size
    vertices = np.vstack([x0, x0 + initial_edge * np.eye(n)])
    evaluations = 0

    def evaluate(x):
        nonlocal evaluations
        evaluations += 1
        return float(func(x))

    values = np.array([evaluate(v) for v in vertices])
    trace = []
    converged = False
    iteration = 0

    while iteration < max_iterations:
        order = np.argsort(values, kind="stable")
        vertices, values = vertices[order], values[order]
        diameter = simplex_diameter(vertices)
        if diameter < diameter_tol:
            converged = True
            break
        if callback is not None and callback(iteration, vertices):
            values = np.array([evaluate(v) for v in vertices])
            order = np.argsort(values, kind="stable")
            vertices, values = vertices[order], values[order]

        iteration += 1
        best, second_worst, worst = values[0], values[-2], values[-1]
        centroid = vertices[:-1].mean(axis=0)
        reflected = centroid + REFLECT * (centroid - vertices[-1])
        f_reflected = evaluate(reflected)

        if f_reflected < best:
            expanded = centroid + EXPAND * (reflected - centroid)
            f_expanded = evaluate(expanded)
            if f_expanded < f_reflected:
                step = "expand"
                vertices[-1], values[-1] = expanded, f_expanded
            else:
                step = "reflect"
                vertices[-1], values[-1] = reflected, f_reflected
        elif f_reflected < second_worst:
            step = "reflect"
            vertices[-1], values[-1] = reflected, f_reflected
        else:
            if f_reflected < worst:
                contracted = centroid + CONTRACT * (reflected - centroid)
                accept = evaluate(contracted)
                accepted = accept <= f_reflected
            else:
                contracted = centroid + CONTRACT * (vertices[-1] - centroid)
                accept = evaluate(contracted)
                accepted = accept < worst
            if accepted:
                step = "contract"
                vertices[-1], values[-1] = contracted, accept
            else:
                step = "shrink"
                vertices[1:] = vertices[0] + SHRINK * (
                    vertices[1:] - vertices[0]
                )
                values[1:] = [evaluate(v) for v in vertices[1:]]

        best_index = int(np.argmin(values))
        trace.append(
            {
                "iteration": iteration,
                "x": vertices[best_index].tolist(),
                "value": float(values[best_index]),
                "diameter": diameter,
                "step": step,
            }
        )
        logging.debug(
            f"Simplex iteration {iteration}: {step}, best "
            f"{values[best_index]:.6g}, diameter {diameter:.3g}"
        )

    best_index = int(np.argmin(values))
    return SimplexResult(
        x=vertices[best_index].copy(),
        value=float(values[best_index]),
        iterations=iteration,
        converged=converged,
        n_evaluations=evaluations,
        trace=trace,
    )
