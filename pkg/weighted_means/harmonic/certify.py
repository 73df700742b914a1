from typing import Callable

import numpy as np

from weighted_means.geometry.shapes import PointLike, as_array


def laplacian_fd(
    f: Callable[[np.ndarray], np.ndarray], x: PointLike, h: float = 1e-3
) -> float:
    """
    Central second-difference Laplacian

        sum_i [f(x + h e_i) - 2 f(x) + f(x - h e_i)] / h^2.

    Parameters
    ----------
    f : callable
        Vectorised function on points of shape (k, m).
    x : point-like
        Where to evaluate.
    h : float
        Step, > 0.

    Returns
    -------
    float
    """
    if not h > 0:
        raise ValueError(f"Step must be positive, got {h}")
    x = as_array(x)
    m = x.size
    steps = h * np.eye(m)
    stencil = np.concatenate([x[None, :], x + steps, x - steps])
    values = np.asarray(f(stencil), dtype=np.float64)
    centre, forward, backward = values[0], values[1 : m + 1], values[m + 1 :]
    return float(np.sum(forward - 2 * centre + backward) / h**2)


def certify_harmonic(
    u: Callable[[np.ndarray], np.ndarray], points: np.ndarray, h: float = 1e-3
) -> float:
    """Largest |laplacian_fd| of u over the given points."""
    points = np.atleast_2d(as_array(points))
    return max(abs(laplacian_fd(u, p, h)) for p in points)
