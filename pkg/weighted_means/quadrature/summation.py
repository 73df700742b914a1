"""
Compensated summation kernels. All reductions in the package go through
these so that results do not depend on how work was split up.
"""

from typing import Sequence, Tuple

import numpy as np
from numba import njit


@njit
def _kahan_rows(values: np.ndarray) -> np.ndarray:
    n_rows, n_cols = values.shape
    out = np.empty(n_rows, dtype=np.float64)
    for i in range(n_rows):
        total = 0.0
        compensation = 0.0
        for j in range(n_cols):
            y = values[i, j] - compensation
            t = total + y
            compensation = (t - total) - y
            total = t
        out[i] = total
    return out


def compensated_row_sums(values: np.ndarray) -> np.ndarray:
    """
    Kahan sum of each row of a 2D array, traversing columns left to right.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("Expected a 2D array")
    return _kahan_rows(values)


def compensated_sum(values: np.ndarray) -> float:
    """Kahan sum of a 1D array, in index order."""
    values = np.ascontiguousarray(values, dtype=np.float64).reshape(1, -1)
    return float(_kahan_rows(values)[0])


def merge_moments(
    chunks: Sequence[Tuple[int, float, float]],
) -> Tuple[int, float, float]:
    """
    Merge per-chunk (count, mean, M2) statistics in the given order
    (Chan et al. pairwise update). M2 is the sum of squared deviations.
    """
    count, mean, m2 = 0, 0.0, 0.0
    for n_b, mean_b, m2_b in chunks:
        if n_b == 0:
            continue
        total = count + n_b
        delta = mean_b - mean
        mean = mean + delta * n_b / total
        m2 = m2 + m2_b + delta * delta * count * n_b / total
        count = total
    return count, mean, m2


def chunk_moments(values: np.ndarray) -> Tuple[int, float, float]:
    """(count, mean, M2) of a 1D sample, using compensated sums."""
    n = values.size
    if n == 0:
        return 0, 0.0, 0.0
    mean = compensated_sum(values) / n
    m2 = compensated_sum((values - mean) ** 2)
    return n, mean, m2
