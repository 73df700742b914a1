"""
Exact dimensional constants: the area of the unit sphere and ball volumes.
"""

import math

MIN_DIMENSION = 2
MAX_DIMENSION = 16


class DimensionError(ValueError):
    """Raised when a dimension is outside the supported range [2, 16]."""

    pass


def check_dimension(m: int) -> int:
    if isinstance(m, bool) or int(m) != m:
        raise DimensionError(f"Dimension must be an integer, got {m!r}")
    m = int(m)
    if not MIN_DIMENSION <= m <= MAX_DIMENSION:
        raise DimensionError(
            f"Dimension {m} is outside the supported range "
            f"[{MIN_DIMENSION}, {MAX_DIMENSION}]"
        )
    return m


def sphere_area(m: int) -> float:
    """
    Total area of the unit sphere in R^m, 2 pi^(m/2) / Gamma(m/2).

    Evaluated with the two-step recursion w_m = 2 pi w_(m-2) / (m - 2),
    seeded by w_2 = 2 pi and w_3 = 4 pi, so no Gamma function is needed.

    Parameters
    ----------
    m : int
        Dimension, 2 <= m <= 16.

    Returns
    -------
    float
        The area of the unit sphere S^(m-1).

    Raises
    ------
    DimensionError
        If m is outside the supported range.
    """
    m = check_dimension(m)
    if m % 2 == 0:
        area, start = 2 * math.pi, 4
    else:
        area, start = 4 * math.pi, 5
    for k in range(start, m + 1, 2):
        area = 2 * math.pi * area / (k - 2)
    return area


def ball_volume(m: int, r: float) -> float:
    """
    Volume of a ball of radius r in R^m, sphere_area(m) * r^m / m.

    Raises
    ------
    DimensionError
        If m is outside the supported range.
    ValueError
        If r is not positive.
    """
    if not r > 0:
        raise ValueError(f"Ball radius must be positive, got {r}")
    return sphere_area(m) * r**m / m
