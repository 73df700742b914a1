from typing import Optional, Sequence

import pandas as pd
from tqdm import tqdm

from weighted_means.characterize.functional import deficiency, matched_radius
from weighted_means.general.config import packaged_default
from weighted_means.geometry.domains import StarDomain
from weighted_means.quadrature.rules import RuleSettings
from weighted_means.weights.weights import Weight

SWEEP_COLUMNS = ("amplitude", "r", "deficiency", "error", "consistent")


def perturbation_sweep(
    r0: float,
    amplitudes: Sequence[float],
    mode: int,
    weight: Weight,
    settings: Optional[RuleSettings] = None,
    tol: Optional[float] = None,
    progress: bool = False,
) -> pd.DataFrame:
    """
    Deficiency of the 2D star domains rho(theta) = r0 + a cos(k theta) at
    their matched radius, evaluated at the anchor.

    Parameters
    ----------
    r0 : float
        Unperturbed radius.
    amplitudes : sequence of float
        Perturbation amplitudes, 0 <= a < r0.
    mode : int
        Fourier index k >= 1.
    weight : Weight
        2D weight.
    tol : float, optional
        Threshold for calling delta zero at a = 0; packaged default if None.

    Returns
    -------
    pd.DataFrame
        Columns amplitude, r, deficiency, error and consistent: delta is
        zero within max(tol, 3 * error) at a = 0 and exceeds 3 * error for
        a > 0.

    Raises
    ------
    ValueError
        On an amplitude outside [0, r0), a mode below 1 or a weight not in
        2D.
    """
    if not r0 > 0:
        raise ValueError(f"r0 must be positive, got {r0}")
    if mode < 1:
        raise ValueError(f"Fourier mode must be >= 1, got {mode}")
    if weight.dim != 2:
        raise ValueError("Perturbation sweeps use 2D weights")
    for a in amplitudes:
        if not 0 <= a < r0:
            raise ValueError(f"Amplitude {a} must lie in [0, r0 = {r0})")
    if tol is None:
        tol = packaged_default("tolerances", "ball")

    rows = []
    for a in tqdm(amplitudes, disable=not progress):
        cos = [0.0] * (mode - 1) + [float(a)]
        domain = StarDomain.fourier((0.0, 0.0), r0, cos=cos)
        r = matched_radius(domain, settings)
        result = deficiency(
            domain, domain.anchor, r, weight, "star", settings, tol
        )
        error = result.phi.error
        if a == 0:
            consistent = abs(result.value) <= max(tol, 3 * error)
        else:
            consistent = result.value > 3 * error
        rows.append((float(a), r, result.value, error, consistent))
    return pd.DataFrame(rows, columns=list(SWEEP_COLUMNS))
