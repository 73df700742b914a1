"""
Seeded Monte Carlo integration for any supported dimension.

The sample index range is split into fixed-size chunks, each with its own
RNG stream spawned from the seed. Chunks may run concurrently; their
statistics are merged in chunk order, so results depend only on the seed
and the chunk size.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, TypeVar

import numpy as np
from tqdm import tqdm

from weighted_means.general.system import get_num_workers
from weighted_means.geometry.shapes import Ball
from weighted_means.quadrature.rules import (
    Estimate,
    RuleSettings,
    resolve_settings,
)
from weighted_means.quadrature.summation import chunk_moments, merge_moments

MIN_SAMPLES = 1000

T = TypeVar("T")


class EmptyDomainError(RuntimeError):
    """Raised when no sample hit the domain."""

    pass


def resolve_workers(settings: RuleSettings) -> int:
    if settings.workers is not None:
        return max(1, int(settings.workers))
    return get_num_workers()


def run_chunked(
    n: int,
    seed,
    chunk_fn: Callable[[np.random.Generator, int], T],
    settings: Optional[RuleSettings] = None,
    progress: bool = False,
) -> List[T]:
    """
    Run ``chunk_fn(rng, size)`` over the chunks of n samples.

    Parameters
    ----------
    n : int
        Total number of samples.
    seed : int or sequence of int
        Entropy for ``numpy.random.SeedSequence``.
    chunk_fn : callable
        Receives the chunk's generator and its sample count.
    settings : RuleSettings, optional
        Supplies chunk size and worker count.
    progress : bool
        Show a progress bar over chunks.

    Returns
    -------
    list
        Chunk results in chunk order.
    """
    settings = resolve_settings(settings)
    chunk_size = settings.chunk_size
    n_chunks = max(1, math.ceil(n / chunk_size))
    sizes = [chunk_size] * (n_chunks - 1) + [n - chunk_size * (n_chunks - 1)]
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    workers = min(resolve_workers(settings), n_chunks)
    logging.debug(
        f"Monte Carlo: {n} samples in {n_chunks} chunks on {workers} workers"
    )

    def run(index):
        return chunk_fn(np.random.default_rng(streams[index]), sizes[index])

    indices = range(n_chunks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = executor.map(run, indices)
            return list(tqdm(results, total=n_chunks, disable=not progress))
    return [run(i) for i in tqdm(indices, disable=not progress)]


def uniform_in_bbox(
    rng: np.random.Generator, bbox: np.ndarray, size: int
) -> np.ndarray:
    lower, upper = bbox[:, 0], bbox[:, 1]
    return lower + rng.random((size, len(lower))) * (upper - lower)


def uniform_directions(
    rng: np.random.Generator, m: int, size: int
) -> np.ndarray:
    gaussian = rng.standard_normal((size, m))
    return gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True)


def bbox_volume(bbox: np.ndarray) -> float:
    return float(np.prod(bbox[:, 1] - bbox[:, 0]))


def mc_sphere_sample(
    m: int, n: int, seed, settings: Optional[RuleSettings] = None
) -> np.ndarray:
    """
    Uniform random directions on the unit sphere S^(m-1).

    Returns
    -------
    np.ndarray
        Array of shape (n, m) of unit vectors, reproducible for a seed.
    """
    chunks = run_chunked(
        n, seed, lambda rng, size: uniform_directions(rng, m, size), settings
    )
    return np.concatenate(chunks)


def _estimate_from_moments(moments, scale: float) -> Estimate:
    count, mean, m2 = moments
    variance = m2 / (count - 1) if count > 1 else 0.0
    return Estimate(
        scale * mean, scale * math.sqrt(variance / count), "mc", count
    )


def mc_integrate_indicator(
    domain,
    g: Callable[[np.ndarray], np.ndarray],
    n: int,
    seed,
    settings: Optional[RuleSettings] = None,
    progress: bool = False,
) -> Estimate:
    """
    Monte Carlo integral of g over a domain given by an indicator.

    Samples are uniform in the domain's bounding box; the value is
    bbox_volume * mean(g * 1_D) and the error its standard error.

    Parameters
    ----------
    domain : ImplicitDomain or StarDomain
        Anything with ``bbox`` (m x 2 array) and ``contains(points)``.
    g : callable
        Vectorised integrand on points of shape (k, m).
    n : int
        Number of samples, at least 1000.
    seed : int
        Base seed.

    Raises
    ------
    EmptyDomainError
        If no sample falls inside the domain.
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"Need at least {MIN_SAMPLES} samples, got {n}")
    bbox = np.asarray(domain.bbox, dtype=np.float64)

    def chunk(rng, size):
        points = uniform_in_bbox(rng, bbox, size)
        inside = domain.contains(points)
        values = np.zeros(size)
        if inside.any():
            values[inside] = g(points[inside])
        return int(inside.sum()), chunk_moments(values)

    results = run_chunked(n, seed, chunk, settings, progress)
    hits = sum(r[0] for r in results)
    if hits == 0:
        raise EmptyDomainError("domain not detected in bbox")
    return _estimate_from_moments(
        merge_moments([r[1] for r in results]), bbox_volume(bbox)
    )


def mc_integrate_ball(
    g: Callable[[np.ndarray], np.ndarray],
    ball: Ball,
    n: int,
    seed,
    settings: Optional[RuleSettings] = None,
    progress: bool = False,
) -> Estimate:
    """
    Monte Carlo integral of g over a ball with samples uniform in the ball,
    for any supported dimension. Value is |B| * mean(g).
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"Need at least {MIN_SAMPLES} samples, got {n}")
    m = ball.dim
    center = ball.center.as_array()

    def chunk(rng, size):
        directions = uniform_directions(rng, m, size)
        radii = ball.radius * rng.random(size) ** (1.0 / m)
        values = np.asarray(g(center + radii[:, None] * directions))
        if not np.all(np.isfinite(values)):
            raise ArithmeticError("Integrand is not finite at a sample")
        return chunk_moments(values)

    results = run_chunked(n, seed, chunk, settings, progress)
    return _estimate_from_moments(merge_moments(results), ball.volume)


def mc_sphere_mean(
    g: Callable[[np.ndarray], np.ndarray],
    m: int,
    n: int,
    seed,
    settings: Optional[RuleSettings] = None,
    progress: bool = False,
) -> Estimate:
    """
    Monte Carlo mean over the unit sphere S^(m-1) of g, a vectorised
    function of unit directions of shape (k, m).
    """
    if n < MIN_SAMPLES:
        raise ValueError(f"Need at least {MIN_SAMPLES} samples, got {n}")

    def chunk(rng, size):
        values = np.asarray(g(uniform_directions(rng, m, size)))
        if not np.all(np.isfinite(values)):
            raise ArithmeticError("Integrand is not finite at a sample")
        return chunk_moments(values)

    results = run_chunked(n, seed, chunk, settings, progress)
    return _estimate_from_moments(merge_moments(results), 1.0)
