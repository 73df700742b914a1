import numpy as np
import pytest

from weighted_means.quadrature.summation import (
    chunk_moments,
    compensated_row_sums,
    compensated_sum,
    merge_moments,
)


def test_compensated_sum_recovers_small_terms():
    values = np.array([1.0] + [1e-16] * 10_000)
    assert compensated_sum(values) == pytest.approx(1.0 + 1e-12, abs=4e-16)


def test_compensated_row_sums():
    values = np.arange(12, dtype=float).reshape(3, 4)
    np.testing.assert_array_equal(compensated_row_sums(values), [6, 22, 38])
    with pytest.raises(ValueError):
        compensated_row_sums(np.ones(3))


def test_merged_moments_match_whole_sample():
    rng = np.random.default_rng(3)
    sample = rng.normal(2.0, 3.0, size=1000)
    chunks = [chunk_moments(part) for part in np.array_split(sample, 7)]
    count, mean, m2 = merge_moments(chunks)
    assert count == 1000
    assert mean == pytest.approx(sample.mean(), rel=1e-13)
    assert m2 / (count - 1) == pytest.approx(sample.var(ddof=1), rel=1e-12)


def test_empty_chunks_are_skipped():
    assert chunk_moments(np.array([])) == (0, 0.0, 0.0)
    assert merge_moments([(0, 0.0, 0.0), (2, 1.5, 0.5)]) == (2, 1.5, 0.5)
