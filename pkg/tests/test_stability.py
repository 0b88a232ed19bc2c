"""Tests for the subsample-refit stability filter."""

import numpy as np
import pytest

from mvbiclust import (
    Bicluster,
    EmptySampleError,
    RestrictionWeights,
    SyntheticConfig,
    generate,
    stability_filter,
)
from mvbiclust.seeds import rng_for
from mvbiclust.stability import coupled_components, subsample_indices


def planted_pair():
    data = generate(
        SyntheticConfig(n_rows=80, n_cols=(40, 40), k=3, noise_std=1.0, seed=2)
    )
    return data.views


def random_biclustering(rng, n, m, k):
    out = []
    for _ in range(k):
        rows = rng.choice(n, size=rng.integers(1, n // 2), replace=False)
        cols = rng.choice(m, size=rng.integers(1, m // 2), replace=False)
        out.append(Bicluster.of(rows.tolist(), cols.tolist()))
    return tuple(out)


# ------------------------------------------------------------ components


def test_components_no_coupling_is_singletons():
    assert coupled_components(np.zeros((3, 3))) == [[0], [1], [2]]


def test_components_chain_merges():
    w = np.zeros((4, 4))
    w[0, 1] = 1.0
    w[2, 3] = 0.5
    assert coupled_components(w) == [[0, 1], [2, 3]]
    w[1, 2] = 2.0
    assert coupled_components(w) == [[0, 1, 2, 3]]


def test_components_read_upper_triangle_only():
    w = np.zeros((3, 3))
    w[2, 0] = 5.0  # lower triangle: ignored
    assert coupled_components(w) == [[0], [1], [2]]
    w[0, 2] = 5.0
    assert coupled_components(w) == [[0, 2], [1]]


# ------------------------------------------------------------ subsampling


def test_subsample_shared_within_component():
    idx = subsample_indices([20, 20, 30], [[0, 1], [2]], 0.9, rng_for(0))
    np.testing.assert_array_equal(idx[0], idx[1])
    assert len(idx[0]) == 18  # floor(0.9 * 20)
    assert len(idx[2]) == 27
    assert np.all(np.diff(idx[2]) > 0)  # sorted, no repeats


def test_subsample_empty_raises():
    with pytest.raises(EmptySampleError):
        subsample_indices([1], [[0]], 0.9, rng_for(0))


def test_subsample_full_rate_keeps_everything():
    idx = subsample_indices([10], [[0]], 1.0, rng_for(3))
    np.testing.assert_array_equal(idx[0], np.arange(10))


# ------------------------------------------------------------ filtering


def test_threshold_zero_is_identity():
    rng = np.random.default_rng(0)
    views = [np.abs(rng.normal(2, 1, (20, 12)))]
    bics = (random_biclustering(rng, 20, 12, 4),)
    out = stability_filter(views, bics, RestrictionWeights.zeros(1), threshold=0.0, seed=0)
    assert out == bics  # exact, no refits run


def test_all_empty_passes_through():
    rng = np.random.default_rng(1)
    views = [np.abs(rng.normal(2, 1, (20, 12)))]
    bics = ((Bicluster.empty(), Bicluster.empty()),)
    out = stability_filter(views, bics, RestrictionWeights.zeros(1), threshold=0.5, seed=0)
    assert out == bics


def test_filter_only_empties_or_keeps():
    views = planted_pair()
    weights = RestrictionWeights.uniform(2, phi=200.0)
    rng = np.random.default_rng(2)
    bics = tuple(random_biclustering(rng, 80, 40, 3) for _ in range(2))
    out = stability_filter(views, bics, weights, threshold=0.4, seed=0)
    for v in range(2):
        for orig, kept in zip(bics[v], out[v]):
            assert kept == orig or kept == Bicluster.empty()


def test_planted_biclusters_survive_moderate_threshold():
    from mvbiclust import extract, remove_spurious, solve

    views = planted_pair()
    weights = RestrictionWeights.uniform(2, phi=200.0)
    fac = solve(views, 3, weights, seed=0)
    bics = remove_spurious(views, fac, extract(fac), weights, seed=(0, 1, 3))
    before = [sum(1 for b in bv if not b.is_empty) for bv in bics]
    out = stability_filter(views, bics, weights, threshold=0.2, seed=0)
    after = [sum(1 for b in bv if not b.is_empty) for bv in out]
    assert after == before  # clean planted structure is stable


def test_survivors_monotone_in_threshold():
    views = planted_pair()
    weights = RestrictionWeights.uniform(2, phi=200.0)
    rng = np.random.default_rng(5)
    bics = tuple(random_biclustering(rng, 80, 40, 3) for _ in range(2))
    counts = []
    for omega in (0.0, 0.3, 0.6, 1.0):
        out = stability_filter(views, bics, weights, threshold=omega, seed=9)
        counts.append(sum(sum(1 for b in bv if not b.is_empty) for bv in out))
    assert counts == sorted(counts, reverse=True)
    assert counts[0] == 6  # omega 0 keeps all


def test_filter_deterministic():
    views = planted_pair()
    weights = RestrictionWeights.uniform(2, phi=200.0)
    rng = np.random.default_rng(3)
    bics = tuple(random_biclustering(rng, 80, 40, 2) for _ in range(2))
    a = stability_filter(views, bics, weights, threshold=0.4, seed=4)
    b = stability_filter(views, bics, weights, threshold=0.4, seed=4)
    assert a == b
