"""Tests for the shuffled-refit spurious-bicluster filter."""

import numpy as np
import pytest

from mvbiclust import (
    Bicluster,
    EmptySampleError,
    InsufficientRepetitionsError,
    RestrictionWeights,
    SyntheticConfig,
    extract,
    generate,
    jsd,
    remove_spurious,
    shuffle_view,
    solve,
)
from mvbiclust.seeds import rng_for
from mvbiclust.spurious import bicluster_test_score, null_row_factors, null_threshold


def planted():
    data = generate(
        SyntheticConfig(n_rows=40, n_cols=(24,), k=3, noise_std=1.0, seed=2)
    )
    return data.views


# ------------------------------------------------------------ shuffle


def test_shuffle_preserves_multiset_and_shape():
    rng = np.random.default_rng(0)
    x = np.arange(24, dtype=float).reshape(4, 6)
    y = shuffle_view(x, rng_for(1))
    assert y.shape == x.shape
    np.testing.assert_array_equal(np.sort(y.ravel()), np.sort(x.ravel()))
    assert not np.array_equal(y, x)  # 24 distinct entries: a fixed shuffle moving none is (1/24!)
    np.testing.assert_array_equal(x, np.arange(24, dtype=float).reshape(4, 6))  # input untouched


def test_shuffle_constant_matrix_is_unchanged():
    x = np.full((3, 5), 2.5)
    np.testing.assert_array_equal(shuffle_view(x, rng_for(0)), x)


def test_shuffle_deterministic_given_rng():
    x = np.arange(12, dtype=float).reshape(3, 4)
    a = shuffle_view(x, rng_for(7))
    b = shuffle_view(x, rng_for(7))
    np.testing.assert_array_equal(a, b)


# ------------------------------------------------------------ divergence


def test_jsd_self_is_exactly_zero():
    rng = np.random.default_rng(1)
    x = rng.normal(size=200)
    assert jsd(x, x) == 0.0


def test_jsd_symmetric_and_bounded():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a = rng.normal(size=100)
        b = rng.normal(loc=rng.uniform(-2, 2), size=80)
        d1, d2 = jsd(a, b), jsd(b, a)
        assert d1 == pytest.approx(d2, abs=1e-12)
        assert -1e-12 <= d1 <= 1.0 + 1e-12


def test_jsd_disjoint_supports_is_one():
    a = np.zeros(50)
    b = np.full(50, 9.0)
    assert jsd(a, b) == pytest.approx(1.0, abs=1e-12)


def test_jsd_degenerate_range_is_zero():
    a = np.full(10, 3.0)
    assert jsd(a, a.copy()) == 0.0


def test_jsd_identical_distribution_different_samples_is_small():
    rng = np.random.default_rng(3)
    a = rng.normal(size=5000)
    b = rng.normal(size=5000)
    assert jsd(a, b) < 0.05


def test_jsd_empty_sample_raises():
    with pytest.raises(EmptySampleError):
        jsd(np.array([]), np.ones(5))
    with pytest.raises(EmptySampleError):
        jsd(np.ones(5), np.array([]))


# ------------------------------------------------------------ null ensemble


def test_null_row_factors_shape_and_determinism():
    views = planted()
    nulls_a = null_row_factors(views, 3, RestrictionWeights.zeros(1), seed=5, n_shuffles=3)
    nulls_b = null_row_factors(views, 3, RestrictionWeights.zeros(1), seed=5, n_shuffles=3)
    assert len(nulls_a) == 3
    assert len(nulls_a[0]) == 1  # one view
    assert nulls_a[0][0].shape == (40, 3)
    for rep in range(3):
        np.testing.assert_array_equal(nulls_a[rep][0], nulls_b[rep][0])


def test_null_row_factors_too_few_reps_raises():
    views = planted()
    with pytest.raises(InsufficientRepetitionsError):
        null_row_factors(views, 3, RestrictionWeights.zeros(1), seed=0, n_shuffles=1)


def test_null_threshold_is_max_over_cross_rep_column_pairs():
    # hand-built ensemble, k = 2, 3 reps: 3 rep pairs x 4 column pairs
    rng = np.random.default_rng(4)
    cols = [rng.normal(loc=mu, size=(30, 2)) for mu in (0.0, 1.0, 5.0)]
    t_hat = null_threshold(cols, bins=50)
    expected = max(
        jsd(cols[a][:, i], cols[b][:, j])
        for a in range(3)
        for b in range(a + 1, 3)
        for i in range(2)
        for j in range(2)
    )
    assert t_hat == pytest.approx(expected, abs=1e-15)


def test_null_threshold_identical_columns_is_zero():
    # every column of every rep identical: all cross-rep pairs diverge by 0
    v = np.random.default_rng(5).normal(size=20)
    col = np.stack([v, v], axis=1)
    assert null_threshold([col, col.copy()], bins=50) == 0.0


def test_bicluster_test_score_is_mean_over_null_columns():
    rng = np.random.default_rng(6)
    column = rng.normal(size=40)
    nulls = [rng.normal(loc=m, size=(40, 2)) for m in (0.0, 2.0)]
    got = bicluster_test_score(column, nulls, bins=50)
    expected = np.mean(
        [jsd(column, nulls[r][:, j]) for r in range(2) for j in range(2)]
    )
    assert got == pytest.approx(expected, abs=1e-15)


# ------------------------------------------------------------ filter


def test_remove_spurious_only_empties_or_keeps():
    views = planted()
    weights = RestrictionWeights.zeros(1)
    fac = solve(views, 3, weights, seed=0)
    bics = extract(fac)
    filtered = remove_spurious(views, fac, bics, weights, seed=(0, 1, 3))
    assert len(filtered) == 1
    assert len(filtered[0]) == 3
    for orig, kept in zip(bics[0], filtered[0]):
        assert kept == orig or kept == Bicluster.empty()


def test_remove_spurious_retains_planted_structure():
    # needs enough rows for the null threshold to settle; tiny views are
    # legitimately over-filtered because the max over null pairs is noisy
    data = generate(
        SyntheticConfig(n_rows=80, n_cols=(40,), k=3, noise_std=1.0, seed=2)
    )
    weights = RestrictionWeights.zeros(1)
    fac = solve(data.views, 3, weights, seed=0)
    bics = extract(fac)
    filtered = remove_spurious(data.views, fac, bics, weights, seed=(0, 1, 3))
    kept = sum(1 for b in filtered[0] if not b.is_empty)
    assert kept == 3  # clean planted blocks at sigma=1 all survive


def test_remove_spurious_deterministic():
    views = planted()
    weights = RestrictionWeights.zeros(1)
    fac = solve(views, 3, weights, seed=0)
    bics = extract(fac)
    a = remove_spurious(views, fac, bics, weights, seed=7)
    b = remove_spurious(views, fac, bics, weights, seed=7)
    assert a == b


def test_remove_spurious_passes_empty_through():
    views = planted()
    weights = RestrictionWeights.zeros(1)
    fac = solve(views, 3, weights, seed=0)
    bics = [list(extract(fac)[0])]
    bics[0][1] = Bicluster.empty()
    filtered = remove_spurious(views, fac, tuple(map(tuple, bics)), weights, seed=1)
    assert filtered[0][1].is_empty
