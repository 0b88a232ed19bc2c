"""Removal of biclusters indistinguishable from structure found in noise.

The factorisation happily produces dense membership columns on data with no
block structure at all. To catch these, the fit is repeated on entry-shuffled
copies of the views; the divergence between a real membership column and the
shuffled-fit columns is compared against the divergences the shuffled fits
show among themselves. A bicluster whose column looks no more unusual than
null-vs-null is discarded.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import EmptySampleError, InsufficientRepetitionsError
from .factorise import solve
from .seeds import rng_for
from .types import Bicluster, RestrictionWeights, TriFactors


def shuffle_view(x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random permutation of all entries, preserving shape."""
    flat = np.asarray(x).ravel().copy()
    rng.shuffle(flat)
    return flat.reshape(x.shape)


def jsd(a: np.ndarray, b: np.ndarray, bins: int = 50) -> float:
    """Jensen-Shannon divergence (base 2) between two samples.

    Both samples are histogrammed on their pooled min-max range. A degenerate
    pooled range (all values identical) gives 0. Values lie in [0, 1] and the
    measure is symmetric.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise EmptySampleError("divergence needs two non-empty samples")
    lo = min(a.min(), b.min())
    hi = max(a.max(), b.max())
    if lo == hi:
        return 0.0
    p, _ = np.histogram(a, bins=bins, range=(lo, hi))
    q, _ = np.histogram(b, bins=bins, range=(lo, hi))
    p = p / p.sum()
    q = q / q.sum()
    mid = 0.5 * (p + q)

    def kl(x, y):
        mask = x > 0
        return float(np.sum(x[mask] * np.log2(x[mask] / y[mask])))

    return 0.5 * kl(p, mid) + 0.5 * kl(q, mid)


def null_row_factors(
    views: Sequence[np.ndarray],
    k: int,
    weights: RestrictionWeights,
    *,
    seed=0,
    n_shuffles: int = 10,
    init_noise: float = 0.05,
    tol: float = 1e-6,
    max_iters: int = 1000,
) -> list[list[np.ndarray]]:
    """Row factors from refits on entry-shuffled copies of the views.

    Returns one list of per-view row-factor matrices per repetition.
    """
    if n_shuffles < 2:
        raise InsufficientRepetitionsError(
            f"shuffled refits need at least 2 repetitions, got {n_shuffles}"
        )
    out = []
    for rep in range(n_shuffles):
        rng = rng_for(seed, rep, 0)
        shuffled = [shuffle_view(x, rng) for x in views]
        fac = solve(
            shuffled,
            k,
            weights,
            seed=(seed, rep, 1),
            init_noise=init_noise,
            tol=tol,
            max_iters=max_iters,
        )
        out.append(fac.row_factors)
    return out


def null_threshold(null_cols: Sequence[np.ndarray], bins: int) -> float:
    """Largest divergence the null fits show among themselves.

    null_cols holds one (n, k) row-factor matrix per repetition; the threshold
    is the max divergence over all cross-repetition column pairs.
    """
    n_rep = len(null_cols)
    k = null_cols[0].shape[1]
    worst = 0.0
    for a in range(n_rep):
        for b in range(a + 1, n_rep):
            for i in range(k):
                for j in range(k):
                    worst = max(worst, jsd(null_cols[a][:, i], null_cols[b][:, j], bins))
    return worst


def bicluster_test_score(
    column: np.ndarray,
    null_cols: Sequence[np.ndarray],
    bins: int,
) -> float:
    """Mean divergence of one membership column against every null column."""
    vals = [
        jsd(column, nf[:, j], bins)
        for nf in null_cols
        for j in range(nf.shape[1])
    ]
    return float(np.mean(vals))


def remove_spurious(
    views: Sequence[np.ndarray],
    fac: TriFactors,
    biclusters: Sequence[Sequence[Bicluster]],
    weights: RestrictionWeights,
    *,
    seed=0,
    n_shuffles: int = 10,
    bins: int = 50,
    init_noise: float = 0.05,
    tol: float = 1e-6,
    max_iters: int = 1000,
) -> tuple[tuple[Bicluster, ...], ...]:
    """Empty out biclusters whose membership column passes for noise.

    Views are treated independently: each gets its own null threshold from its
    own shuffled-refit columns. A bicluster is removed when the mean divergence
    of its matched row-factor column against the null columns falls strictly
    below the largest null-vs-null divergence.
    """
    k = fac.rank
    nulls = null_row_factors(
        views,
        k,
        weights,
        seed=seed,
        n_shuffles=n_shuffles,
        init_noise=init_noise,
        tol=tol,
        max_iters=max_iters,
    )
    result = []
    for v in range(len(views)):
        null_cols = [nulls[rep][v] for rep in range(n_shuffles)]
        threshold = null_threshold(null_cols, bins)
        kept = []
        for l, bic in enumerate(biclusters[v]):
            if bic.is_empty:
                kept.append(bic)
                continue
            match = int(np.argmax(fac.mixing[v][:, l]))
            score = bicluster_test_score(fac.row_factors[v][:, match], null_cols, bins)
            kept.append(Bicluster.empty() if score < threshold else bic)
        result.append(tuple(kept))
    return tuple(result)
