"""Stability filtering: keep only biclusters that reappear under subsampling.

The data is subsampled several times (rows and columns independently), the
model refit from scratch on each subsample, and every original bicluster is
matched against the refit results. Biclusters whose mean best-match similarity
falls below a threshold are discarded as unstable. Views whose rows are
coupled must sample the same rows so the coupling stays meaningful, and
likewise for coupled columns.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import EmptySampleError
from .extraction import extract
from .factorise import solve
from .metrics import jaccard
from .seeds import rng_for
from .spurious import remove_spurious
from .types import Bicluster, RestrictionWeights


def coupled_components(weight: np.ndarray) -> list[list[int]]:
    """Connected components of views under positive coupling weights.

    The weight matrix is read as an undirected graph (upper triangle);
    components come out ordered by their smallest view index.
    """
    n = weight.shape[0]
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in range(n):
                if not seen[v] and u != v and weight[min(u, v), max(u, v)] > 0:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def subsample_indices(
    sizes: Sequence[int],
    components: Sequence[Sequence[int]],
    rate: float,
    rng: np.random.Generator,
) -> list[np.ndarray]:
    """One sorted index sample per view, shared within each coupled component.

    sizes[v] is the extent of view v along the sampled axis. Raises
    EmptySampleError when the sample would come out empty.
    """
    out: list[np.ndarray | None] = [None] * len(sizes)
    for comp in components:
        n = sizes[comp[0]]
        take = int(np.floor(rate * n))
        if take < 1:
            raise EmptySampleError(
                f"subsample rate {rate} of {n} leaves no indices"
            )
        idx = np.sort(rng.choice(n, size=take, replace=False))
        for v in comp:
            out[v] = idx
    return out


def _restrict(bic: Bicluster, row_pos: dict[int, int], col_pos: dict[int, int]) -> Bicluster:
    rows = frozenset(row_pos[r] for r in bic.rows if r in row_pos)
    cols = frozenset(col_pos[c] for c in bic.cols if c in col_pos)
    return Bicluster(rows, cols)


def stability_filter(
    views: Sequence[np.ndarray],
    biclusters: Sequence[Sequence[Bicluster]],
    weights: RestrictionWeights,
    *,
    threshold: float,
    seed=0,
    n_subsamples: int = 5,
    subsample_rate: float = 0.9,
    n_shuffles: int = 10,
    bins: int = 50,
    init_noise: float = 0.05,
    tol: float = 1e-6,
    max_iters: int = 1000,
) -> tuple[tuple[Bicluster, ...], ...]:
    """Drop biclusters that fail to reappear across subsample refits.

    Refits run at the largest per-view non-empty count of the input. Each
    original bicluster's mean best Jaccard match over the refits must reach
    the threshold (strictly below means removal). A threshold of 0 can remove
    nothing, so the input is returned untouched without running any refits;
    an input with no non-empty biclusters is likewise returned as-is.
    """
    biclusters = tuple(tuple(bv) for bv in biclusters)
    if threshold == 0:
        return biclusters
    refit_k = max(sum(1 for b in bv if not b.is_empty) for bv in biclusters)
    if refit_k == 0:
        return biclusters

    row_comps = coupled_components(weights.phi)
    col_comps = coupled_components(weights.psi)
    n_views = len(views)
    rel_sums = [np.zeros(len(bv)) for bv in biclusters]

    for rep in range(n_subsamples):
        rng = rng_for(seed, rep)
        row_idx = subsample_indices([x.shape[0] for x in views], row_comps, subsample_rate, rng)
        col_idx = subsample_indices([x.shape[1] for x in views], col_comps, subsample_rate, rng)
        sub_views = [views[v][np.ix_(row_idx[v], col_idx[v])] for v in range(n_views)]
        fac = solve(
            sub_views,
            refit_k,
            weights,
            seed=(seed, rep, 1),
            init_noise=init_noise,
            tol=tol,
            max_iters=max_iters,
        )
        refit = remove_spurious(
            sub_views,
            fac,
            extract(fac),
            weights,
            seed=(seed, rep, 2),
            n_shuffles=n_shuffles,
            bins=bins,
            init_noise=init_noise,
            tol=tol,
            max_iters=max_iters,
        )
        for v in range(n_views):
            row_pos = {int(g): i for i, g in enumerate(row_idx[v])}
            col_pos = {int(g): i for i, g in enumerate(col_idx[v])}
            for l, bic in enumerate(biclusters[v]):
                if bic.is_empty:
                    continue
                restricted = _restrict(bic, row_pos, col_pos)
                best = max((jaccard(restricted, rb) for rb in refit[v]), default=0.0)
                rel_sums[v][l] += best

    result = []
    for v in range(n_views):
        kept = []
        for l, bic in enumerate(biclusters[v]):
            mean_rel = rel_sums[v][l] / n_subsamples
            kept.append(Bicluster.empty() if mean_rel < threshold else bic)
        result.append(tuple(kept))
    return tuple(result)
