"""Planted-block multi-view data with known ground truth.

Views share their row clusters (same samples) but get independent column
clusters, block values, noise, and column shuffles. Signal blocks sit on the
diagonal of the unshuffled matrix with sizes from a deterministic splitting
scheme, optionally extended into their successor block to create overlap, and
the whole view is built as |signal| + |noise| so everything stays non-negative
without washing out block contrast.
"""

from __future__ import annotations

import numpy as np

from .errors import InfeasibleSplitError
from .seeds import rng_for
from .types import Bicluster, SyntheticConfig, SyntheticResult


def split_sizes(total: int, k: int) -> tuple[int, ...]:
    """Deterministic uneven split of `total` items into k block sizes.

    Proportions start at 4:3 and grow by halving the largest part until k
    parts exist; sizes are the floored shares in decreasing order, with the
    rounding remainder added to the first smallest-share block. Raises
    InfeasibleSplitError when any block would be empty.
    """
    if k < 1:
        raise InfeasibleSplitError(f"need at least one block, got k={k}")
    if k == 1:
        parts = [1]
    else:
        parts = [4, 3]
        while len(parts) < k:
            parts.sort(reverse=True)
            p = parts.pop(0)
            parts.append(-(-p // 2))
            parts.append(p // 2)
    parts.sort(reverse=True)
    total_parts = sum(parts)
    sizes = [total * p // total_parts for p in parts]
    remainder = total - sum(sizes)
    sizes[parts.index(min(parts))] += remainder
    if any(s < 1 for s in sizes):
        raise InfeasibleSplitError(
            f"cannot split {total} items into {k} non-empty blocks"
        )
    return tuple(sizes)


def block_sizes(total: int, k: int, paper_sizing: bool = False) -> tuple[int, ...]:
    """Block sizes for one axis; the alternate sizing reserves one guaranteed
    member per block before splitting the rest."""
    if paper_sizing:
        return tuple(s + 1 for s in split_sizes(total - k, k))
    return split_sizes(total, k)


def _ranges(sizes: tuple[int, ...]) -> list[np.ndarray]:
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    return [np.arange(s, s + n) for s, n in zip(starts, sizes)]


def generate(cfg: SyntheticConfig) -> SyntheticResult:
    """Build the planted dataset described by cfg.

    Overlap extends block i into block i+1 (never wrapping around): a fixed
    fraction of block i's base rows joins block i+1 in every view, and a
    fraction of its base columns joins per view. The newly covered off-block
    cells get fresh signal draws; cells already inside block i keep their
    values. With unassigned_rate > 0, trailing rows/columns belong to no
    block and carry noise only.
    """
    rng = rng_for(cfg.seed)
    k = cfg.k
    eff_rows = int(np.floor((1 - cfg.unassigned_rate) * cfg.n_rows))
    row_sizes = block_sizes(eff_rows, k, cfg.paper_sizing)
    row_blocks = _ranges(row_sizes)
    row_dest = rng.permutation(cfg.n_rows)

    empty = np.array([], dtype=np.intp)
    row_ext: list[np.ndarray] = [empty] * k
    if cfg.overlap_rate > 0 and k > 1:
        for i in range(k - 1):
            cnt = int(np.floor(cfg.overlap_rate * row_sizes[i]))
            if cnt > 0:
                row_ext[i + 1] = np.sort(rng.choice(row_blocks[i], size=cnt, replace=False))

    views, truths, col_perms = [], [], []
    for m in cfg.n_cols:
        eff_cols = int(np.floor((1 - cfg.unassigned_rate) * m))
        col_sizes = block_sizes(eff_cols, k, cfg.paper_sizing)
        col_blocks = _ranges(col_sizes)

        signal = np.zeros((cfg.n_rows, m))
        for i in range(k):
            signal[np.ix_(row_blocks[i], col_blocks[i])] = rng.normal(
                cfg.block_mean, cfg.block_std, size=(row_sizes[i], col_sizes[i])
            )

        col_ext: list[np.ndarray] = [empty] * k
        if cfg.overlap_rate > 0 and k > 1:
            for i in range(k - 1):
                cnt = int(np.floor(cfg.overlap_rate * col_sizes[i]))
                if cnt > 0:
                    col_ext[i + 1] = np.sort(rng.choice(col_blocks[i], size=cnt, replace=False))
            for j in range(1, k):
                if row_ext[j].size:
                    signal[np.ix_(row_ext[j], col_blocks[j])] = rng.normal(
                        cfg.block_mean, cfg.block_std, size=(row_ext[j].size, col_sizes[j])
                    )
                if col_ext[j].size:
                    signal[np.ix_(row_blocks[j], col_ext[j])] = rng.normal(
                        cfg.block_mean, cfg.block_std, size=(row_sizes[j], col_ext[j].size)
                    )

        noise = rng.normal(0.0, cfg.noise_std, size=(cfg.n_rows, m))
        x = np.abs(signal) + np.abs(noise)
        col_dest = rng.permutation(m)
        placed = np.empty_like(x)
        placed[np.ix_(row_dest, col_dest)] = x

        truth = []
        for i in range(k):
            rows = np.concatenate([row_blocks[i], row_ext[i]])
            cols = np.concatenate([col_blocks[i], col_ext[i]])
            truth.append(Bicluster.of(row_dest[rows].tolist(), col_dest[cols].tolist()))

        views.append(placed)
        truths.append(tuple(truth))
        col_perms.append(col_dest)

    return SyntheticResult(
        views=tuple(views),
        truth=tuple(truths),
        row_permutation=row_dest,
        column_permutations=tuple(col_perms),
    )
