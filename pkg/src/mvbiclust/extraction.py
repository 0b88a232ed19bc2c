"""Turning factor matrices into discrete biclusters.

A row belongs to row-cluster k when its membership weight exceeds 1/n_rows
(strictly), i.e. more than its share under a uniform spread; columns likewise
with 1/n_cols. Bicluster k pairs column-cluster k with the row-cluster carrying
the most mixing weight in column k of the mixing matrix (first index wins ties),
so row and column clusters stay matched even when the mixing matrix is not
diagonal.
"""

from __future__ import annotations

import numpy as np

from .types import Bicluster, TriFactors


def membership_sets(factor: np.ndarray) -> list[frozenset[int]]:
    """Index sets whose membership weight strictly exceeds the uniform level."""
    n = factor.shape[0]
    cut = 1.0 / n
    return [frozenset(np.flatnonzero(factor[:, k] > cut).tolist()) for k in range(factor.shape[1])]


def extract_view(
    row_factor: np.ndarray,
    mixing: np.ndarray,
    col_factor: np.ndarray,
) -> tuple[Bicluster, ...]:
    row_sets = membership_sets(row_factor)
    col_sets = membership_sets(col_factor)
    out = []
    for k in range(len(col_sets)):
        match = int(np.argmax(mixing[:, k]))
        out.append(Bicluster(row_sets[match], col_sets[k]))
    return tuple(out)


def extract(fac: TriFactors) -> tuple[tuple[Bicluster, ...], ...]:
    """Per-view bicluster tuples from a fitted factorisation."""
    return tuple(
        extract_view(fac.row_factors[v], fac.mixing[v], fac.col_factors[v])
        for v in range(fac.n_views)
    )
