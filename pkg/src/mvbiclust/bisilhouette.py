"""Intrinsic bicluster quality via a silhouette adapted to two-sided clusters.

Each bicluster is scored on its own column subspace: for every member row we
compare its mean distance to the rest of the bicluster's rows against its mean
distance to the nearest other row cluster, both measured on that bicluster's
columns only. The biclustering-level score penalises dispersion across
biclusters (mean minus two standard deviations), so one poor bicluster drags
the whole fit down.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DataError, DegenerateClusteringError
from .seeds import rng_for
from .types import Bicluster, DISTANCES

AUGMENT_JOIN_PROB = 0.1
AUGMENT_ROUNDS = 10
AUGMENT_ATTEMPTS = 100


def pairwise_distance(a: np.ndarray, b: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Distances between the rows of a and the rows of b.

    Cosine distance is defined as 1 minus the cosine similarity, with any pair
    involving a zero-norm row assigned distance 1 (no direction to compare).
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if metric == "euclidean":
        return cdist(a, b, "euclidean")
    if metric == "manhattan":
        return cdist(a, b, "cityblock")
    if metric == "cosine":
        na = np.linalg.norm(a, axis=1)
        nb = np.linalg.norm(b, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            sim = (a @ b.T) / np.outer(na, nb)
        d = 1.0 - sim
        d[~np.isfinite(d)] = 1.0
        np.clip(d, 0.0, 2.0, out=d)
        return d
    raise DataError(f"metric must be one of {DISTANCES}, got {metric!r}")


def silhouette_coefficients(
    dists: np.ndarray,
    own: np.ndarray,
    competitors: Sequence[np.ndarray],
) -> np.ndarray:
    """Per-row silhouette values for one cluster.

    dists is (len(own), n): distances from each member row to every row of the
    data. own holds the member row indices, aligned with the rows of dists.
    competitors holds the row-index arrays of the clusters to compare against;
    rows shared with the member cluster are kept as-is (their zero self
    distance counts). Singleton clusters score 0, as does any row whose
    within and between distances are both 0.
    """
    if len(competitors) == 0:
        raise DegenerateClusteringError("silhouettes need at least one competing cluster")
    m = len(own)
    if m == 1:
        return np.zeros(1)
    self_d = dists[np.arange(m), own]
    a = (dists[:, own].sum(axis=1) - self_d) / (m - 1)
    between = np.stack([dists[:, c].mean(axis=1) for c in competitors])
    b = between.min(axis=0)
    denom = np.maximum(a, b)
    safe = np.where(denom > 0, denom, 1.0)
    return np.where(denom > 0, (b - a) / safe, 0.0)


def _indices(s) -> np.ndarray:
    return np.fromiter(sorted(s), dtype=np.intp, count=len(s))


def _per_cluster(
    x: np.ndarray,
    bics: Sequence[Bicluster],
    extra_row_sets: Sequence[frozenset[int]],
    metric: str,
) -> tuple[np.ndarray, list]:
    rows = [None if b.is_empty else _indices(b.rows) for b in bics]
    extras = [_indices(s) for s in extra_row_sets]
    per = np.zeros(len(bics))
    detail: list[tuple[np.ndarray, np.ndarray] | None] = [None] * len(bics)
    for k, b in enumerate(bics):
        if b.is_empty:
            continue
        cols = _indices(b.cols)
        sub = x[:, cols]
        d = pairwise_distance(sub[rows[k]], sub, metric)
        comp = [rows[l] for l in range(len(bics)) if l != k and rows[l] is not None]
        comp.extend(extras)
        s = silhouette_coefficients(d, rows[k], comp)
        per[k] = float(np.mean(s))
        detail[k] = (rows[k], s)
    return per, detail


def _aggregate(per: np.ndarray) -> float:
    nz = per[per != 0]
    if nz.size == 0:
        return 0.0
    return float(np.mean(nz) - 2.0 * np.std(nz))


def bisilhouette_detail(
    x: np.ndarray,
    biclusters: Sequence[Bicluster],
    *,
    metric: str = "euclidean",
    rng: np.random.Generator | None = None,
) -> tuple[float, np.ndarray, list]:
    """Like bisilhouette, but also returns per-row coefficients.

    The third element holds, per bicluster, either None (empty bicluster) or
    (member row indices, per-row silhouette values); under augmentation the
    per-row values are averaged over the rounds.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DataError(f"expected a 2-d view, got ndim={x.ndim}")
    if not np.all(np.isfinite(x)):
        raise DataError("view contains non-finite entries")
    zeros = np.zeros(len(biclusters))
    none_detail: list = [None] * len(biclusters)
    unique_rows = {b.rows for b in biclusters if not b.is_empty}
    if not unique_rows:
        return 0.0, zeros, none_detail
    if len(unique_rows) >= 3:
        per, detail = _per_cluster(x, biclusters, [], metric)
        return _aggregate(per), per, detail

    if rng is None:
        rng = rng_for(0)
    need = 3 - len(unique_rows)
    n = x.shape[0]
    overalls = []
    pers = []
    details = []
    for _ in range(AUGMENT_ROUNDS):
        seen = set(unique_rows)
        extras: list[frozenset[int]] = []
        attempts = 0
        while len(extras) < need:
            if attempts >= AUGMENT_ATTEMPTS:
                return 0.0, zeros, none_detail
            attempts += 1
            cand = frozenset(np.flatnonzero(rng.random(n) < AUGMENT_JOIN_PROB).tolist())
            if not cand or cand in seen:
                continue
            seen.add(cand)
            extras.append(cand)
        per, detail = _per_cluster(x, biclusters, extras, metric)
        pers.append(per)
        details.append(detail)
        overalls.append(_aggregate(per))
    merged: list = []
    for k in range(len(biclusters)):
        if details[0][k] is None:
            merged.append(None)
        else:
            rows = details[0][k][0]
            merged.append((rows, np.mean([d[k][1] for d in details], axis=0)))
    return float(np.mean(overalls)), np.mean(pers, axis=0), merged


def bisilhouette(
    x: np.ndarray,
    biclusters: Sequence[Bicluster],
    *,
    metric: str = "euclidean",
    rng: np.random.Generator | None = None,
) -> tuple[float, np.ndarray]:
    """Score a biclustering of one view; returns (overall, per-bicluster).

    The overall score is the mean of the non-zero per-bicluster values minus
    twice their population standard deviation. Empty biclusters score 0 and an
    all-empty biclustering scores 0 overall.

    With fewer than three distinct non-empty row clusters the between-cluster
    term is too degenerate to rank fits, so random competitor row clusters
    (each row joining independently with probability 0.1) are added and the
    score is averaged over ten such augmentations. If distinct competitors
    cannot be drawn within the attempt budget the score is 0.
    """
    overall, per, _ = bisilhouette_detail(x, biclusters, metric=metric, rng=rng)
    return overall, per
