"""End-to-end fitting: candidate sweep, count selection, and filtering.

For every candidate bicluster count the pipeline fits the factorisation,
extracts biclusters, discards the spurious ones, and scores what remains with
the bisilhouette averaged over views. The count with the best score wins; if
the best score sits at the top of the candidate range the range is extended
one count at a time (up to a hard cap) so a boundary never masquerades as a
peak. The winning result then passes through the stability filter.

Candidate fits are cached, so the selected count's result is reused exactly
as scored rather than refit.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .bisilhouette import bisilhouette
from .errors import RankDeficientError
from .extraction import extract
from .factorise import solve
from .seeds import rng_for
from .spurious import remove_spurious
from .stability import stability_filter
from .types import (
    Bicluster,
    PipelineConfig,
    PipelineResult,
    RestrictionWeights,
    ScoreReport,
    SelectionTrace,
    as_views,
    check_coupling_shapes,
)

RANGE_EXTENSION_CAP = 7


@dataclass
class _Candidate:
    fac: object
    biclusters: tuple[tuple[Bicluster, ...], ...]
    score: float
    per_view: tuple[float, ...]
    per_cluster: tuple[tuple[float, ...], ...]
    counts: tuple[int, ...]
    iterations: int


def _evaluate(views, weights, cfg: PipelineConfig, k: int) -> _Candidate:
    fac = solve(
        views,
        k,
        weights,
        seed=cfg.seed,
        init_noise=cfg.init_noise,
        tol=cfg.tol,
        max_iters=cfg.max_iters,
    )
    bics = remove_spurious(
        views,
        fac,
        extract(fac),
        weights,
        seed=(cfg.seed, 1, k),
        n_shuffles=cfg.n_shuffles,
        bins=cfg.jsd_bins,
        init_noise=cfg.init_noise,
        tol=cfg.tol,
        max_iters=cfg.max_iters,
    )
    per_view = []
    per_cluster = []
    for v, x in enumerate(views):
        s, per = bisilhouette(
            x, bics[v], metric=cfg.distance, rng=rng_for(cfg.seed, 2, k, v)
        )
        per_view.append(s)
        per_cluster.append(tuple(float(p) for p in per))
    counts = tuple(sum(1 for b in bv if not b.is_empty) for bv in bics)
    return _Candidate(
        fac=fac,
        biclusters=bics,
        score=float(np.mean(per_view)),
        per_view=tuple(per_view),
        per_cluster=tuple(per_cluster),
        counts=counts,
        iterations=len(fac.error_trace),
    )


def _score_final(views, biclusters, cfg: PipelineConfig, k: int) -> ScoreReport:
    per_view = []
    per_cluster = []
    for v, x in enumerate(views):
        s, per = bisilhouette(
            x, biclusters[v], metric=cfg.distance, rng=rng_for(cfg.seed, 2, k, v)
        )
        per_view.append(s)
        per_cluster.append(tuple(float(p) for p in per))
    return ScoreReport(
        overall=float(np.mean(per_view)),
        per_view=tuple(per_view),
        per_cluster=tuple(per_cluster),
    )


def run(
    views: Sequence[np.ndarray],
    weights: RestrictionWeights | None = None,
    cfg: PipelineConfig | None = None,
) -> PipelineResult:
    """Fit, select the bicluster count, and filter; returns the full result.

    With k_min == k_max the count is taken as given: the single candidate is
    fit and filtered with no range extension.
    """
    cfg = cfg or PipelineConfig()
    views = as_views(views)
    if weights is None:
        weights = RestrictionWeights.zeros(len(views))
    check_coupling_shapes(views, weights)
    smallest = min(min(x.shape) for x in views)
    if cfg.k_max > smallest:
        raise RankDeficientError(
            f"k_max={cfg.k_max} exceeds the smallest view dimension {smallest}"
        )

    cache: dict[int, _Candidate] = {}
    ks = list(range(cfg.k_min, cfg.k_max + 1))
    for k in ks:
        cache[k] = _evaluate(views, weights, cfg, k)

    capped = False
    cap = cfg.k_max + RANGE_EXTENSION_CAP
    if cfg.k_min != cfg.k_max:
        while True:
            scores = [cache[k].score for k in ks]
            best = ks[int(np.argmax(scores))]
            if best != ks[-1]:
                break
            nxt = ks[-1] + 1
            if nxt > cap or nxt > smallest:
                capped = True
                break
            try:
                cache[nxt] = _evaluate(views, weights, cfg, nxt)
            except RankDeficientError:
                capped = True
                break
            ks.append(nxt)

    scores = [cache[k].score for k in ks]
    selected = ks[int(np.argmax(scores))]
    chosen = cache[selected]

    final = stability_filter(
        views,
        chosen.biclusters,
        weights,
        threshold=cfg.stability_threshold,
        seed=(cfg.seed, 3),
        n_subsamples=cfg.n_subsamples,
        subsample_rate=cfg.subsample_rate,
        n_shuffles=cfg.n_shuffles,
        bins=cfg.jsd_bins,
        init_noise=cfg.init_noise,
        tol=cfg.tol,
        max_iters=cfg.max_iters,
    )
    trace = SelectionTrace(
        ks=tuple(ks),
        scores=tuple(scores),
        counts=tuple(cache[k].counts for k in ks),
        iterations=tuple(cache[k].iterations for k in ks),
        selected_k=selected,
        capped=capped,
    )
    report = _score_final(views, final, cfg, selected)
    return PipelineResult(
        factors=chosen.fac,
        biclusters=final,
        selection=trace,
        score=report,
    )


def restrictions_agree(biclusters: Sequence[Sequence[Bicluster]]) -> bool:
    """Whether per-index non-empty biclusters have equal row counts across all
    view pairs (an empty/non-empty mismatch counts as disagreement)."""
    n = len(biclusters)
    for u in range(n):
        for v in range(u + 1, n):
            for a, b in zip(biclusters[u], biclusters[v]):
                if a.is_empty != b.is_empty:
                    return False
                if not a.is_empty and len(a.rows) != len(b.rows):
                    return False
    return True


@dataclass(frozen=True)
class SweepRow:
    value: float
    score: float
    selected_k: int
    counts: tuple[int, ...]
    aligned: bool


def _derived_seed(seed: int, i: int) -> int:
    return int(rng_for(seed, 4, i).integers(0, 2**31 - 1))


def sweep_restriction(
    views: Sequence[np.ndarray],
    values: Sequence[float],
    cfg: PipelineConfig,
    *,
    which: str = "phi",
    base: RestrictionWeights | None = None,
) -> list[SweepRow]:
    """Run the pipeline once per coupling-weight value and tabulate the results.

    `which` picks the weight family swept ("phi", "xi" or "psi"); the swept
    value is broadcast to every view pair while the other two families keep
    their base values. Each value runs under its own derived seed. The
    `aligned` column reports whether non-empty bicluster row counts matched
    across views in that run's final biclustering.
    """
    if which not in ("phi", "xi", "psi"):
        raise ValueError(f"which must be phi, xi or psi, got {which!r}")
    n = len(views)
    if base is None:
        base = RestrictionWeights.zeros(n)
    mask = np.triu(np.ones((n, n)), k=1)
    rows = []
    for i, value in enumerate(values):
        mats = {"phi": base.phi, "xi": base.xi, "psi": base.psi}
        mats[which] = float(value) * mask
        weights = RestrictionWeights(**mats)
        run_cfg = replace(cfg, seed=_derived_seed(cfg.seed, i))
        result = run(views, weights, run_cfg)
        counts = tuple(
            sum(1 for b in bv if not b.is_empty) for bv in result.biclusters
        )
        rows.append(
            SweepRow(
                value=float(value),
                score=result.score.overall,
                selected_k=result.selection.selected_k,
                counts=counts,
                aligned=restrictions_agree(result.biclusters),
            )
        )
    return rows


def sweep_threshold(
    views: Sequence[np.ndarray],
    values: Sequence[float],
    weights: RestrictionWeights,
    cfg: PipelineConfig,
) -> list[SweepRow]:
    """Run the pipeline once per stability threshold and tabulate the results."""
    rows = []
    for i, value in enumerate(values):
        run_cfg = replace(
            cfg, seed=_derived_seed(cfg.seed, i), stability_threshold=float(value)
        )
        result = run(views, weights, run_cfg)
        counts = tuple(
            sum(1 for b in bv if not b.is_empty) for bv in result.biclusters
        )
        rows.append(
            SweepRow(
                value=float(value),
                score=result.score.overall,
                selected_k=result.selection.selected_k,
                counts=counts,
                aligned=restrictions_agree(result.biclusters),
            )
        )
    return rows
