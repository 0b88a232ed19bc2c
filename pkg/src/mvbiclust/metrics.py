"""Agreement metrics between biclusterings.

The basic similarity between two biclusters is the Jaccard index of their cell
sets (row set crossed with column set). Because the cell sets are Cartesian
products, intersections and unions reduce to products and sums of row/column
set sizes; nothing is ever enumerated.
"""

from __future__ import annotations

from typing import Sequence

from .errors import LengthMismatchError
from .types import Bicluster, EvalReport


def jaccard(a: Bicluster, b: Bicluster) -> float:
    """Jaccard index of the two cell sets; two empty biclusters score 0."""
    inter = len(a.rows & b.rows) * len(a.cols & b.cols)
    union = a.n_cells + b.n_cells - inter
    if union == 0:
        return 0.0
    return inter / union


def relevance(found: Sequence[Bicluster], reference: Sequence[Bicluster]) -> float:
    """Mean over non-empty found biclusters of the best match in the reference.

    0 when nothing non-empty was found.
    """
    scores = [
        max((jaccard(f, r) for r in reference), default=0.0)
        for f in found
        if not f.is_empty
    ]
    if not scores:
        return 0.0
    return sum(scores) / len(scores)


def recovery(found: Sequence[Bicluster], reference: Sequence[Bicluster]) -> float:
    """Mean over non-empty reference biclusters of the best match found."""
    return relevance(reference, found)


def f_score(found: Sequence[Bicluster], reference: Sequence[Bicluster]) -> float:
    """Harmonic mean of relevance and recovery; 0 when both are 0."""
    rel = relevance(found, reference)
    rec = recovery(found, reference)
    if rel + rec == 0:
        return 0.0
    return 2 * rel * rec / (rel + rec)


def count_similarity(found: Sequence[Bicluster], reference: Sequence[Bicluster]) -> float:
    """How close the non-empty counts are: 1 - |a - b| / (a + b + 1)."""
    a = sum(1 for f in found if not f.is_empty)
    b = sum(1 for r in reference if not r.is_empty)
    return 1.0 - abs(a - b) / (a + b + 1)


def _rows_only(bics: Sequence[Bicluster]) -> list[Bicluster]:
    # Same placeholder column everywhere makes the cell Jaccard collapse to
    # the row-set Jaccard.
    return [b if b.is_empty else Bicluster(b.rows, frozenset({0})) for b in bics]


def score_view(
    found: Sequence[Bicluster],
    reference: Sequence[Bicluster],
    rows_only: bool = False,
) -> EvalReport:
    if rows_only:
        found = _rows_only(found)
        reference = _rows_only(reference)
    return EvalReport(
        relevance=relevance(found, reference),
        recovery=recovery(found, reference),
        f_score=f_score(found, reference),
        csr=count_similarity(found, reference),
    )


def multiview_scores(
    found: Sequence[Sequence[Bicluster]],
    reference: Sequence[Sequence[Bicluster]],
    rows_only: bool = False,
) -> EvalReport:
    """Per-view agreement metrics averaged across views.

    With rows_only, column memberships are ignored and matching quality is
    judged on row sets alone.
    """
    if len(found) != len(reference):
        raise LengthMismatchError(
            f"found has {len(found)} views, reference has {len(reference)}"
        )
    reports = [score_view(f, r, rows_only) for f, r in zip(found, reference)]
    n = len(reports)
    return EvalReport(
        relevance=sum(r.relevance for r in reports) / n,
        recovery=sum(r.recovery for r in reports) / n,
        f_score=sum(r.f_score for r in reports) / n,
        csr=sum(r.csr for r in reports) / n,
    )
