"""Agreement metrics, checked against brute-force cell enumeration."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mvbiclust import (
    Bicluster,
    LengthMismatchError,
    count_similarity,
    f_score,
    jaccard,
    multiview_scores,
    recovery,
    relevance,
    score_view,
)


def brute_jaccard(a: Bicluster, b: Bicluster) -> float:
    cells_a = {(r, c) for r in a.rows for c in a.cols}
    cells_b = {(r, c) for r in b.rows for c in b.cols}
    union = cells_a | cells_b
    if not union:
        return 0.0
    return len(cells_a & cells_b) / len(union)


index_sets = st.frozensets(st.integers(0, 5), max_size=6)
biclusters = st.builds(Bicluster, index_sets, index_sets)


@given(biclusters, biclusters)
def test_jaccard_matches_brute_force(a, b):
    assert jaccard(a, b) == pytest.approx(brute_jaccard(a, b), abs=1e-15)


@given(biclusters, biclusters)
def test_jaccard_symmetric_and_bounded(a, b):
    assert jaccard(a, b) == jaccard(b, a)
    assert 0.0 <= jaccard(a, b) <= 1.0


@given(biclusters)
def test_jaccard_self(a):
    expected = 0.0 if a.is_empty else 1.0
    assert jaccard(a, a) == expected


def test_jaccard_hand_cases():
    a = Bicluster.of([0, 1], [0, 1])   # 4 cells
    b = Bicluster.of([1, 2], [1, 2])   # 4 cells, shares cell (1,1)
    assert jaccard(a, b) == pytest.approx(1 / 7)
    assert jaccard(a, Bicluster.empty()) == 0.0
    assert jaccard(Bicluster.empty(), Bicluster.empty()) == 0.0


def test_relevance_recovery_f():
    truth = [Bicluster.of([0, 1], [0, 1]), Bicluster.of([2, 3], [2, 3])]
    found = [Bicluster.of([0, 1], [0, 1]), Bicluster.empty()]
    # the one found bicluster matches truth 0 exactly
    assert relevance(found, truth) == 1.0
    # truth 1 is unmatched: (1 + 0) / 2
    assert recovery(found, truth) == 0.5
    assert f_score(found, truth) == pytest.approx(2 * 1.0 * 0.5 / 1.5)
    assert relevance([Bicluster.empty()], truth) == 0.0
    assert f_score([Bicluster.empty()], [Bicluster.empty()]) == 0.0


def test_count_similarity_formula():
    for a in range(11):
        for b in range(11):
            found = [Bicluster.of([0], [0])] * a + [Bicluster.empty()] * 2
            ref = [Bicluster.of([0], [0])] * b
            expected = 1 - abs(a - b) / (a + b + 1)
            assert count_similarity(found, ref) == pytest.approx(expected)


def test_rows_only_reduces_to_row_jaccard():
    a = Bicluster.of([0, 1, 2], [5])
    b = Bicluster.of([1, 2, 3], [9])   # disjoint columns
    rep = score_view([a], [b], rows_only=True)
    assert rep.relevance == pytest.approx(2 / 4)
    plain = score_view([a], [b])
    assert plain.relevance == 0.0


def test_multiview_averages_over_views():
    perfect = [Bicluster.of([0], [0])]
    miss = [Bicluster.of([1], [1])]
    rep = multiview_scores([perfect, miss], [perfect, perfect])
    assert rep.relevance == pytest.approx(0.5)
    assert rep.csr == pytest.approx(1.0)
    with pytest.raises(LengthMismatchError):
        multiview_scores([perfect], [perfect, perfect])
