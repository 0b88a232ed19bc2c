"""Core datatypes shared across the package.

Conventions: views are dense non-negative float64 arrays, one per data source,
with rows playing the role of samples. All indices are 0-based in memory;
file output converts to 1-based labels at the boundary (see fileio).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DataError,
    EmptyViewError,
    LengthMismatchError,
    NegativeEntryError,
    NonFiniteError,
)

DISTANCES = ("euclidean", "manhattan", "cosine")


@dataclass(frozen=True)
class Bicluster:
    """A bicluster: a set of row indices paired with a set of column indices.

    A bicluster with either side empty carries no cells, so it is normalised
    to the canonical empty bicluster (both sides empty) on construction.
    """

    rows: frozenset[int]
    cols: frozenset[int]

    def __post_init__(self):
        rows = frozenset(int(i) for i in self.rows)
        cols = frozenset(int(j) for j in self.cols)
        if not rows or not cols:
            rows = frozenset()
            cols = frozenset()
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def empty(cls) -> "Bicluster":
        return cls(frozenset(), frozenset())

    @classmethod
    def of(cls, rows: Sequence[int], cols: Sequence[int]) -> "Bicluster":
        return cls(frozenset(rows), frozenset(cols))

    @property
    def is_empty(self) -> bool:
        return not self.rows

    @property
    def n_cells(self) -> int:
        return len(self.rows) * len(self.cols)


@dataclass(frozen=True)
class RestrictionWeights:
    """Pairwise coupling weights between views.

    Each matrix is (n_views, n_views); the weight for the unordered pair
    {u, v} is read from the upper triangle, entry [min(u, v), max(u, v)].
    phi couples row factors, xi couples mixing matrices, psi couples column
    factors. Diagonals and lower triangles are ignored.
    """

    phi: np.ndarray
    xi: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        mats = {}
        shapes = set()
        for name in ("phi", "xi", "psi"):
            m = np.asarray(getattr(self, name), dtype=np.float64)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise LengthMismatchError(f"{name} must be a square matrix, got shape {m.shape}")
            if not np.all(np.isfinite(m)):
                raise NonFiniteError(f"{name} contains non-finite entries")
            if np.any(m < 0):
                raise NegativeEntryError(f"{name} contains negative weights")
            shapes.add(m.shape)
            mats[name] = m
        if len(shapes) != 1:
            raise LengthMismatchError(f"weight matrices disagree in shape: {sorted(shapes)}")
        for name, m in mats.items():
            object.__setattr__(self, name, m)

    @classmethod
    def zeros(cls, n_views: int) -> "RestrictionWeights":
        z = np.zeros((n_views, n_views))
        return cls(z, z.copy(), z.copy())

    @classmethod
    def uniform(cls, n_views: int, phi: float = 0.0, xi: float = 0.0, psi: float = 0.0) -> "RestrictionWeights":
        """Same weight on every view pair, in the upper triangle."""
        mask = np.triu(np.ones((n_views, n_views)), k=1)
        return cls(phi * mask, xi * mask, psi * mask)

    @property
    def n_views(self) -> int:
        return self.phi.shape[0]

    def pair(self, u: int, v: int) -> tuple[float, float, float]:
        a, b = (u, v) if u <= v else (v, u)
        return float(self.phi[a, b]), float(self.xi[a, b]), float(self.psi[a, b])

    def symmetric(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetrised weight matrices with zero diagonal, for sweep loops."""
        out = []
        for m in (self.phi, self.xi, self.psi):
            upper = np.triu(m, k=1)
            out.append(upper + upper.T)
        return tuple(out)


@dataclass
class TriFactors:
    """Per-view factor triples for the reconstruction view ~= R diag-mix C^T.

    row_factors[v] is (n_v, k) with columns summing to one, mixing[v] is (k, k),
    col_factors[v] is (m_v, k) with columns summing to one. row_duals / col_duals
    are the column-normalisation multipliers (identically one at the fixed point).
    error_trace holds the mean relative reconstruction error after each full
    update sweep; it is empty when no sweeps ran.
    """

    row_factors: list[np.ndarray]
    mixing: list[np.ndarray]
    col_factors: list[np.ndarray]
    row_duals: list[np.ndarray]
    col_duals: list[np.ndarray]
    error_trace: list[float] = field(default_factory=list)

    @property
    def n_views(self) -> int:
        return len(self.row_factors)

    @property
    def rank(self) -> int:
        return self.row_factors[0].shape[1]

    def reconstruction(self, v: int) -> np.ndarray:
        return self.row_factors[v] @ self.mixing[v] @ self.col_factors[v].T


@dataclass(frozen=True)
class SelectionTrace:
    """Record of the bicluster-count search.

    One entry per candidate count tried, in the order tried: the averaged
    bisilhouette score, the per-view non-empty bicluster counts after spurious
    removal, and the number of update sweeps the fit ran. selected_k carries
    the winning candidate; capped flags a search that still wanted to extend
    when it hit the hard range cap.
    """

    ks: tuple[int, ...]
    scores: tuple[float, ...]
    counts: tuple[tuple[int, ...], ...]
    iterations: tuple[int, ...]
    selected_k: int
    capped: bool


@dataclass(frozen=True)
class ScoreReport:
    """Intrinsic quality of a multi-view biclustering: the per-view bisilhouette
    scores, their mean, and the per-bicluster scores underneath."""

    overall: float
    per_view: tuple[float, ...]
    per_cluster: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class EvalReport:
    """Extrinsic agreement with a reference biclustering, averaged over views."""

    relevance: float
    recovery: float
    f_score: float
    csr: float


@dataclass(frozen=True)
class PipelineResult:
    factors: TriFactors
    biclusters: tuple[tuple[Bicluster, ...], ...]
    selection: SelectionTrace
    score: ScoreReport


@dataclass(frozen=True)
class SyntheticResult:
    """Planted multi-view dataset plus ground truth.

    row_permutation[i] gives the final row position of pre-shuffle row i; the
    per-view column permutations read the same way. Truth biclusters are
    expressed in final (shuffled) coordinates.
    """

    views: tuple[np.ndarray, ...]
    truth: tuple[tuple[Bicluster, ...], ...]
    row_permutation: np.ndarray
    column_permutations: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for the full fitting pipeline.

    k_min/k_max bound the bicluster-count search (equal values pin the count).
    stability_threshold is the minimum mean relevance a bicluster must reach
    under subsample refits to survive; 0 disables the stability filter.
    """

    k_min: int = 3
    k_max: int = 8
    init_noise: float = 0.05
    tol: float = 1e-6
    max_iters: int = 1000
    n_shuffles: int = 10
    n_subsamples: int = 5
    subsample_rate: float = 0.9
    stability_threshold: float = 0.4
    distance: str = "euclidean"
    jsd_bins: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.k_min < 1:
            raise DataError(f"k_min must be at least 1, got {self.k_min}")
        if self.k_max < self.k_min:
            raise DataError(f"k_max ({self.k_max}) must be >= k_min ({self.k_min})")
        if self.init_noise < 0:
            raise DataError("init_noise must be non-negative")
        if self.tol < 0:
            raise DataError("tol must be non-negative")
        if self.max_iters < 0:
            raise DataError("max_iters must be non-negative")
        if self.n_shuffles < 0:
            raise DataError("n_shuffles must be non-negative")
        if self.n_subsamples < 1:
            raise DataError("n_subsamples must be at least 1")
        if not 0 < self.subsample_rate <= 1:
            raise DataError("subsample_rate must lie in (0, 1]")
        if not 0 <= self.stability_threshold <= 1:
            raise DataError("stability_threshold must lie in [0, 1]")
        if self.distance not in DISTANCES:
            raise DataError(f"distance must be one of {DISTANCES}, got {self.distance!r}")
        if self.jsd_bins < 1:
            raise DataError("jsd_bins must be at least 1")
        if self.seed < 0:
            raise DataError("seed must be non-negative")


@dataclass(frozen=True)
class SyntheticConfig:
    """Parameters for planted-block multi-view data.

    n_cols holds one column count per view. overlap_rate extends each block
    into its successor by that fraction of rows/columns; unassigned_rate leaves
    that fraction of rows and columns outside every block (noise only).
    """

    n_rows: int
    n_cols: tuple[int, ...]
    k: int
    block_mean: float = 5.0
    block_std: float = 1.0
    noise_std: float = 5.0
    overlap_rate: float = 0.0
    unassigned_rate: float = 0.0
    paper_sizing: bool = False
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_cols", tuple(int(m) for m in self.n_cols))
        if self.n_rows < 1 or any(m < 1 for m in self.n_cols):
            raise EmptyViewError("synthetic views need at least one row and one column")
        if not self.n_cols:
            raise EmptyViewError("at least one view is required")
        if self.k < 1:
            raise DataError(f"k must be at least 1, got {self.k}")
        if self.block_std < 0 or self.noise_std < 0:
            raise DataError("standard deviations must be non-negative")
        if not 0 <= self.overlap_rate < 1:
            raise DataError("overlap_rate must lie in [0, 1)")
        if not 0 <= self.unassigned_rate < 1:
            raise DataError("unassigned_rate must lie in [0, 1)")
        if self.seed < 0:
            raise DataError("seed must be non-negative")

    @property
    def n_views(self) -> int:
        return len(self.n_cols)


def as_views(views: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Validate a multi-view dataset and return float64 copies.

    Every view must be a finite, non-negative 2-d array with at least one row
    and one column.
    """
    if len(views) == 0:
        raise EmptyViewError("dataset contains no views")
    out = []
    for v, x in enumerate(views):
        a = np.asarray(x, dtype=np.float64)
        if a.ndim != 2:
            raise DataError(f"view {v} must be 2-d, got ndim={a.ndim}")
        if a.shape[0] == 0 or a.shape[1] == 0:
            raise EmptyViewError(f"view {v} has shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFiniteError(f"view {v} contains NaN or infinity")
        if np.any(a < 0):
            i, j = np.argwhere(a < 0)[0]
            raise NegativeEntryError(f"view {v} has a negative entry at ({i}, {j})")
        out.append(a.copy())
    return out


def check_coupling_shapes(views: Sequence[np.ndarray], weights: RestrictionWeights) -> None:
    """Coupled factors must have matching dimensions.

    A positive row-coupling weight between two views requires equal row counts;
    a positive column-coupling weight requires equal column counts. Mixing
    coupling is always k-by-k and needs no shape check.
    """
    n = len(views)
    if weights.n_views != n:
        raise LengthMismatchError(
            f"weights are for {weights.n_views} views but dataset has {n}"
        )
    for u in range(n):
        for v in range(u + 1, n):
            phi, _, psi = weights.pair(u, v)
            if phi > 0 and views[u].shape[0] != views[v].shape[0]:
                raise LengthMismatchError(
                    f"row coupling between views {u} and {v} requires equal row "
                    f"counts, got {views[u].shape[0]} and {views[v].shape[0]}"
                )
            if psi > 0 and views[u].shape[1] != views[v].shape[1]:
                raise LengthMismatchError(
                    f"column coupling between views {u} and {v} requires equal "
                    f"column counts, got {views[u].shape[1]} and {views[v].shape[1]}"
                )
