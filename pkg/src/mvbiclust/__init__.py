"""Multi-view biclustering via coupled non-negative matrix tri-factorisation.

Library entry points:
    solve            fit the factorisation at a fixed bicluster count
    extract          turn factors into discrete biclusters
    bisilhouette     intrinsic quality score for a view's biclustering
    remove_spurious  drop biclusters indistinguishable from noise structure
    stability_filter drop biclusters that vanish under subsampling
    run              the full pipeline with automatic count selection
    generate         planted synthetic multi-view data
    multiview_scores extrinsic agreement metrics against a reference
"""

__version__ = "0.1.0"

from .bisilhouette import bisilhouette, bisilhouette_detail, pairwise_distance
from .errors import (
    DataError,
    DegenerateClusteringError,
    EmptySampleError,
    EmptyViewError,
    InfeasibleSplitError,
    InsufficientRepetitionsError,
    LengthMismatchError,
    MvbError,
    NegativeEntryError,
    NonFiniteError,
    NumericalError,
    ParseError,
    RaggedRowsError,
    RankDeficientError,
    ZeroNormViewError,
)
from .extraction import extract, extract_view, membership_sets
from .factorise import initialise, objective_value, relative_error, solve, update_sweep
from .metrics import (
    count_similarity,
    f_score,
    jaccard,
    multiview_scores,
    recovery,
    relevance,
    score_view,
)
from .pipeline import restrictions_agree, run, sweep_restriction, sweep_threshold
from .seeds import rng_for
from .spurious import jsd, remove_spurious, shuffle_view
from .stability import stability_filter
from .synthetic import block_sizes, generate, split_sizes
from .types import (
    Bicluster,
    EvalReport,
    PipelineConfig,
    PipelineResult,
    RestrictionWeights,
    ScoreReport,
    SelectionTrace,
    SyntheticConfig,
    SyntheticResult,
    TriFactors,
)

__all__ = [
    "__version__",
    "Bicluster",
    "DataError",
    "DegenerateClusteringError",
    "EmptySampleError",
    "EmptyViewError",
    "EvalReport",
    "InfeasibleSplitError",
    "InsufficientRepetitionsError",
    "LengthMismatchError",
    "MvbError",
    "NegativeEntryError",
    "NonFiniteError",
    "NumericalError",
    "ParseError",
    "PipelineConfig",
    "PipelineResult",
    "RaggedRowsError",
    "RankDeficientError",
    "RestrictionWeights",
    "ScoreReport",
    "SelectionTrace",
    "SyntheticConfig",
    "SyntheticResult",
    "TriFactors",
    "ZeroNormViewError",
    "bisilhouette",
    "bisilhouette_detail",
    "block_sizes",
    "count_similarity",
    "extract",
    "extract_view",
    "f_score",
    "generate",
    "initialise",
    "jaccard",
    "jsd",
    "membership_sets",
    "multiview_scores",
    "objective_value",
    "pairwise_distance",
    "recovery",
    "relative_error",
    "relevance",
    "remove_spurious",
    "restrictions_agree",
    "rng_for",
    "run",
    "score_view",
    "shuffle_view",
    "solve",
    "split_sizes",
    "stability_filter",
    "sweep_restriction",
    "sweep_threshold",
    "update_sweep",
]
