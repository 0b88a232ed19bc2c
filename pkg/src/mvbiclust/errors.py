"""Exception hierarchy.

Everything raised on purpose derives from MvbError so callers (and the CLI)
can distinguish our failures from genuine bugs. Data errors cover anything
wrong with the inputs as given; numerical errors cover conditions discovered
mid-computation that make the requested factorisation meaningless.
"""


class MvbError(Exception):
    """Base class for all errors raised by this package."""


class DataError(MvbError):
    """Invalid input data or configuration."""


class NumericalError(MvbError):
    """Numerically degenerate state encountered during computation."""


class NegativeEntryError(DataError):
    """A view contains a negative entry."""


class EmptyViewError(DataError):
    """A view has zero rows or zero columns."""


class LengthMismatchError(DataError):
    """Parallel sequences (views, weights, factors) disagree in length or shape."""


class InfeasibleSplitError(DataError):
    """Requested planted-block sizes cannot all be at least one."""


class EmptySampleError(DataError):
    """A subsample would be empty at the requested rate."""


class InsufficientRepetitionsError(DataError):
    """Fewer than two shuffled repetitions; no cross-pair threshold exists."""


class DegenerateClusteringError(DataError):
    """Fewer than two non-empty clusters; silhouettes are undefined."""


class ParseError(DataError):
    """A token in a delimited file could not be parsed as a number."""

    def __init__(self, row: int, col: int, token: str):
        self.row = row
        self.col = col
        self.token = token
        super().__init__(f"row {row}, column {col}: cannot parse {token!r} as a number")


class RaggedRowsError(DataError):
    """Rows of a delimited file have inconsistent field counts."""

    def __init__(self, row: int, expected: int, got: int):
        self.row = row
        self.expected = expected
        self.got = got
        super().__init__(f"row {row}: expected {expected} fields, got {got}")


class RankDeficientError(NumericalError):
    """A view lacks enough numerically non-zero singular values for the requested rank."""


class ZeroNormViewError(NumericalError):
    """A view has zero Frobenius norm; relative error is undefined."""


class NonFiniteError(NumericalError):
    """NaN or infinity encountered in data or factors."""
