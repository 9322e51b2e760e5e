"""Error types raised by the library.

Every domain failure raises a subclass of :class:`ImpartialError` so callers
can catch one base type.  Caller contract violations (bad argument counts,
nonsensical parameters) raise plain :class:`ValueError` instead.
"""


class ImpartialError(Exception):
    """Base class for all domain errors raised by this package."""


class NotPositiveDefinite(ImpartialError):
    """A matrix required to be positive definite failed factorisation.

    Parameters
    ----------
    pivot : int
        Zero-based index of the first pivot at or below the threshold.
    """

    def __init__(self, pivot):
        self.pivot = pivot
        super().__init__(f"matrix is not positive definite (pivot {pivot})")


class NoConvergence(ImpartialError):
    """Eigenvalue iteration did not converge within the sweep budget."""

    def __init__(self, sweeps):
        self.sweeps = sweeps
        super().__init__(f"eigenvalue iteration did not converge in {sweeps} sweeps")


class BadHeader(ImpartialError):
    """The CSV header line is missing, empty, duplicated, or too short."""


class NonNumericCell(ImpartialError):
    """A data cell could not be parsed as a decimal number.

    ``row`` is the one-based data row (the header is row zero) and
    ``column`` is the variable name from the header.
    """

    def __init__(self, row, column):
        self.row = row
        self.column = column
        super().__init__(f"non-numeric cell at row {row}, column {column!r}")


class RaggedRow(ImpartialError):
    """A data row has a different number of cells than the header."""

    def __init__(self, row):
        self.row = row
        super().__init__(f"row {row} does not match the header width")


class TooFewRows(ImpartialError):
    """Fewer than two usable data rows remain after parsing."""


class NonFinite(ImpartialError):
    """A data cell parsed to an infinity or NaN."""

    def __init__(self, row, column):
        self.row = row
        self.column = column
        super().__init__(f"non-finite value at row {row}, column {column!r}")


class ZeroVariance(ImpartialError):
    """A variable is constant, so its sample variance is zero."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"variable {column!r} has zero variance")


class TooFewObservations(ImpartialError):
    """The estimator needs more observations than variables."""

    def __init__(self, n, p):
        self.n = n
        self.p = p
        super().__init__(f"need more than {p} observations, got {n}")


class DegenerateNullSpace(ImpartialError):
    """The covariance matrix is singular with null-space dimension above one."""


class SignUndefined(ImpartialError):
    """The correlation is too close to zero to orient a bivariate slope."""


class AmbiguousDirection(ImpartialError):
    """The two smallest eigenvalues tie, so no unique normal direction exists."""


class ZeroCoefficient(ImpartialError):
    """A coefficient needed as a divisor is exactly zero."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"coefficient of {column!r} is zero")


class NumericalInconsistency(ImpartialError):
    """An internally computed quantity left its mathematically valid range."""


class OutOfRange(ImpartialError):
    """An input value lies outside the documented domain."""


class AllReplicatesFailed(ImpartialError):
    """Every bootstrap replicate failed to produce a fit."""


class InvalidLevel(ImpartialError):
    """The confidence level is outside the open interval (0, 1)."""
