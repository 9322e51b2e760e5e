"""Datasets, CSV ingestion, and sample moments.

The CSV dialect is deliberately small: comma separators, ``.`` decimal
point, one header line naming the variables, one observation per row.
Parsing is strict; every malformed cell is reported with its one-based
data row and the variable name.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from impartial._backend import kernels
from impartial.errors import (
    BadHeader,
    NonFinite,
    NonNumericCell,
    RaggedRow,
    TooFewRows,
    ZeroVariance,
)
from impartial.linalg import SquareSym, _frozen


@dataclass(frozen=True, eq=False)
class Dataset:
    """Named numeric columns; ``values`` has one observation per row.

    Needs at least two rows and two columns, all finite.  Instances are
    immutable: the value matrix is copied and marked read-only.
    """

    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        names = tuple(str(s) for s in self.names)
        vals = np.array(self.values, dtype=np.float64, copy=True, order="C")
        if vals.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if len(names) != vals.shape[1]:
            raise ValueError("one name per column required")
        if len(names) < 2:
            raise ValueError("need at least two variables")
        if vals.shape[0] < 2:
            raise ValueError("need at least two observations")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if not np.isfinite(vals).all():
            raise ValueError("values must be finite")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", _frozen(vals))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def index_of(self, name: str) -> int:
        """Column index of ``name``; raises KeyError for unknown names."""
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None


def _parse_cell(cell: str, row: int, column: str) -> float:
    text = cell.strip()
    # float() accepts digit-grouping underscores; CSV numbers should not
    if not text or "_" in text:
        raise NonNumericCell(row, column)
    try:
        value = float(text)
    except ValueError:
        raise NonNumericCell(row, column) from None
    if not math.isfinite(value):
        raise NonFinite(row, column)
    return value


def parse_csv(text: str, drop_incomplete_rows: bool = False) -> Dataset:
    """Parse CSV text into a :class:`Dataset`.

    The first line is the header.  Blank lines are skipped.  With
    ``drop_incomplete_rows`` set, rows containing empty cells are dropped
    instead of rejected; row numbers in errors still count them.

    Raises
    ------
    BadHeader
        Missing header, fewer than two names, empty or duplicate names.
    RaggedRow
        A row whose cell count differs from the header's.
    NonNumericCell, NonFinite
        A cell that does not parse to a finite decimal number.
    TooFewRows
        Fewer than two usable observations remain.
    """
    reader = csv.reader(io.StringIO(text))
    header = None
    for cells in reader:
        if cells:
            header = [c.strip() for c in cells]
            break
    if header is None:
        raise BadHeader("input has no header line")
    if len(header) < 2:
        raise BadHeader("need at least two variables")
    if any(not name for name in header):
        raise BadHeader("header has an empty variable name")
    if len(set(header)) != len(header):
        raise BadHeader("header has duplicate variable names")

    rows: list[list[float]] = []
    row_no = 0
    for cells in reader:
        if not cells:
            continue
        row_no += 1
        if len(cells) != len(header):
            raise RaggedRow(row_no)
        if drop_incomplete_rows and any(not c.strip() for c in cells):
            continue
        rows.append(
            [_parse_cell(cell, row_no, header[j]) for j, cell in enumerate(cells)]
        )
    if len(rows) < 2:
        raise TooFewRows(f"need at least two data rows, got {len(rows)}")
    return Dataset(tuple(header), np.array(rows, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """Sample size, means, and covariance of a dataset.

    ``cov`` uses divisor n - 1.  ``zero_variance`` lists the indices of
    constant columns; their correlation entries are NaN off the diagonal.
    The correlation matrix is derived lazily since most fits never need it.
    """

    names: tuple[str, ...]
    n: int
    means: np.ndarray
    cov: SquareSym
    zero_variance: tuple[int, ...] = field(default=())

    def __post_init__(self):
        means = _frozen(np.array(self.means, dtype=np.float64))
        if means.shape != (self.cov.dim,):
            raise ValueError("means length must match the covariance order")
        if len(self.names) != self.cov.dim:
            raise ValueError("one name per variable required")
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))
        object.__setattr__(self, "means", means)

    @property
    def p(self) -> int:
        return self.cov.dim

    @cached_property
    def stds(self) -> np.ndarray:
        return _frozen(np.sqrt(self.cov.diagonal()))

    @cached_property
    def corr(self) -> SquareSym:
        """Correlation matrix; NaN where a zero-variance column is involved."""
        p = self.p
        stds = self.stds
        dead = set(self.zero_variance)
        packed = np.empty(p * (p + 1) // 2, dtype=np.float64)
        for i in range(p):
            for j in range(i + 1):
                if i == j:
                    packed[SquareSym.index(i, i)] = 1.0
                elif i in dead or j in dead:
                    packed[SquareSym.index(i, j)] = math.nan
                else:
                    packed[SquareSym.index(i, j)] = self.cov.entry(i, j) / (
                        stds[i] * stds[j]
                    )
        return SquareSym(p, packed)

    @classmethod
    def from_moments(cls, names, n, means, cov) -> "MomentSummary":
        """Build a summary from precomputed moments (no raw data needed)."""
        matrix = cov if isinstance(cov, SquareSym) else SquareSym.from_array(cov)
        variances = matrix.diagonal()
        if any(v < 0.0 for v in variances):
            raise ValueError("variances must be nonnegative")
        dead = tuple(int(i) for i, v in enumerate(variances) if v == 0.0)
        return cls(tuple(names), int(n), means, matrix, dead)

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None


def summarize(d: Dataset) -> MomentSummary:
    """Means and sample covariance of a dataset via the kernel backend.

    Columns whose observed minimum equals their maximum are flagged as
    zero-variance even when rounding leaves a tiny positive variance.
    """
    n, p = d.values.shape
    means = np.empty(p, dtype=np.float64)
    packed = np.empty(p * (p + 1) // 2, dtype=np.float64)
    kernels.moments(d.values, n, p, means, packed)
    dead = []
    for j in range(p):
        col = d.values[:, j]
        if packed[SquareSym.index(j, j)] == 0.0 or col.max() == col.min():
            packed[SquareSym.index(j, j)] = 0.0
            dead.append(j)
    return MomentSummary(d.names, n, means, SquareSym(p, packed), tuple(dead))


def standardize(d: Dataset) -> Dataset:
    """Shift and scale every column to mean zero and unit sample variance.

    Raises
    ------
    ZeroVariance
        If any column is constant; it names the offending variable.
    """
    s = summarize(d)
    if s.zero_variance:
        raise ZeroVariance(d.names[s.zero_variance[0]])
    return Dataset(d.names, (d.values - s.means) / s.stds)
