"""Small dense symmetric linear algebra used by the estimators.

Symmetric matrices are stored packed (lower triangle, row-major) so each
unordered index pair has exactly one storage slot.  Factorisation and
inversion go through Cholesky; eigenvalues through cyclic Jacobi sweeps.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from impartial._backend import kernels
from impartial.errors import NoConvergence, NotPositiveDefinite
from impartial.options import DEFAULT_OPTIONS, NumericOptions

_EPS = sys.float_info.epsilon


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SquareSym:
    """Symmetric matrix of order ``dim`` stored as a packed lower triangle.

    The packed layout is row-major: entry (i, j) with i >= j lives at slot
    ``i*(i+1)//2 + j``.  Instances are immutable; the buffer is copied on
    construction and marked read-only.
    """

    dim: int
    packed: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        arr = np.array(self.packed, dtype=np.float64, copy=True)
        if arr.shape != (self.dim * (self.dim + 1) // 2,):
            raise ValueError(
                f"packed buffer must have length {self.dim * (self.dim + 1) // 2}"
            )
        object.__setattr__(self, "packed", _frozen(arr))

    @staticmethod
    def index(i: int, j: int) -> int:
        """Packed slot of the unordered pair (i, j)."""
        if i < j:
            i, j = j, i
        return i * (i + 1) // 2 + j

    @classmethod
    def from_array(cls, a, rel_tol: float = 1e-12) -> "SquareSym":
        """Pack a full square matrix, checking symmetry within ``rel_tol``."""
        full = np.asarray(a, dtype=np.float64)
        if full.ndim != 2 or full.shape[0] != full.shape[1]:
            raise ValueError("need a square matrix")
        dim = full.shape[0]
        scale = np.nanmax(np.abs(full)) if full.size else 0.0
        gap = np.nanmax(np.abs(full - full.T)) if dim > 1 else 0.0
        if gap > rel_tol * max(scale, 1.0):
            raise ValueError("matrix is not symmetric")
        packed = np.empty(dim * (dim + 1) // 2, dtype=np.float64)
        for i in range(dim):
            for j in range(i + 1):
                packed[SquareSym.index(i, j)] = full[i, j]
        return cls(dim, packed)

    def to_array(self) -> np.ndarray:
        """Expand to a full (writable) square ndarray."""
        full = np.empty((self.dim, self.dim), dtype=np.float64)
        for i in range(self.dim):
            for j in range(i + 1):
                full[i, j] = self.packed[SquareSym.index(i, j)]
                full[j, i] = full[i, j]
        return full

    def entry(self, i: int, j: int) -> float:
        """Entry (i, j); the symmetric pair shares one slot."""
        return float(self.packed[SquareSym.index(i, j)])

    def diagonal(self) -> np.ndarray:
        return np.array([self.packed[SquareSym.index(i, i)] for i in range(self.dim)])


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues in ascending order with matching orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(np.array(self.values, dtype=np.float64)))
        object.__setattr__(self, "vectors", _frozen(np.array(self.vectors, dtype=np.float64)))


def _pivot_rel(dim: int, options: NumericOptions) -> float:
    if options.pivot_rel is not None:
        return options.pivot_rel
    return dim * _EPS


def cholesky(m: SquareSym, options: NumericOptions = DEFAULT_OPTIONS) -> SquareSym:
    """Lower Cholesky factor L with m = L L^T.

    Raises
    ------
    NotPositiveDefinite
        If a pivot falls at or below ``pivot_rel * max(diagonal)``; the
        error carries the zero-based pivot index.
    """
    out = np.zeros_like(m.packed)
    pivot = kernels.chol_packed(m.packed, m.dim, out, _pivot_rel(m.dim, options))
    if pivot >= 0:
        raise NotPositiveDefinite(pivot)
    return SquareSym(m.dim, out)


def spd_inverse(
    m: SquareSym, options: NumericOptions = DEFAULT_OPTIONS
) -> tuple[SquareSym, float]:
    """Inverse of a symmetric positive definite matrix.

    Factors once, inverts the triangle, and multiplies back.  Returns the
    inverse together with a condition estimate, the squared ratio of the
    extreme Cholesky diagonal entries.
    """
    factor = cholesky(m, options)
    out = np.empty_like(m.packed)
    cond = kernels.inv_from_chol_packed(factor.packed, m.dim, out)
    return SquareSym(m.dim, out), float(cond)


def jacobi_eigen(
    m: SquareSym, options: NumericOptions = DEFAULT_OPTIONS
) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Rotations run until every off-diagonal magnitude drops below
    ``eigen_tol`` times the max-abs norm of the input, or the sweep budget
    is spent (then :class:`NoConvergence` is raised).  Eigenvalues come
    back ascending, with eigenvector columns in matching order.
    """
    a = m.to_array()
    v = np.empty((m.dim, m.dim), dtype=np.float64)
    sweeps = kernels.jacobi_full(a, v, m.dim, options.max_sweeps, options.eigen_tol)
    if sweeps < 0:
        raise NoConvergence(options.max_sweeps)
    values = a.diagonal().copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], v[:, order], int(sweeps))
