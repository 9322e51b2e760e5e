"""Numeric tolerances shared across the linear-algebra and fitting routines."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NumericOptions:
    """Tolerance knobs for factorisation, eigensolving, and sign rules.

    Attributes
    ----------
    pivot_rel : float or None
        Cholesky pivot threshold as a multiple of the largest diagonal
        entry.  ``None`` uses ``dim * machine_epsilon``.
    eigen_tol : float
        Jacobi convergence threshold for off-diagonal magnitudes, relative
        to the max-abs norm of the input matrix.
    max_sweeps : int
        Sweep budget for the Jacobi iteration.
    null_space_rel : float
        Eigenvalue cutoff (relative to the largest eigenvalue) below which
        a direction counts as part of the null space of a singular
        covariance matrix.
    sign_tolerance : float
        Minimum correlation magnitude needed to orient a bivariate slope.
    direction_tie_rel : float
        Relative gap under which the two smallest eigenvalues count as tied.
    """

    pivot_rel: float | None = None
    eigen_tol: float = 1e-12
    max_sweeps: int = 100
    null_space_rel: float = 1e-12
    sign_tolerance: float = 1e-8
    direction_tie_rel: float = 1e-10


DEFAULT_OPTIONS = NumericOptions()
