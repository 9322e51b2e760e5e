"""Estimators for a linear relationship among noisy variables.

The impartial estimator treats every variable as measured with error and
no variable as privileged: coefficient magnitudes are the square roots of
the precision-matrix diagonal, signs come from one precision-matrix row,
and the fitted hyperplane passes through the point of means.  Ordinary
least squares (one regression per choice of dependent variable), the
bivariate geometric-mean fit, and orthogonal regression are provided as
comparison baselines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from impartial.data import MomentSummary
from impartial.errors import (
    AmbiguousDirection,
    DegenerateNullSpace,
    NotPositiveDefinite,
    NumericalInconsistency,
    SignUndefined,
    TooFewObservations,
    ZeroCoefficient,
    ZeroVariance,
)
from impartial.linalg import _frozen, jacobi_eigen, spd_inverse
from impartial.options import DEFAULT_OPTIONS, NumericOptions


@dataclass(frozen=True, eq=False)
class ImpartialFit:
    """Symmetric-form fit: sum of coefficients[j] * x_j = constant.

    ``reference_row`` is the index whose precision row supplied the signs
    (the most determined variable).  ``sign_consistent`` records whether
    every precision row implies the same sign pattern.  On an exact fit
    (singular covariance with a one-dimensional null space) the
    coefficient vector is the unit null direction, ``precision_diag`` is
    None, and the condition estimate is infinite.
    """

    names: tuple[str, ...]
    coefficients: np.ndarray
    constant: float
    reference_row: int
    sign_consistent: bool
    precision_diag: np.ndarray | None
    condition_estimate: float
    exact: bool
    n: int

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen(np.array(self.coefficients, dtype=np.float64))
        )
        if self.precision_diag is not None:
            object.__setattr__(
                self,
                "precision_diag",
                _frozen(np.array(self.precision_diag, dtype=np.float64)),
            )


@dataclass(frozen=True, eq=False)
class SolvedForm:
    """One variable isolated: target = intercept + sum slopes[i] * others[i]."""

    target: str
    names: tuple[str, ...]
    intercept: float
    slopes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "slopes", _frozen(np.array(self.slopes, dtype=np.float64)))


@dataclass(frozen=True, eq=False)
class BivariateFit:
    """Two-variable fit: dependent = intercept + slope * regressor."""

    dependent: str
    regressor: str
    slope: float
    intercept: float
    r: float


@dataclass(frozen=True, eq=False)
class OlsFit:
    """Least-squares regression of one variable on all the others."""

    dependent: str
    names: tuple[str, ...]
    intercept: float
    slopes: np.ndarray
    r_squared: float
    residual_variance: float

    def __post_init__(self):
        object.__setattr__(self, "slopes", _frozen(np.array(self.slopes, dtype=np.float64)))


@dataclass(frozen=True, eq=False)
class OrthogonalFit:
    """Total least squares: unit normal minimising squared perpendicular distance."""

    names: tuple[str, ...]
    coefficients: np.ndarray
    constant: float
    eigenvalue: float
    n: int

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen(np.array(self.coefficients, dtype=np.float64))
        )


def _require_usable(s: MomentSummary) -> None:
    if s.n <= s.p:
        raise TooFewObservations(s.n, s.p)
    if s.zero_variance:
        raise ZeroVariance(s.names[s.zero_variance[0]])


def _dot_means(coefficients, means) -> float:
    acc = 0.0
    for j in range(len(means)):
        acc += coefficients[j] * means[j]
    return acc


def impartial_fit(
    s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> ImpartialFit:
    """Fit the symmetric relationship that treats all variables alike.

    Coefficient magnitudes are square roots of the precision-matrix
    diagonal.  Signs are read from the precision row of the variable with
    the largest diagonal entry; if some other row disagrees, the fit is
    flagged ``sign_consistent=False`` (entries that are exactly zero are
    taken as positive and also clear the flag).

    A singular covariance matrix with a one-dimensional null space means
    the variables satisfy the relationship exactly; the fit then returns
    the unit null direction with ``exact=True``.  A null space of higher
    dimension raises :class:`DegenerateNullSpace`.
    """
    _require_usable(s)
    p = s.p
    try:
        inv, cond = spd_inverse(s.cov, options)
    except NotPositiveDefinite:
        return _exact_fit(s, options)

    diag = inv.diagonal()
    k = int(np.argmax(diag))
    signs = np.empty(p)
    consistent = True
    for j in range(p):
        c = inv.entry(k, j)
        if c > 0.0:
            signs[j] = 1.0
        elif c < 0.0:
            signs[j] = -1.0
        else:
            signs[j] = 1.0
            consistent = False
    if consistent:
        for i in range(p):
            for j in range(i + 1, p):
                c = inv.entry(i, j)
                if c == 0.0 or (c > 0.0) != (signs[i] * signs[j] > 0.0):
                    consistent = False
                    break
            if not consistent:
                break

    b = signs * np.sqrt(diag)
    return ImpartialFit(
        names=s.names,
        coefficients=b,
        constant=_dot_means(b, s.means),
        reference_row=k,
        sign_consistent=consistent,
        precision_diag=diag,
        condition_estimate=cond,
        exact=False,
        n=s.n,
    )


def _exact_fit(s: MomentSummary, options: NumericOptions) -> ImpartialFit:
    eig = jacobi_eigen(s.cov, options)
    lam = eig.values
    lam_max = lam[-1]
    null = [i for i in range(s.p) if lam[i] <= options.null_space_rel * lam_max]
    if not null:
        # factorisation failed but no eigenvalue is negligible; report the
        # original problem rather than inventing an exact relationship
        raise NotPositiveDefinite(0)
    if len(null) > 1:
        raise DegenerateNullSpace(
            f"covariance null space has dimension {len(null)}"
        )
    v = eig.vectors[:, 0].copy()
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0.0:
        v = -v
    b = v / math.sqrt(float(v @ v))
    return ImpartialFit(
        names=s.names,
        coefficients=b,
        constant=_dot_means(b, s.means),
        reference_row=k,
        sign_consistent=True,
        precision_diag=None,
        condition_estimate=math.inf,
        exact=True,
        n=s.n,
    )


def _resolve(names: tuple[str, ...], key) -> int:
    if isinstance(key, str):
        try:
            return names.index(key)
        except ValueError:
            raise KeyError(key) from None
    idx = int(key)
    if not 0 <= idx < len(names):
        raise IndexError(f"variable index {idx} out of range")
    return idx


def solve_for(fit, target) -> SolvedForm:
    """Rearrange a symmetric-form fit to isolate one variable.

    Works for any fit exposing ``names``, ``coefficients``, ``constant``.
    Raises :class:`ZeroCoefficient` when the target's coefficient is zero.
    """
    t = _resolve(fit.names, target)
    b = fit.coefficients
    if b[t] == 0.0:
        raise ZeroCoefficient(fit.names[t])
    others = [j for j in range(len(fit.names)) if j != t]
    slopes = np.array([-b[j] / b[t] for j in others])
    return SolvedForm(
        target=fit.names[t],
        names=tuple(fit.names[j] for j in others),
        intercept=fit.constant / b[t],
        slopes=slopes,
    )


def pairwise_slope(fit, i, j) -> float:
    """Slope of variable ``i`` with respect to variable ``j``: -b_j / b_i.

    Raises :class:`ZeroCoefficient` when variable ``i`` has coefficient zero.
    """
    a = _resolve(fit.names, i)
    c = _resolve(fit.names, j)
    b = fit.coefficients
    if b[a] == 0.0:
        raise ZeroCoefficient(fit.names[a])
    return float(-b[c] / b[a])


def gmfr_bivariate(
    s: MomentSummary, dependent, regressor, options: NumericOptions = DEFAULT_OPTIONS
) -> BivariateFit:
    """Geometric-mean (reduced major axis) fit of one variable on another.

    The slope magnitude is the ratio of standard deviations, which is the
    geometric mean of the two directed least-squares slopes; its sign is
    the sign of the correlation.  Raises :class:`SignUndefined` when the
    correlation magnitude is below ``sign_tolerance``.
    """
    i = _resolve(s.names, dependent)
    j = _resolve(s.names, regressor)
    if i == j:
        raise ValueError("dependent and regressor must differ")
    for idx in (i, j):
        if idx in s.zero_variance:
            raise ZeroVariance(s.names[idx])
    r = s.corr.entry(i, j)
    if abs(r) < options.sign_tolerance:
        raise SignUndefined(
            f"correlation {r:.3g} between {s.names[i]!r} and {s.names[j]!r} "
            "is too small to orient the slope"
        )
    slope = math.copysign(float(s.stds[i] / s.stds[j]), r)
    return BivariateFit(
        dependent=s.names[i],
        regressor=s.names[j],
        slope=slope,
        intercept=float(s.means[i] - slope * s.means[j]),
        r=float(r),
    )


def ols_all(
    s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> tuple[OlsFit, ...]:
    """Least-squares regressions of every variable on all the others.

    All p regressions come from one precision matrix: the slopes for
    dependent j are -c_ji / c_jj, the residual variance is 1 / c_jj, and
    R^2 comes from the inverse correlation matrix diagonal.
    """
    _require_usable(s)
    inv, _ = spd_inverse(s.cov, options)
    r2 = _r_squared_from_corr(s, options)
    fits = []
    for j in range(s.p):
        cjj = inv.entry(j, j)
        others = [i for i in range(s.p) if i != j]
        slopes = np.array([-inv.entry(j, i) / cjj for i in others])
        intercept = float(s.means[j])
        for pos, i in enumerate(others):
            intercept -= slopes[pos] * float(s.means[i])
        fits.append(
            OlsFit(
                dependent=s.names[j],
                names=tuple(s.names[i] for i in others),
                intercept=intercept,
                slopes=slopes,
                r_squared=r2[j],
                residual_variance=1.0 / cjj,
            )
        )
    return tuple(fits)


def ols_single(
    s: MomentSummary, dependent, options: NumericOptions = DEFAULT_OPTIONS
) -> OlsFit:
    """The least-squares regression with ``dependent`` on the left."""
    j = _resolve(s.names, dependent)
    return ols_all(s, options)[j]


def _r_squared_from_corr(s: MomentSummary, options: NumericOptions) -> np.ndarray:
    inv_corr, _ = spd_inverse(s.corr, options)
    out = np.empty(s.p)
    for j in range(s.p):
        d = inv_corr.entry(j, j)
        if d < 1.0 - 1e-9:
            raise NumericalInconsistency(
                f"inverse correlation diagonal {d!r} below 1"
            )
        out[j] = max(0.0, 1.0 - 1.0 / d)
    return out


def orthogonal_fit(
    s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> OrthogonalFit:
    """Total least squares via the smallest covariance eigenvector.

    Unlike the impartial fit this depends on the measurement units.  The
    normal is oriented so its first nonnegligible entry is positive.
    Raises :class:`AmbiguousDirection` when the two smallest eigenvalues
    are within ``direction_tie_rel`` relative of each other.
    """
    _require_usable(s)
    eig = jacobi_eigen(s.cov, options)
    lam = eig.values
    gap = lam[1] - lam[0]
    scale = max(abs(float(lam[0])), abs(float(lam[1])))
    if gap <= options.direction_tie_rel * scale:
        raise AmbiguousDirection(
            f"smallest eigenvalues {lam[0]!r} and {lam[1]!r} are too close"
        )
    v = eig.vectors[:, 0].copy()
    vmax = float(np.abs(v).max())
    for x in v:
        if abs(x) > 1e-12 * vmax:
            if x < 0.0:
                v = -v
            break
    return OrthogonalFit(
        names=s.names,
        coefficients=v,
        constant=_dot_means(v, s.means),
        eigenvalue=float(lam[0]),
        n=s.n,
    )
