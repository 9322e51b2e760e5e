"""Diagnostics for fitted relationships.

Everything here is derived from the moment summary and, where relevant,
a fitted symmetric form: partial correlations and multiple R^2 from the
precision matrices, per-variable residual statistics from the quadratic
form of the coefficients, measurement reliability, and the classical
inflation of squared error incurred by the geometric-mean line relative
to directed least squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from impartial.data import MomentSummary
from impartial.errors import (
    NumericalInconsistency,
    OutOfRange,
    SignUndefined,
    ZeroCoefficient,
    ZeroVariance,
)
from impartial.fit import ImpartialFit, _require_usable, _resolve
from impartial.linalg import SquareSym, _frozen, spd_inverse
from impartial.options import DEFAULT_OPTIONS, NumericOptions


@dataclass(frozen=True, eq=False)
class ResidualStats:
    """Per-variable residual spread implied by a symmetric-form fit.

    ``q`` is the quadratic form b' K b.  Dividing by a squared
    coefficient gives the residual variance in that variable's direction,
    so coefficient magnitude times residual standard deviation is the
    same number, sqrt(q), for every variable.
    """

    names: tuple[str, ...]
    q: float
    residual_variances: np.ndarray
    coeff_times_residual_sd: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "residual_variances",
            _frozen(np.array(self.residual_variances, dtype=np.float64)),
        )
        object.__setattr__(
            self,
            "coeff_times_residual_sd",
            _frozen(np.array(self.coeff_times_residual_sd, dtype=np.float64)),
        )


@dataclass(frozen=True)
class GreenallReport:
    """Squared-error inflation of the geometric-mean line over least squares.

    ``inflation`` holds the ratio SSE(geometric-mean line) / SSE(least
    squares) measured in each variable's direction; the two entries agree
    and equal 2 / (1 + |r|).
    """

    dependent: str
    regressor: str
    r: float
    sse_gmfr: tuple[float, float]
    sse_ols: tuple[float, float]
    inflation: tuple[float, float]


@dataclass(frozen=True, eq=False)
class DiagnosticsReport:
    """Bundle of fit diagnostics as shown by the command-line tool.

    Every field except ``names`` is None for exact fits, where the
    precision matrix (and hence all of these quantities) does not exist.
    """

    names: tuple[str, ...]
    partial_correlations: SquareSym | None
    r_squared: np.ndarray | None
    residual: ResidualStats | None
    sign_violations: tuple[tuple[str, str], ...]

    def __post_init__(self):
        if self.r_squared is not None:
            object.__setattr__(
                self, "r_squared", _frozen(np.array(self.r_squared, dtype=np.float64))
            )


def partial_correlations(
    s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> SquareSym:
    """Correlation of each pair with all other variables held fixed.

    Off-diagonal entries are -c_ij / sqrt(c_ii * c_jj) for the precision
    matrix c; the diagonal is 1 by convention.
    """
    _require_usable(s)
    inv, _ = spd_inverse(s.cov, options)
    p = s.p
    packed = np.empty(p * (p + 1) // 2)
    for i in range(p):
        for j in range(i + 1):
            if i == j:
                packed[SquareSym.index(i, i)] = 1.0
            else:
                packed[SquareSym.index(i, j)] = -inv.entry(i, j) / math.sqrt(
                    inv.entry(i, i) * inv.entry(j, j)
                )
    return SquareSym(p, packed)


def r_squared_all(
    s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> np.ndarray:
    """Multiple R^2 of each variable regressed on all the others.

    Uses the inverse correlation matrix: R_j^2 = 1 - 1/(corr^-1)_jj, so
    the variance inflation factor 1/(1 - R_j^2) is that diagonal entry.
    Raises :class:`NumericalInconsistency` if a diagonal entry falls
    materially below 1.
    """
    _require_usable(s)
    inv_corr, _ = spd_inverse(s.corr, options)
    out = np.empty(s.p)
    for j in range(s.p):
        d = inv_corr.entry(j, j)
        if d < 1.0 - 1e-9:
            raise NumericalInconsistency(
                f"inverse correlation diagonal {d!r} below 1"
            )
        out[j] = max(0.0, 1.0 - 1.0 / d)
    return _frozen(out)


def residual_stats(f: ImpartialFit, s: MomentSummary) -> ResidualStats:
    """Residual variance of the fitted relationship in each direction.

    Rejects exact fits (zero residuals) with :class:`ValueError` and any
    zero coefficient with :class:`ZeroCoefficient`.
    """
    if f.exact:
        raise ValueError("exact fit has zero residuals; statistics are undefined")
    b = f.coefficients
    p = len(b)
    for j in range(p):
        if b[j] == 0.0:
            raise ZeroCoefficient(f.names[j])
    q = 0.0
    for i in range(p):
        for j in range(p):
            q += b[i] * s.cov.entry(i, j) * b[j]
    variances = np.array([q / (b[j] * b[j]) for j in range(p)])
    scaled = np.array([abs(b[j]) * math.sqrt(variances[j]) for j in range(p)])
    return ResidualStats(f.names, q, variances, scaled)


def reliability(var_true: float, var_observed: float) -> float:
    """Fraction of observed variance attributable to the true signal.

    Raises :class:`OutOfRange` unless 0 <= var_true <= var_observed with
    var_observed positive.
    """
    if not (var_observed > 0.0 and 0.0 <= var_true <= var_observed):
        raise OutOfRange(
            f"need 0 <= var_true <= var_observed, got {var_true!r}, {var_observed!r}"
        )
    return var_true / var_observed


def greenall_report(
    s: MomentSummary, first, second, options: NumericOptions = DEFAULT_OPTIONS
) -> GreenallReport:
    """Squared-error comparison of the geometric-mean line with least squares.

    For each of the two variables in turn, sums of squared residuals are
    measured in that variable's direction for both lines.  The inflation
    ratio is identical in the two directions and equals 2 / (1 + |r|),
    reaching at most 2 as the correlation vanishes.  Near |r| = 1 both
    error sums approach zero and the ratio is reported at its limit 1.
    """
    i = _resolve(s.names, first)
    j = _resolve(s.names, second)
    if i == j:
        raise ValueError("need two distinct variables")
    for idx in (i, j):
        if idx in s.zero_variance:
            raise ZeroVariance(s.names[idx])
    r = s.corr.entry(i, j)
    if abs(r) < options.sign_tolerance:
        raise SignUndefined(
            f"correlation {r:.3g} between {s.names[i]!r} and {s.names[j]!r} "
            "is too small to orient the geometric-mean line"
        )
    dof = s.n - 1
    sse_gmfr = []
    sse_ols = []
    inflation = []
    for dep in (i, j):
        var_dep = s.cov.entry(dep, dep)
        gmfr = dof * 2.0 * var_dep * (1.0 - abs(r))
        ols = dof * var_dep * (1.0 - r * r)
        sse_gmfr.append(gmfr)
        sse_ols.append(ols)
        if abs(r) >= 1.0 - 1e-12:
            inflation.append(1.0)
        else:
            inflation.append(gmfr / ols)
    return GreenallReport(
        dependent=s.names[i],
        regressor=s.names[j],
        r=float(r),
        sse_gmfr=(sse_gmfr[0], sse_gmfr[1]),
        sse_ols=(sse_ols[0], sse_ols[1]),
        inflation=(inflation[0], inflation[1]),
    )


def sign_violations(
    f: ImpartialFit, s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> tuple[tuple[str, str], ...]:
    """Variable pairs whose precision-matrix sign contradicts the fit's signs.

    Empty for exact fits, which carry no precision matrix.
    """
    if f.exact:
        return ()
    inv, _ = spd_inverse(s.cov, options)
    b = f.coefficients
    bad = []
    for i in range(s.p):
        for j in range(i + 1, s.p):
            c = inv.entry(i, j)
            if c == 0.0 or (c > 0.0) != (b[i] * b[j] > 0.0):
                bad.append((s.names[i], s.names[j]))
    return tuple(bad)


def diagnostics_report(
    f: ImpartialFit, s: MomentSummary, options: NumericOptions = DEFAULT_OPTIONS
) -> DiagnosticsReport:
    """Assemble the full diagnostics bundle for a fitted relationship."""
    if f.exact:
        return DiagnosticsReport(s.names, None, None, None, ())
    return DiagnosticsReport(
        names=s.names,
        partial_correlations=partial_correlations(s, options),
        r_squared=r_squared_all(s, options),
        residual=residual_stats(f, s),
        sign_violations=sign_violations(f, s, options),
    )
