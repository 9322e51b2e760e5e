"""Case-resampling bootstrap intervals for the impartial fit.

Each replicate draws its row indices from an independent random stream
keyed by (seed, replicate index), so results do not depend on execution
order and are reproducible for a fixed seed.  Replicate coefficient
vectors are sign-aligned to the point estimate before aggregation (the
symmetric form is only defined up to a global sign flip).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from impartial._backend import kernels
from impartial.data import Dataset, MomentSummary, summarize
from impartial.errors import AllReplicatesFailed, ImpartialError, InvalidLevel
from impartial.fit import impartial_fit, solve_for
from impartial.linalg import SquareSym, _frozen
from impartial.options import DEFAULT_OPTIONS, NumericOptions

# intervals are flagged unreliable when at least 1 in 20 replicates fails
UNRELIABLE_FAILURE_DENOM = 20


@dataclass(frozen=True, eq=False)
class BootstrapResult:
    """Percentile confidence intervals for the fitted parameters.

    ``parameters`` labels the columns of ``point``, ``lower``, ``upper``,
    and ``draws`` (the aligned successful replicate values).  When at
    least 5% of replicates fail, ``unreliable`` is set.
    """

    parameters: tuple[str, ...]
    point: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    level: float
    replicates: int
    failed: int
    unreliable: bool
    seed: int
    draws: np.ndarray

    def __post_init__(self):
        for name in ("point", "lower", "upper", "draws"):
            object.__setattr__(
                self, name, _frozen(np.array(getattr(self, name), dtype=np.float64))
            )


def _nearest_rank(q: float, m: int) -> int:
    # ceil(q*m) with a nudge so exact integer boundaries are not pushed up
    # by floating-point error in q*m
    return min(m, max(1, math.ceil(q * m - 1e-9)))


def bootstrap(
    d: Dataset,
    replicates: int,
    level: float = 0.95,
    seed: int = 0,
    target=None,
    options: NumericOptions = DEFAULT_OPTIONS,
) -> BootstrapResult:
    """Percentile bootstrap for the impartial fit of ``d``.

    With ``target`` unset the parameters are the symmetric-form
    coefficients plus the constant; naming a ``target`` variable reports
    the solved form instead (its slopes and intercept).  Intervals use
    nearest-rank percentiles of the successful replicate values.

    Failed replicates (resamples whose covariance cannot be fitted the
    same way as the full data) are counted, never fabricated; if all of
    them fail, :class:`AllReplicatesFailed` is raised.

    Raises
    ------
    InvalidLevel
        ``level`` outside the open interval (0, 1).
    ValueError
        ``replicates`` below 1.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    if not 0.0 < level < 1.0:
        raise InvalidLevel(f"confidence level must be in (0, 1), got {level!r}")

    s = summarize(d)
    point_fit = impartial_fit(s, options)
    n, p = d.n, d.p

    t = None
    if target is not None:
        solved = solve_for(point_fit, target)
        t = d.names.index(solved.target)
        labels = tuple(f"slope[{nm}]" for nm in solved.names) + ("intercept",)
        point = np.append(solved.slopes, solved.intercept)
    else:
        labels = tuple(f"b[{nm}]" for nm in d.names) + ("constant",)
        point = np.append(point_fit.coefficients, point_fit.constant)

    idx = np.empty(n, dtype=np.int64)
    means = np.empty(p, dtype=np.float64)
    cov = np.empty(p * (p + 1) // 2, dtype=np.float64)
    point_b = point_fit.coefficients

    rows = []
    failed = 0
    for r in range(replicates):
        kernels.resample_indices_fill(idx, n, n, seed & 0xFFFFFFFFFFFFFFFF, r)
        kernels.moments_indexed(d.values, idx, n, p, means, cov)
        summary = MomentSummary(d.names, n, means, SquareSym(p, cov))
        try:
            rep = impartial_fit(summary, options)
        except ImpartialError:
            failed += 1
            continue
        if rep.exact != point_fit.exact:
            failed += 1
            continue
        b = rep.coefficients
        constant = rep.constant
        if float(b @ point_b) < 0.0:
            b = -b
            constant = -constant
        if t is None:
            rows.append(np.append(b, constant))
        else:
            if b[t] == 0.0:
                failed += 1
                continue
            others = [j for j in range(p) if j != t]
            rows.append(np.append(-b[others] / b[t], constant / b[t]))

    if not rows:
        raise AllReplicatesFailed(f"all {replicates} replicates failed")

    draws = np.array(rows)
    m = draws.shape[0]
    alpha = 1.0 - level
    lo_rank = _nearest_rank(alpha / 2.0, m)
    hi_rank = _nearest_rank(1.0 - alpha / 2.0, m)
    lower = np.empty(len(labels))
    upper = np.empty(len(labels))
    for col in range(len(labels)):
        ordered = np.sort(draws[:, col])
        lower[col] = ordered[lo_rank - 1]
        upper[col] = ordered[hi_rank - 1]

    return BootstrapResult(
        parameters=labels,
        point=point,
        lower=lower,
        upper=upper,
        level=level,
        replicates=replicates,
        failed=failed,
        unreliable=failed * UNRELIABLE_FAILURE_DENOM >= replicates,
        seed=seed,
        draws=draws,
    )
