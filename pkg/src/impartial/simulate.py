"""Lattice simulation and Monte Carlo comparison of the estimators.

A simulated experiment places the x variables on a full-factorial lattice
of fixed levels, computes the exact response from known coefficients, and
then adds independent noise to every variable, response and regressors
alike.  Keeping the noise-free values lets the study report measurement
reliability exactly.  Replicates draw from streams keyed by (seed,
replicate), so any execution order gives identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from impartial.data import Dataset, summarize
from impartial.errors import ImpartialError
from impartial.fit import impartial_fit, ols_single, orthogonal_fit, solve_for
from impartial.linalg import _frozen
from impartial.options import DEFAULT_OPTIONS, NumericOptions
from impartial.rng import gaussian, uniform

NOISE_FAMILIES = ("gaussian", "uniform")
_SQRT_12 = 3.4641016151377544

_CONFIG_KEYS = {
    "beta",
    "constant",
    "levels",
    "noise_sd",
    "seed",
    "replicates",
    "noise_family",
}


@dataclass(frozen=True)
class SimConfig:
    """Recipe for one simulated experiment.

    ``levels`` holds the lattice values of each x variable (at least two
    distinct values each; repeats are allowed and weight the design).
    ``noise_sd`` gives one standard deviation per variable, the response
    last.  ``noise_family`` is ``gaussian`` or ``uniform``; uniform noise
    is centred and scaled to the requested standard deviation.
    """

    beta: tuple[float, ...]
    constant: float
    levels: tuple[tuple[float, ...], ...]
    noise_sd: tuple[float, ...]
    seed: int = 0
    replicates: int = 1000
    noise_family: str = "gaussian"

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        levels = tuple(tuple(float(v) for v in row) for row in self.levels)
        noise_sd = tuple(float(v) for v in self.noise_sd)
        if not beta:
            raise ValueError("need at least one x variable")
        if len(levels) != len(beta):
            raise ValueError("need one level set per x variable")
        for j, row in enumerate(levels):
            if len(set(row)) < 2:
                raise ValueError(f"levels for x{j + 1} need at least two distinct values")
        if len(noise_sd) != len(beta) + 1:
            raise ValueError("need one noise standard deviation per variable")
        if any(v < 0.0 for v in noise_sd):
            raise ValueError("noise standard deviations must be nonnegative")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.noise_family not in NOISE_FAMILIES:
            raise ValueError(f"noise_family must be one of {NOISE_FAMILIES}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "noise_sd", noise_sd)
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "replicates", int(self.replicates))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f"x{j + 1}" for j in range(len(self.beta))) + ("y",)

    @classmethod
    def from_mapping(cls, mapping) -> "SimConfig":
        """Build a config from a parsed JSON object.

        ``levels`` may be one list (shared by every x variable) or one
        list per variable; ``noise_sd`` may be a single number.  Unknown
        keys are rejected.
        """
        data = dict(mapping)
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for key in ("beta", "constant", "levels", "noise_sd"):
            if key not in data:
                raise ValueError(f"config is missing {key!r}")
        beta = data["beta"]
        if not isinstance(beta, (list, tuple)):
            raise ValueError("beta must be a list")
        levels = data["levels"]
        if levels and isinstance(levels[0], (list, tuple)):
            level_rows = tuple(tuple(row) for row in levels)
        else:
            level_rows = tuple(tuple(levels) for _ in beta)
        noise_sd = data["noise_sd"]
        if not isinstance(noise_sd, (list, tuple)):
            noise_sd = [noise_sd] * (len(beta) + 1)
        return cls(
            beta=tuple(beta),
            constant=data["constant"],
            levels=level_rows,
            noise_sd=tuple(noise_sd),
            seed=int(data.get("seed", 0)),
            replicates=int(data.get("replicates", 1000)),
            noise_family=data.get("noise_family", "gaussian"),
        )

    def to_mapping(self) -> dict:
        return {
            "beta": list(self.beta),
            "constant": self.constant,
            "levels": [list(row) for row in self.levels],
            "noise_sd": list(self.noise_sd),
            "seed": self.seed,
            "replicates": self.replicates,
            "noise_family": self.noise_family,
        }


def benchmark_config(seed: int = 0, replicates: int = 1000) -> SimConfig:
    """The standard two-regressor demonstration design.

    Six equally spaced levels per x variable, chosen so each x column has
    sample variance exactly 8.5, means 0.9 and 0.88, true relationship
    y = 1 + 2 x1 + 3 x2, and unit noise on every variable.
    """
    step = math.sqrt(8.5 / 3.0)
    return SimConfig(
        beta=(2.0, 3.0),
        constant=1.0,
        levels=(
            tuple(0.9 + (k - 2.5) * step for k in range(6)),
            tuple(0.88 + (k - 2.5) * step for k in range(6)),
        ),
        noise_sd=(1.0, 1.0, 1.0),
        seed=seed,
        replicates=replicates,
    )


@dataclass(frozen=True, eq=False)
class LatticeSample:
    """One simulated draw: noisy observations plus their noise-free truth."""

    observed: Dataset
    truth: Dataset


def lattice_points(levels) -> np.ndarray:
    """Full-factorial design matrix; the last variable varies fastest."""
    return np.array(list(product(*levels)), dtype=np.float64)


def generate_lattice(cfg: SimConfig, stream: int = 0) -> LatticeSample:
    """Simulate one experiment from the (cfg.seed, stream) random stream."""
    x = lattice_points(cfg.levels)
    n, k = x.shape
    p = k + 1
    y = np.full(n, cfg.constant)
    for j in range(k):
        y = y + cfg.beta[j] * x[:, j]
    truth = np.column_stack([x, y])
    if cfg.noise_family == "uniform":
        noise = (uniform(n * p, cfg.seed, stream) - 0.5) * _SQRT_12
    else:
        noise = gaussian(n * p, cfg.seed, stream)
    observed = truth + noise.reshape(n, p) * np.asarray(cfg.noise_sd)
    return LatticeSample(
        observed=Dataset(cfg.names, observed),
        truth=Dataset(cfg.names, truth),
    )


@dataclass(frozen=True, eq=False)
class EstimatorStats:
    """Replicate mean and spread of one estimator's solved-form parameters."""

    parameters: tuple[str, ...]
    mean: np.ndarray
    sd: np.ndarray
    failed: int

    def __post_init__(self):
        object.__setattr__(self, "mean", _frozen(np.array(self.mean, dtype=np.float64)))
        object.__setattr__(self, "sd", _frozen(np.array(self.sd, dtype=np.float64)))


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    """Aggregate comparison of the estimators over simulated replicates.

    Estimates are in solved form for the response (slopes then intercept).
    ``reliability_mean`` is the average, per variable, of the ratio of
    noise-free to observed sample variance across replicates.
    """

    names: tuple[str, ...]
    target: str
    replicates: int
    seed: int
    estimators: dict[str, EstimatorStats]
    reliability_mean: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "reliability_mean",
            _frozen(np.array(self.reliability_mean, dtype=np.float64)),
        )


def monte_carlo(cfg: SimConfig, options: NumericOptions = DEFAULT_OPTIONS) -> MonteCarloResult:
    """Run ``cfg.replicates`` simulated experiments and compare estimators.

    Each replicate fits the impartial relationship, the least-squares
    regression of the response, and the orthogonal regression, all solved
    for the response.  Replicates where an estimator fails are excluded
    from that estimator's averages and counted in ``failed``.
    """
    names = cfg.names
    target = names[-1]
    k = len(cfg.beta)
    labels = tuple(f"slope[{nm}]" for nm in names[:-1]) + ("intercept",)

    rows: dict[str, list[np.ndarray]] = {"impartial": [], "ols": [], "orthogonal": []}
    failed = {"impartial": 0, "ols": 0, "orthogonal": 0}
    reliability_sum = np.zeros(k + 1)

    for r in range(cfg.replicates):
        sample = generate_lattice(cfg, r)
        s = summarize(sample.observed)
        s_true = summarize(sample.truth)
        reliability_sum += s_true.cov.diagonal() / s.cov.diagonal()

        try:
            solved = solve_for(impartial_fit(s, options), target)
            rows["impartial"].append(np.append(solved.slopes, solved.intercept))
        except ImpartialError:
            failed["impartial"] += 1
        try:
            o = ols_single(s, target, options)
            rows["ols"].append(np.append(o.slopes, o.intercept))
        except ImpartialError:
            failed["ols"] += 1
        try:
            solved = solve_for(orthogonal_fit(s, options), target)
            rows["orthogonal"].append(np.append(solved.slopes, solved.intercept))
        except ImpartialError:
            failed["orthogonal"] += 1

    estimators = {}
    for key, collected in rows.items():
        if collected:
            draws = np.array(collected)
            mean = draws.mean(axis=0)
            sd = draws.std(axis=0, ddof=1) if draws.shape[0] > 1 else np.full(k + 1, math.nan)
        else:
            mean = np.full(k + 1, math.nan)
            sd = np.full(k + 1, math.nan)
        estimators[key] = EstimatorStats(labels, mean, sd, failed[key])

    return MonteCarloResult(
        names=names,
        target=target,
        replicates=cfg.replicates,
        seed=cfg.seed,
        estimators=estimators,
        reliability_mean=reliability_sum / cfg.replicates,
    )
