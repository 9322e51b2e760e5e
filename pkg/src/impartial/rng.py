"""Deterministic random streams for simulation and resampling.

A (seed, stream) pair names an independent SplitMix64 sequence, so work
split across replicates draws identical numbers no matter how the
replicates are scheduled.  Gaussian draws use the Box-Muller cosine
branch and consume exactly two raw 64-bit values each, which pins down
the full sequence for reproducibility tests.
"""

from __future__ import annotations

import numpy as np

from impartial._backend import kernels

_MASK = 0xFFFFFFFFFFFFFFFF


def _u64(value: int) -> int:
    # two's-complement wrap so negative Python ints are accepted
    return int(value) & _MASK


def derive_stream(seed: int, stream: int) -> int:
    """Initial generator state for the given (seed, stream) pair."""
    return int(kernels.derive_stream(_u64(seed), _u64(stream)))


def gaussian(count: int, seed: int, stream: int = 0) -> np.ndarray:
    """``count`` standard normal draws from the (seed, stream) sequence."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    out = np.empty(count, dtype=np.float64)
    kernels.gaussian_fill(out, count, _u64(seed), _u64(stream))
    return out


def uniform(count: int, seed: int, stream: int = 0) -> np.ndarray:
    """``count`` uniform draws on [0, 1) from the (seed, stream) sequence."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    out = np.empty(count, dtype=np.float64)
    kernels.uniform_fill(out, count, _u64(seed), _u64(stream))
    return out


def resample_indices(count: int, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """``count`` row indices drawn uniformly from ``range(n)``.

    Uses the multiply-high reduction of the raw 64-bit value, so every
    index is equally likely to within 2**-64.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    if n < 1:
        raise ValueError("n must be positive")
    out = np.empty(count, dtype=np.int64)
    kernels.resample_indices_fill(out, count, n, _u64(seed), _u64(stream))
    return out
