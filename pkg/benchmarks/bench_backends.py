#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-Python kernel backends.

Each workload is run through both backends on identical inputs; the
outputs are checked for bit-identity first (that is the backends'
contract) and then timed, reporting the best of ``--repeat`` runs.  The
optional ``--end-to-end`` section times a full bootstrap in fresh
subprocesses with ``IMPARTIAL_BACKEND`` forced each way, which includes
everything the library layers on top of the kernels.

Run from the repository root:

    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --repeat 7 --end-to-end
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from impartial import _pykernels

try:
    from impartial import _core
except ImportError:
    _core = None


def packed(matrix: np.ndarray) -> np.ndarray:
    """Lower triangle of a symmetric matrix, row-major, as a flat array."""
    p = matrix.shape[0]
    return np.concatenate([matrix[i, : i + 1] for i in range(p)])


def random_spd(rng: np.random.Generator, p: int) -> np.ndarray:
    a = rng.normal(size=(p, p))
    return a @ a.T + p * np.eye(p)


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads(rng: np.random.Generator):
    """Yield (label, runner) pairs; runner(kernels) returns output bytes."""

    for p in (10, 30):
        a = packed(random_spd(rng, p))
        size = a.size

        def spd_inverse(kernels, a=a, p=p, size=size):
            factor = np.zeros(size)
            inverse = np.empty(size)
            rc = kernels.chol_packed(a, p, factor, 1e-12)
            assert rc == -1
            cond = kernels.inv_from_chol_packed(factor, p, inverse)
            return inverse.tobytes() + np.float64(cond).tobytes()

        yield f"spd inverse (p={p})", spd_inverse

    for p in (10, 30):
        m = random_spd(rng, p)

        def eigensolve(kernels, m=m, p=p):
            a = m.copy()
            v = np.empty((p, p))
            sweeps = kernels.jacobi_full(a, v, p, 100, 1e-12)
            assert sweeps != -1
            return a.tobytes() + v.tobytes()

        yield f"jacobi eigensolve (p={p})", eigensolve

    x = rng.normal(size=(20_000, 6))

    def column_moments(kernels, x=x):
        means = np.empty(6)
        cov = np.empty(21)
        kernels.moments(x, x.shape[0], 6, means, cov)
        return means.tobytes() + cov.tobytes()

    yield "moments (20000 x 6)", column_moments

    idx = np.empty(20_000, dtype=np.int64)
    _pykernels.resample_indices_fill(idx, idx.size, x.shape[0], 7, 0)

    def resampled_moments(kernels, x=x, idx=idx):
        means = np.empty(6)
        cov = np.empty(21)
        kernels.moments_indexed(x, idx, idx.size, 6, means, cov)
        return means.tobytes() + cov.tobytes()

    yield "resampled moments (20000 x 6)", resampled_moments

    def gaussian_stream(kernels):
        out = np.empty(100_000)
        kernels.gaussian_fill(out, out.size, 42, 3)
        return out.tobytes()

    yield "gaussian stream (100000)", gaussian_stream

    def index_stream(kernels):
        out = np.empty(100_000, dtype=np.int64)
        kernels.resample_indices_fill(out, out.size, 36, 42, 3)
        return out.tobytes()

    yield "resample indices (100000)", index_stream


def fmt_seconds(seconds: float) -> str:
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.2f} s "


_END_TO_END = """
import time
from impartial._backend import BACKEND
from impartial.resample import bootstrap
from impartial.simulate import benchmark_config, generate_lattice

observed = generate_lattice(benchmark_config(seed=11), 0).observed
start = time.perf_counter()
result = bootstrap(observed, 300, level=0.95, seed=7, target="y")
elapsed = time.perf_counter() - start
print(BACKEND, elapsed, result.draws.tobytes().hex()[:64])
"""


def run_end_to_end() -> None:
    print()
    print("end-to-end bootstrap (300 replicates, fresh process per backend)")
    rows = {}
    for backend in ("c", "python"):
        env = dict(os.environ, IMPARTIAL_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, "-c", _END_TO_END],
            capture_output=True,
            text=True,
            env=env,
        )
        if proc.returncode != 0:
            print(f"  {backend:<8} unavailable: {proc.stderr.strip().splitlines()[-1]}")
            continue
        name, elapsed, digest = proc.stdout.split()
        assert name == backend
        rows[backend] = (float(elapsed), digest)
        print(f"  {backend:<8} {fmt_seconds(float(elapsed))}")
    if len(rows) == 2:
        if rows["c"][1] != rows["python"][1]:
            raise SystemExit("end-to-end draws differ between backends")
        print(f"  speedup  {rows['python'][0] / rows['c'][0]:8.1f}x  (draws identical)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    parser.add_argument("--seed", type=int, default=0, help="workload input seed")
    parser.add_argument(
        "--end-to-end",
        action="store_true",
        help="also time a full bootstrap per backend in subprocesses",
    )
    args = parser.parse_args(argv)

    if _core is None:
        print("compiled backend not importable; showing pure-Python times only")
    print(f"{'workload':<32} {'python':>11} {'compiled':>11} {'speedup':>9}")

    rng = np.random.default_rng(args.seed)
    for label, runner in workloads(rng):
        py_bytes = runner(_pykernels)
        if _core is not None:
            c_bytes = runner(_core)
            if c_bytes != py_bytes:
                raise SystemExit(f"backend outputs differ on: {label}")
        py_time = best_of(lambda: runner(_pykernels), args.repeat)
        if _core is None:
            print(f"{label:<32} {fmt_seconds(py_time)}")
            continue
        c_time = best_of(lambda: runner(_core), args.repeat)
        print(
            f"{label:<32} {fmt_seconds(py_time)} {fmt_seconds(c_time)}"
            f" {py_time / c_time:8.1f}x"
        )

    if args.end_to_end:
        run_end_to_end()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
