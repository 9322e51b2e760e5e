"""Shared fixtures: the three-variable demonstration problem.

``DEMO_COV`` is the published sample covariance of the worked example
(two regressors plus response, n = 36).  ``demo_dataset`` rebuilds a
concrete dataset with exactly those moments so CSV-level tests exercise
the same numbers: columns of an orthonormal zero-mean basis are mixed by
the Cholesky factor, which pins the sample covariance to the target up
to a few ulps.
"""

import json

import numpy as np
import pytest

from impartial.data import Dataset, MomentSummary, summarize
from impartial.simulate import benchmark_config

DEMO_NAMES = ("x1", "x2", "y")
DEMO_N = 36
DEMO_COV = np.array(
    [
        [9.54, 1.29, 17.23],
        [1.29, 9.40, 28.14],
        [17.23, 28.14, 112.88],
    ]
)
DEMO_MEANS = np.array([0.9, 0.88, 5.44])


def make_demo_dataset() -> Dataset:
    rng = np.random.default_rng(314159)
    base = rng.standard_normal((DEMO_N, 3))
    base -= base.mean(axis=0)
    q, _ = np.linalg.qr(base)
    q -= q.mean(axis=0)
    q, _ = np.linalg.qr(q)
    chol = np.linalg.cholesky(DEMO_COV)
    values = q @ (np.sqrt(DEMO_N - 1) * chol.T) + DEMO_MEANS
    return Dataset(DEMO_NAMES, values)


def dataset_to_csv(d: Dataset) -> str:
    lines = [",".join(d.names)]
    for row in d.values:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


@pytest.fixture(scope="session")
def demo_summary() -> MomentSummary:
    return MomentSummary.from_moments(DEMO_NAMES, DEMO_N, DEMO_MEANS, DEMO_COV)


@pytest.fixture(scope="session")
def demo_dataset() -> Dataset:
    return make_demo_dataset()


@pytest.fixture(scope="session")
def demo_csv(tmp_path_factory, demo_dataset) -> str:
    path = tmp_path_factory.mktemp("data") / "demo.csv"
    path.write_text(dataset_to_csv(demo_dataset), encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def bench_config_file(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("config") / "bench.json"
    path.write_text(json.dumps(benchmark_config(seed=3).to_mapping()), encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def bench_dataset() -> Dataset:
    from impartial.simulate import generate_lattice

    return generate_lattice(benchmark_config(seed=11), 0).observed


@pytest.fixture(scope="session")
def bench_csv(tmp_path_factory, bench_dataset) -> str:
    path = tmp_path_factory.mktemp("data") / "bench.csv"
    path.write_text(dataset_to_csv(bench_dataset), encoding="utf-8")
    return str(path)
