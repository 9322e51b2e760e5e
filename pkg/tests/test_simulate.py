"""Lattice simulation configs, sample generation, and the Monte Carlo study."""

import math

import numpy as np
import pytest

from impartial import (
    SimConfig,
    benchmark_config,
    generate_lattice,
    lattice_points,
    monte_carlo,
    summarize,
)
from impartial.rng import gaussian


class TestSimConfig:
    def test_names(self):
        cfg = SimConfig(
            beta=(2.0, 3.0),
            constant=1.0,
            levels=((0.0, 1.0), (0.0, 1.0)),
            noise_sd=(1.0, 1.0, 1.0),
        )
        assert cfg.names == ("x1", "x2", "y")

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(beta=(), constant=0.0, levels=(), noise_sd=(1.0,)),
            dict(beta=(1.0,), constant=0.0, levels=(), noise_sd=(1.0, 1.0)),
            dict(beta=(1.0,), constant=0.0, levels=((1.0, 1.0),), noise_sd=(1.0, 1.0)),
            dict(beta=(1.0,), constant=0.0, levels=((0.0, 1.0),), noise_sd=(1.0,)),
            dict(beta=(1.0,), constant=0.0, levels=((0.0, 1.0),), noise_sd=(1.0, -1.0)),
            dict(
                beta=(1.0,),
                constant=0.0,
                levels=((0.0, 1.0),),
                noise_sd=(1.0, 1.0),
                replicates=0,
            ),
            dict(
                beta=(1.0,),
                constant=0.0,
                levels=((0.0, 1.0),),
                noise_sd=(1.0, 1.0),
                noise_family="cauchy",
            ),
        ],
    )
    def test_rejects_malformed(self, kwargs):
        with pytest.raises(ValueError):
            SimConfig(**kwargs)

    def test_from_mapping_nested_levels(self):
        cfg = SimConfig.from_mapping(
            {
                "beta": [2.0, 3.0],
                "constant": 1.0,
                "levels": [[0.0, 1.0], [0.0, 2.0]],
                "noise_sd": [1.0, 0.5, 2.0],
                "seed": 7,
                "replicates": 50,
            }
        )
        assert cfg.levels == ((0.0, 1.0), (0.0, 2.0))
        assert cfg.noise_sd == (1.0, 0.5, 2.0)
        assert cfg.seed == 7
        assert cfg.replicates == 50

    def test_from_mapping_shared_levels_and_scalar_noise(self):
        cfg = SimConfig.from_mapping(
            {
                "beta": [2.0, 3.0],
                "constant": 1.0,
                "levels": [0.0, 1.0, 2.0],
                "noise_sd": 0.5,
            }
        )
        assert cfg.levels == ((0.0, 1.0, 2.0), (0.0, 1.0, 2.0))
        assert cfg.noise_sd == (0.5, 0.5, 0.5)
        assert cfg.replicates == 1000
        assert cfg.noise_family == "gaussian"

    def test_from_mapping_rejects_unknown_keys(self):
        with pytest.raises(ValueError) as err:
            SimConfig.from_mapping(
                {
                    "beta": [1.0],
                    "constant": 0.0,
                    "levels": [0.0, 1.0],
                    "noise_sd": 1.0,
                    "bias": 3.0,
                }
            )
        assert "bias" in str(err.value)

    def test_from_mapping_rejects_missing_keys(self):
        with pytest.raises(ValueError):
            SimConfig.from_mapping({"beta": [1.0], "constant": 0.0})

    def test_mapping_round_trip(self):
        cfg = benchmark_config(seed=5, replicates=123)
        again = SimConfig.from_mapping(cfg.to_mapping())
        assert again == cfg


class TestBenchmarkConfig:
    def test_design_moments(self):
        cfg = benchmark_config()
        x = lattice_points(cfg.levels)
        assert x.shape == (36, 2)
        s = summarize(generate_lattice(cfg).truth)
        # the level spacing is chosen to make the regressor sample
        # variance exactly 8.5
        assert s.cov.entry(0, 0) == pytest.approx(8.5, rel=1e-14)
        assert s.cov.entry(1, 1) == pytest.approx(8.5, rel=1e-14)
        assert s.means[0] == pytest.approx(0.9, rel=1e-14)
        assert s.means[1] == pytest.approx(0.88, rel=1e-14)

    def test_truth_satisfies_relationship(self):
        sample = generate_lattice(benchmark_config(), stream=4)
        t = sample.truth.values
        np.testing.assert_allclose(
            t[:, 2], 1.0 + 2.0 * t[:, 0] + 3.0 * t[:, 1], rtol=1e-14
        )


class TestLattice:
    def test_full_factorial_order(self):
        pts = lattice_points(((0.0, 1.0), (5.0, 6.0, 7.0)))
        assert pts.shape == (6, 2)
        # last variable varies fastest
        assert pts[0].tolist() == [0.0, 5.0]
        assert pts[1].tolist() == [0.0, 6.0]
        assert pts[3].tolist() == [1.0, 5.0]

    def test_generate_is_deterministic_per_stream(self):
        cfg = benchmark_config(seed=9)
        a = generate_lattice(cfg, stream=2)
        b = generate_lattice(cfg, stream=2)
        c = generate_lattice(cfg, stream=3)
        assert a.observed.values.tobytes() == b.observed.values.tobytes()
        assert a.observed.values.tobytes() != c.observed.values.tobytes()

    def test_noise_matches_stream_draws(self):
        cfg = benchmark_config(seed=9)
        sample = generate_lattice(cfg, stream=1)
        want = gaussian(36 * 3, seed=9, stream=1).reshape(36, 3)
        rebuilt = sample.truth.values + want * np.array([1.0, 1.0, 1.0])
        np.testing.assert_array_equal(sample.observed.values, rebuilt)

    def test_noise_scales_by_sd(self):
        cfg = SimConfig(
            beta=(2.0,),
            constant=0.0,
            levels=((0.0, 1.0, 2.0),),
            noise_sd=(0.5, 3.0),
            seed=11,
        )
        sample = generate_lattice(cfg, stream=0)
        raw = gaussian(6, seed=11, stream=0).reshape(3, 2)
        rebuilt = sample.truth.values + raw * np.array([0.5, 3.0])
        np.testing.assert_array_equal(sample.observed.values, rebuilt)

    def test_uniform_family_moments(self):
        cfg = SimConfig(
            beta=(1.0,),
            constant=0.0,
            levels=(tuple(float(v) for v in range(10)),),
            noise_sd=(2.0, 2.0),
            seed=3,
            noise_family="uniform",
        )
        draws = []
        for stream in range(400):
            sample = generate_lattice(cfg, stream)
            draws.append(sample.observed.values - sample.truth.values)
        noise = np.concatenate(draws).ravel()
        # centred, sd scaled to 2, bounded support of half-width sqrt(3)*2
        assert abs(noise.mean()) < 0.05
        assert noise.std() == pytest.approx(2.0, abs=0.05)
        assert np.abs(noise).max() <= math.sqrt(3.0) * 2.0 + 1e-12
        assert np.abs(noise).max() > math.sqrt(3.0) * 2.0 * 0.99


class TestMonteCarlo:
    def test_deterministic(self):
        cfg = benchmark_config(seed=6, replicates=40)
        a = monte_carlo(cfg)
        b = monte_carlo(cfg)
        for key in ("impartial", "ols", "orthogonal"):
            assert (
                a.estimators[key].mean.tobytes() == b.estimators[key].mean.tobytes()
            )
        assert a.reliability_mean.tobytes() == b.reliability_mean.tobytes()

    def test_shapes_and_labels(self):
        cfg = benchmark_config(seed=6, replicates=25)
        result = monte_carlo(cfg)
        assert result.names == ("x1", "x2", "y")
        assert result.target == "y"
        assert result.replicates == 25
        assert set(result.estimators) == {"impartial", "ols", "orthogonal"}
        stats = result.estimators["impartial"]
        assert stats.parameters == ("slope[x1]", "slope[x2]", "intercept")
        assert stats.mean.shape == (3,)
        assert stats.sd.shape == (3,)
        assert stats.failed == 0
        assert result.reliability_mean.shape == (3,)

    def test_noise_free_run_recovers_truth_exactly(self):
        cfg = SimConfig(
            beta=(2.0, 3.0),
            constant=1.0,
            levels=((0.0, 1.0, 2.0), (0.0, 1.0)),
            noise_sd=(0.0, 0.0, 0.0),
            replicates=3,
        )
        result = monte_carlo(cfg)
        imp = result.estimators["impartial"]
        np.testing.assert_allclose(imp.mean, [2.0, 3.0, 1.0], atol=1e-9)
        np.testing.assert_allclose(result.reliability_mean, 1.0, rtol=1e-12)

    def test_attenuation_ordering(self):
        # least squares is pulled toward zero by regressor noise; the
        # impartial fit corrects most of it
        cfg = benchmark_config(seed=6, replicates=200)
        result = monte_carlo(cfg)
        truth = np.array([2.0, 3.0])
        ols = result.estimators["ols"].mean[:2]
        imp = result.estimators["impartial"].mean[:2]
        assert np.all(ols < truth)
        assert np.abs(imp - truth).max() < np.abs(ols - truth).max()

    def test_reliability_tracks_noise_share(self):
        cfg = benchmark_config(seed=6, replicates=200)
        result = monte_carlo(cfg)
        # population reliability of each regressor is 8.5 / 9.5
        np.testing.assert_allclose(
            result.reliability_mean[:2], 8.5 / 9.5, atol=0.02
        )
        assert result.reliability_mean[2] > result.reliability_mean[0]
