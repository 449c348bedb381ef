import math

import numpy as np
import pytest

from toafall import (BracketFailureError, DegenerateKinematicsError,
                     InsufficientSamplesError, PhysicalParams, SampleBatch,
                     SamplerConfig, classical_toa, compute_moments, draw_xi,
                     estimate_stats, first_crossing, longtof_toa, make_rng,
                     sample_toa, sample_toa_longtof, xi_stream)
from toafall.distribution import cdf

import references as ref
from conftest import free_fall_density, hydrogen_params


class TestDeviateStream:
    def test_pinned_first_values(self):
        np.testing.assert_array_equal(xi_stream(0, 5), np.array(ref.XI_SEED0_FIRST5))

    def test_reproducible_and_chunk_invariant_prefix(self):
        a = xi_stream(1234, 100)
        b = xi_stream(1234, 100)
        np.testing.assert_array_equal(a, b)
        # a longer batch extends, never rewrites, the stream prefix
        np.testing.assert_array_equal(xi_stream(1234, 1000)[:100], a)

    def test_draw_xi_matches_stream_head(self):
        assert draw_xi(make_rng(99)) == xi_stream(99, 1)[0]

    def test_mean_within_clt_bound(self):
        xi = xi_stream(7, 1_000_000)
        assert abs(xi.mean()) < 4.0 / math.sqrt(len(xi))

    def test_variance_within_one_percent(self):
        xi = xi_stream(7, 1_000_000)
        assert abs(xi.var() - 1.0) < 0.01

    def test_distinct_seeds_differ(self):
        assert not np.array_equal(xi_stream(1, 50), xi_stream(2, 50))


class TestFirstCrossing:
    def test_zero_quantile_gives_classical_time(self, row1):
        params, x = row1
        assert first_crossing(params, x, 0.0) == classical_toa(params, x)

    def test_boundary_quantile_never_crosses(self):
        # xi = x / sigma0: starts exactly at the detector, moves away
        params = hydrogen_params(g=1e-7)
        x = 12 * params.sigma0
        assert first_crossing(params, x, x / params.sigma0) is None
        assert first_crossing(params, x, x / params.sigma0 + 1.0) is None

    def test_row1_against_longtof_oracle(self, row1):
        params, x = row1
        t = first_crossing(params, x, 1.0)
        assert t == pytest.approx(ref.LONGTOF_ROW1_XI1, rel=1e-3)
        assert t == pytest.approx(ref.ROOT_ROW1_XI1, rel=1e-12)

    def test_monotone_nonincreasing_in_xi(self, row1):
        params, x = row1
        xis = np.linspace(-4.0, x / params.sigma0 - 1.0, 60)
        roots = [first_crossing(params, x, xi) for xi in xis]
        assert all(r is not None for r in roots)
        assert all(a >= b for a, b in zip(roots, roots[1:]))

    def test_free_particle_slow_quantile_never_crosses(self):
        params = PhysicalParams(mass=1.0, sigma0=1.0, v0=0.5, g=0.0, hbar=1.0)
        # spread velocity sigma0/tau = 0.5: quantiles below -1 are outrun
        assert params.spread_velocity() == 0.5
        assert first_crossing(params, 20.0, -1.0) is None
        assert first_crossing(params, 20.0, -1.0001) is None
        assert first_crossing(params, 20.0, -0.999) is not None

    def test_bracket_failure_diagnostic(self, row3):
        params, x = row3
        with pytest.raises(BracketFailureError):
            first_crossing(params, x, -4.0, max_bracket_expansions=1)


class TestSampleToa:
    def test_bit_identical_for_same_seed(self, row1):
        params, x = row1
        cfg = SamplerConfig(seed=42, n_samples=5000)
        a = sample_toa(params, x, cfg)
        b = sample_toa(params, x, cfg)
        np.testing.assert_array_equal(a.toas, b.toas)
        assert a.failures == b.failures

    def test_worker_count_invariance(self, row1):
        params, x = row1
        serial = sample_toa(params, x, SamplerConfig(seed=9, n_samples=5000,
                                                     chunk_size=512))
        threaded = sample_toa(params, x, SamplerConfig(seed=9, n_samples=5000,
                                                       chunk_size=512, workers=4))
        np.testing.assert_array_equal(serial.toas, threaded.toas)

    def test_failure_accounting(self):
        # near-ish detector: a visible fraction of draws starts beyond it
        params = PhysicalParams(mass=1.0, sigma0=1.0, v0=0.0, g=1.0, hbar=1.0)
        cfg = SamplerConfig(seed=3, n_samples=20000)
        batch = sample_toa(params, 2.0, cfg)
        assert len(batch.toas) + batch.failures == cfg.n_samples
        # P(xi >= x/sigma0) = Phi(-2) ~ 2.3%
        assert batch.failure_rate == pytest.approx(0.0227, abs=0.005)
        assert np.all(batch.toas > 0)

    def test_far_field_failures_absent(self):
        # 20-sigma detector, drift well above the spread velocity
        params = PhysicalParams(mass=1.0, sigma0=1.0, v0=10.0, g=0.0, hbar=0.1)
        cfg = SamplerConfig(seed=8, n_samples=100_000)
        batch = sample_toa(params, 20.0, cfg)
        assert batch.failures == 0

    def test_mean_against_quadrature(self, row1, row1_density):
        params, x = row1
        cfg = SamplerConfig(seed=20260809, n_samples=100_000)
        batch = sample_toa(params, x, cfg)
        stats = estimate_stats(batch, row1_density)
        assert abs(stats.mean - ref.MEAN_ROW1) < 3.0 * stats.stderr_mean

    def test_bracket_failure_propagates(self, row3):
        params, x = row3
        cfg = SamplerConfig(seed=1, n_samples=64, max_bracket_expansions=1)
        with pytest.raises(BracketFailureError):
            sample_toa(params, x, cfg)


class TestLongTof:
    def test_zero_spread_recovers_classical_time(self):
        # the sigma -> 0 limit of the closed form, exposed via the spread
        # velocity parameter
        for v0, g, x in [(0.0, 9.81, 0.1), (2.0, 3.0, 5.0)]:
            t_c = 2.0 * x / (math.sqrt(v0**2 + 2 * g * x) + v0)
            xi = np.array([-3.0, -1.0, 0.0, 1.0, 3.0])
            np.testing.assert_array_equal(longtof_toa(v0, g, x, 0.0, xi),
                                          np.full(5, t_c))

    def test_zero_quantile_is_classical(self, row1):
        params, x = row1
        assert longtof_toa(params.v0, params.g, x, params.spread_velocity(), 0.0) \
            == classical_toa(params, x)

    def test_requires_gravity(self):
        params = PhysicalParams(mass=1.0, sigma0=1.0, v0=1.0, g=0.0, hbar=1.0)
        with pytest.raises(DegenerateKinematicsError):
            sample_toa_longtof(params, 10.0, SamplerConfig(seed=0, n_samples=10))

    def test_same_stream_as_exact_sampler(self, row1):
        params, x = row1
        cfg = SamplerConfig(seed=77, n_samples=4000)
        exact = sample_toa(params, x, cfg)
        approx = sample_toa_longtof(params, x, cfg)
        assert exact.failures == 0
        # identical xi draws: the two samplers pair off draw by draw
        rel = np.abs(exact.toas - approx.toas) / exact.toas
        assert rel.max() < 1e-3
        assert rel.max() < 1e-9  # t_c/tau ~ 4.5e5: agreement is far tighter

    def test_quantum_regime_delay_matches_expected_absolute_quantile(self, row3):
        params, x = row3
        cfg = SamplerConfig(seed=5150, n_samples=1_000_000)
        batch = sample_toa_longtof(params, x, cfg)
        t_c = classical_toa(params, x)
        rel_delay = batch.toas.mean() / t_c - 1.0
        target = math.sqrt(2.0 / math.pi) * ref.Q_ROW3
        assert rel_delay == pytest.approx(target, rel=0.02)

    def test_all_draws_positive_no_failures(self, row3):
        params, x = row3
        batch = sample_toa_longtof(params, x, SamplerConfig(seed=2, n_samples=10000))
        assert batch.failures == 0
        assert np.all(batch.toas > 0)


class TestEstimateStats:
    def test_identical_values_degenerate_ks(self, row1, row1_density):
        params, x = row1
        t0 = ref.TC_ROW1
        batch = SampleBatch(toas=np.full(8, t0), failures=0, seed=0)
        stats = estimate_stats(batch, row1_density)
        assert stats.std == 0.0
        assert stats.stderr_mean == 0.0
        f = cdf(row1_density, t0)
        assert stats.ks_statistic == pytest.approx(max(f, 1.0 - f), abs=1e-9)

    def test_stderr_definition(self, row1, row1_density):
        params, x = row1
        batch = sample_toa(params, x, SamplerConfig(seed=12, n_samples=500))
        stats = estimate_stats(batch, row1_density)
        assert stats.stderr_mean == pytest.approx(stats.std / math.sqrt(stats.n),
                                                  rel=1e-12)

    def test_ks_below_critical_value(self, row1, row1_density):
        params, x = row1
        batch = sample_toa(params, x, SamplerConfig(seed=20260809, n_samples=10_000))
        stats = estimate_stats(batch, row1_density)
        assert stats.ks_statistic < 1.63 / math.sqrt(10_000)

    def test_exact_and_longtof_means_agree(self, row1, row1_density):
        params, x = row1
        cfg = SamplerConfig(seed=31, n_samples=20_000)
        exact = estimate_stats(sample_toa(params, x, cfg), row1_density)
        approx = estimate_stats(sample_toa_longtof(params, x, cfg), row1_density)
        assert abs(exact.mean - approx.mean) / exact.mean < 1e-3

    def test_insufficient_samples(self, row1_density):
        batch = SampleBatch(toas=np.array([0.1]), failures=0, seed=0)
        with pytest.raises(InsufficientSamplesError):
            estimate_stats(batch, row1_density)


class TestSamplerConfigValidation:
    @pytest.mark.parametrize("kwargs", [
        dict(seed=0, n_samples=0), dict(seed=-1, n_samples=10),
        dict(seed=2**64, n_samples=10), dict(seed=0, n_samples=10, root_abs_tol=0.0),
        dict(seed=0, n_samples=10, max_bracket_expansions=0),
        dict(seed=0, n_samples=10, workers=0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SamplerConfig(**kwargs)
