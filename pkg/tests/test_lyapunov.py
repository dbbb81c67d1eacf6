import numpy as np
import pytest

from helpers import brute_force_divergence
from softgait.signals import TimeSeries
from softgait.stability.embedding import (Attractor, EmbeddingParams,
                                          delay_embed)
from softgait.stability.lyapunov import (DivergenceResult,
                                         rosenstein_divergence,
                                         windowed_lyapunov)


def toy_attractor(n=200, dim=3, seed=0):
    """A smooth random curve in dim dimensions (not delay-structured, so
    the generic tracking path is exercised)."""
    rng = np.random.default_rng(seed)
    t = np.arange(n)
    pts = np.zeros((n, dim))
    for d in range(dim):
        for h in range(1, 5):
            pts[:, d] += rng.normal() * np.sin(2 * np.pi * h * t / n
                                               + rng.uniform(0, 2 * np.pi))
    pts += 0.01 * rng.normal(size=pts.shape)
    return Attractor(pts, EmbeddingParams(tau=1, dim=dim), 10.0)


class TestAgainstBruteForce:
    def test_generic_path_matches_oracle(self):
        att = toy_attractor()
        res = rosenstein_divergence(att, samples_per_stride=10,
                                    horizon_strides=10)
        oracle = brute_force_divergence(att.points, 10, 10)
        assert np.max(np.abs(res.curve - oracle)) < 1e-12

    def test_delay_structured_path_matches_oracle(self):
        rng = np.random.default_rng(1)
        t = np.arange(400)
        x = np.sin(2 * np.pi * t / 40.0) + 0.3 * np.sin(2 * np.pi * t / 13.0)
        x += 0.02 * rng.normal(size=len(x))
        att = delay_embed(TimeSeries(x, 40.0), EmbeddingParams(tau=5, dim=3))
        res = rosenstein_divergence(att, samples_per_stride=15,
                                    horizon_strides=10)
        oracle = brute_force_divergence(att.points, 15, 10)
        assert np.max(np.abs(res.curve - oracle)) < 1e-12


class TestDivergenceProperties:
    def test_periodic_orbit_has_near_zero_exponents(self):
        t = np.arange(100)
        one = np.sin(2 * np.pi * t / 100.0) \
            + 0.4 * np.sin(4 * np.pi * t / 100.0)
        x = np.tile(one, 40)   # exactly periodic
        att = delay_embed(TimeSeries(x, 100.0), EmbeddingParams(tau=25, dim=3))
        res = rosenstein_divergence(att, samples_per_stride=100)
        assert abs(res.lambda_short) < 0.05
        assert abs(res.lambda_long) < 0.01

    def test_slope_units_are_per_stride(self):
        # curve that rises exactly 1 per stride gives slope 1
        spst = 50
        curve = np.arange(10 * spst + 1) / spst
        res = DivergenceResult(curve, 0.0, 0.0, 1, spst)
        from softgait.stability.lyapunov import _slope
        assert _slope(curve, spst, 0.0, 1.0) == pytest.approx(1.0)
        assert _slope(curve, spst, 4.0, 10.0) == pytest.approx(1.0)
        assert res.samples_per_stride == spst

    def test_too_short_attractor_raises(self):
        att = toy_attractor(n=50)
        with pytest.raises(ValueError):
            rosenstein_divergence(att, samples_per_stride=10,
                                  horizon_strides=10)

    def test_reports_pair_count(self):
        att = toy_attractor()
        res = rosenstein_divergence(att, samples_per_stride=10)
        assert 10 <= res.n_pairs <= len(att.points) - 100


class TestWindowed:
    def make_series_and_events(self, n_strides, pts=120):
        t = np.arange(n_strides * pts)
        x = np.sin(2 * np.pi * t / pts) + 0.3 * np.sin(6 * np.pi * t / pts)
        x += 0.05 * np.random.default_rng(0).normal(size=len(t))
        events = np.arange(n_strides + 1) * pts
        events[-1] -= 1
        return TimeSeries(x, 100.0), events

    def test_window_count_and_curve_shape(self):
        series, events = self.make_series_and_events(18)
        res = windowed_lyapunov(series, events, window_strides=12,
                                n_windows=6, points_per_window=1800,
                                params=EmbeddingParams(tau=10, dim=3))
        assert len(res.per_window_short) == 6
        assert len(res.per_window_long) == 6
        assert len(res.mean_curve) == 10 * (1800 // 12) + 1
        assert res.lambda_short_mean == pytest.approx(
            np.mean(res.per_window_short))

    def test_estimates_parameters_when_not_given(self):
        series, events = self.make_series_and_events(18)
        res = windowed_lyapunov(series, events, window_strides=12,
                                n_windows=3, points_per_window=1800,
                                max_lag=20, max_dim=4)
        assert res.params.tau >= 1
        assert res.params.dim >= 2

    def test_insufficient_strides_raises(self):
        series, events = self.make_series_and_events(14)
        with pytest.raises(ValueError):
            windowed_lyapunov(series, events, window_strides=12,
                              n_windows=6, points_per_window=1800,
                              params=EmbeddingParams(tau=10, dim=3))
