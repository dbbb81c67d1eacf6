"""Filtering, differentiation, resampling and time-normalization primitives.

All analysis stages share these; everything is deterministic and pure.
Units follow the rest of the package: seconds, Hz, and whatever the
underlying channel carries (mm, deg, Nm).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import butter, filtfilt, lfilter


@dataclass
class TimeSeries:
    """A uniformly sampled scalar signal.

    `label` tags the axis the signal belongs to ("ML", "AP", "VT" or
    "scalar"); it is carried through every operation untouched.
    """

    samples: np.ndarray
    sample_rate: float
    start_time: float = 0.0
    label: str = "scalar"

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples contain NaN or Inf")

    def __len__(self):
        return len(self.samples)

    @property
    def dt(self) -> float:
        return 1.0 / self.sample_rate

    def times(self) -> np.ndarray:
        return self.start_time + np.arange(len(self.samples)) / self.sample_rate

    def with_samples(self, samples: np.ndarray) -> "TimeSeries":
        return replace(self, samples=np.asarray(samples, dtype=float))


@dataclass
class StrideGrid:
    """Bookkeeping for a stride-normalized signal."""

    stride_boundaries: np.ndarray  # original sample indices, len n_strides + 1
    n_strides: int
    points_per_stride: int

    def __post_init__(self):
        self.stride_boundaries = np.asarray(self.stride_boundaries)
        if np.any(np.diff(self.stride_boundaries) <= 0):
            raise ValueError("stride boundaries must be strictly increasing")

    @property
    def total_points(self) -> int:
        return self.n_strides * self.points_per_stride


def butterworth_lowpass(series: TimeSeries, order: int, cutoff: float,
                        zero_phase: bool = True) -> TimeSeries:
    """Low-pass Butterworth filter with unit DC gain.

    `zero_phase` applies the filter forward and backward (no net phase
    shift, doubled effective order); single-pass is kept for the simulated
    real-time control path.
    """
    if order not in (2, 4):
        raise ValueError(f"order must be 2 or 4, got {order}")
    nyquist = series.sample_rate / 2.0
    if not 0 < cutoff < nyquist:
        raise ValueError(f"cutoff {cutoff} Hz must lie in (0, {nyquist}) Hz")
    if len(series) < 3 * order:
        raise ValueError("series too short for requested filter order")
    b, a = butter(order, cutoff / nyquist, btype="low")
    if zero_phase:
        out = filtfilt(b, a, series.samples)
    else:
        out = lfilter(b, a, series.samples)
    return series.with_samples(out)


def moving_average(series: TimeSeries, window: int) -> TimeSeries:
    """Trailing moving average; the first window-1 samples use partial windows."""
    n = len(series)
    if not 1 <= window <= n:
        raise ValueError(f"window must be in [1, {n}], got {window}")
    c = np.concatenate(([0.0], np.cumsum(series.samples)))
    idx = np.arange(n)
    lo = np.maximum(idx - window + 1, 0)
    out = (c[idx + 1] - c[lo]) / (idx + 1 - lo)
    return series.with_samples(out)


def finite_difference(series: TimeSeries, dt: float | None = None) -> TimeSeries:
    """Numerical derivative: central differences interior, one-sided at the ends."""
    if len(series) < 2:
        raise ValueError("need at least 2 samples to differentiate")
    if dt is None:
        dt = series.dt
    if not dt > 0:
        raise ValueError("dt must be positive")
    return series.with_samples(np.gradient(series.samples, dt))


def resample_linear(series: TimeSeries, target_rate: float) -> TimeSeries:
    """Resample onto a uniform grid at `target_rate` covering the same time span."""
    if not target_rate > 0:
        raise ValueError("target_rate must be positive")
    if len(series) == 0:
        raise ValueError("cannot resample an empty series")
    if target_rate == series.sample_rate:
        return series.with_samples(series.samples.copy())
    duration = (len(series) - 1) / series.sample_rate
    n_out = int(np.floor(duration * target_rate + 1e-9)) + 1
    t_out = np.arange(n_out) / target_rate
    t_in = np.arange(len(series)) / series.sample_rate
    out = np.interp(t_out, t_in, series.samples)
    return TimeSeries(out, target_rate, series.start_time, series.label)


def time_normalize(series: TimeSeries, events: np.ndarray, n_strides: int,
                   n_points: int) -> tuple[TimeSeries, StrideGrid]:
    """Map the first `n_strides` strides onto a fixed grid of `n_points` samples.

    Each stride (between consecutive events) becomes n_points/n_strides
    samples via linear interpolation on the sample-index axis.  The output
    sample rate is expressed in points per stride.
    """
    events = np.asarray(events, dtype=int)
    if np.any(np.diff(events) <= 0):
        raise ValueError("events must be strictly increasing")
    if len(events) < n_strides + 1:
        raise ValueError(
            f"need at least {n_strides + 1} events, got {len(events)}")
    if n_points % n_strides != 0:
        raise ValueError("n_points must be divisible by n_strides")
    pps = n_points // n_strides
    boundaries = events[:n_strides + 1]
    idx = np.arange(len(series))
    positions = np.empty(n_points)
    for k in range(n_strides):
        a, b = boundaries[k], boundaries[k + 1]
        # half-open stride [a, b) so strides concatenate without duplicates
        positions[k * pps:(k + 1) * pps] = a + (b - a) * np.arange(pps) / pps
    out = np.interp(positions, idx, series.samples)
    grid = StrideGrid(boundaries, n_strides, pps)
    return TimeSeries(out, float(pps), 0.0, series.label), grid
