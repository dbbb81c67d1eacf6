"""Delay-embedding parameter selection (mutual-information delay, false
nearest neighbors) and attractor construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..signals import TimeSeries


class NoMinimumError(ValueError):
    """Mutual information has no local minimum within the searched lags."""


@dataclass
class EmbeddingParams:
    tau: int
    dim: int

    def __post_init__(self):
        if self.tau < 1:
            raise ValueError("tau must be at least 1")
        if self.dim < 2:
            raise ValueError("dim must be at least 2")


@dataclass
class Attractor:
    points: np.ndarray     # (n_points, dim)
    params: EmbeddingParams
    source_rate: float     # samples per stride after normalization

    def __len__(self):
        return len(self.points)


def _quantile_bins(x: np.ndarray, n_bins: int) -> np.ndarray:
    """Assign each sample to one of n_bins equally populated bins.

    Rank-based, so the assignment (and everything built on it) is
    invariant under any strictly monotone rescaling of the data.
    """
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=np.int64)
    ranks[order] = np.arange(len(x))
    return (ranks * n_bins) // len(x)


def mutual_information(x: np.ndarray, y: np.ndarray, n_bins: int = 32) -> float:
    """Mutual information in bits via equiprobable (quantile) binning."""
    bx = _quantile_bins(x, n_bins)
    by = _quantile_bins(y, n_bins)
    joint = np.bincount(bx * n_bins + by, minlength=n_bins * n_bins)
    joint = joint.reshape(n_bins, n_bins) / len(x)
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    nz = joint > 0
    denom = np.outer(px, py)[nz]
    return float(np.sum(joint[nz] * np.log2(joint[nz] / denom)))


def ami_curve(series: TimeSeries, max_lag: int, n_bins: int = 32) -> np.ndarray:
    x = series.samples
    out = np.empty(max_lag + 1)
    for lag in range(max_lag + 1):
        if lag == 0:
            out[0] = mutual_information(x, x, n_bins)
        else:
            out[lag] = mutual_information(x[:-lag], x[lag:], n_bins)
    return out

def ami_delay(series: TimeSeries, max_lag: int, n_bins: int = 32) -> int:
    """Embedding delay: first local minimum of average mutual information.

    Raises NoMinimumError when the curve never turns upward within
    max_lag; callers fall back to a configured default.
    """
    if len(series) < 10 * max_lag:
        raise ValueError("series too short for requested max_lag")
    curve = ami_curve(series, max_lag, n_bins)
    for lag in range(1, max_lag):
        if curve[lag] < curve[lag - 1] and curve[lag] <= curve[lag + 1]:
            return lag
    raise NoMinimumError(f"no AMI minimum within {max_lag} lags")


def delay_embed(series: TimeSeries, params: EmbeddingParams) -> Attractor:
    """Stack lagged copies: point i = [s(i), s(i+tau), ..., s(i+(d-1)tau)]."""
    x = series.samples
    tau, dim = params.tau, params.dim
    n_points = len(x) - (dim - 1) * tau
    if n_points < 1:
        raise ValueError(
            f"series of length {len(x)} too short for tau={tau}, dim={dim}")
    points = np.stack([x[k * tau:k * tau + n_points] for k in range(dim)],
                      axis=1)
    return Attractor(points, params, series.sample_rate)


def _embed_raw(x: np.ndarray, tau: int, dim: int) -> np.ndarray:
    n_points = len(x) - (dim - 1) * tau
    return np.stack([x[k * tau:k * tau + n_points] for k in range(dim)], axis=1)


def fnn_fractions(series: TimeSeries, tau: int, max_dim: int,
                  r_tol: float = 15.0, a_tol: float = 2.0) -> np.ndarray:
    """False-nearest-neighbor fraction for each dimension 1..max_dim.

    A neighbor pair in dimension d is false when the extra coordinate at
    d+1 either blows up relative to the pair distance (ratio > r_tol) or
    relative to the attractor size (Kennel's second criterion, a_tol).
    """
    x = series.samples
    attractor_size = float(np.std(x))
    fractions = np.empty(max_dim)
    for dim in range(1, max_dim + 1):
        pts = _embed_raw(x, tau, dim)
        # neighbors must have a (d+1)-th coordinate available
        usable = len(x) - dim * tau
        if usable < 2:
            fractions[dim - 1:] = fractions[dim - 2] if dim > 1 else 1.0
            return fractions
        pts = pts[:usable]
        tree = cKDTree(pts)
        dist, idx = tree.query(pts, k=2, workers=-1)
        dist, idx = dist[:, 1], idx[:, 1]
        i = np.arange(usable)
        extra = np.abs(x[i + dim * tau] - x[idx + dim * tau])
        nonzero = dist > 0
        ratio_false = np.zeros(usable, dtype=bool)
        ratio_false[nonzero] = extra[nonzero] / dist[nonzero] > r_tol
        ratio_false[~nonzero] = extra[~nonzero] > 0
        new_dist = np.hypot(dist, extra)
        size_false = new_dist / attractor_size > a_tol
        fractions[dim - 1] = np.mean(ratio_false | size_false)
    return fractions


def fnn_dimension(series: TimeSeries, tau: int, max_dim: int = 8,
                  r_tol: float = 15.0, a_tol: float = 2.0,
                  threshold: float = 0.01) -> tuple[int, bool]:
    """Smallest embedding dimension with FNN fraction below threshold.

    Returns (dim, saturated); saturated means the fraction never de-
    creased below the threshold and max_dim was returned instead.
    """
    fractions = fnn_fractions(series, tau, max_dim, r_tol, a_tol)
    below = np.nonzero(fractions < threshold)[0]
    if len(below) == 0:
        return max_dim, True
    return max(int(below[0]) + 1, 2), False
