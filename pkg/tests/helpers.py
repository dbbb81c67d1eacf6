"""Independent reference implementations ("oracles") used by the tests.

Each oracle is written in the most transparent way possible — explicit
loops, exhaustive enumeration — so that agreement with the optimized
library code is meaningful.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

LOG_FLOOR = 1e-300


def brute_force_divergence(pts: np.ndarray, samples_per_stride: int,
                           horizon_strides: int = 10,
                           theiler: int | None = None) -> np.ndarray:
    """Mean log-distance curve by exhaustive nearest-neighbor search."""
    pts = np.asarray(pts, dtype=float)
    n = len(pts)
    horizon = horizon_strides * samples_per_stride
    if theiler is None:
        theiler = samples_per_stride
    n_track = n - horizon
    pairs = []
    for i in range(n_track):
        best_j, best_d = None, math.inf
        for j in range(n_track):
            if abs(i - j) <= theiler:
                continue
            d = float(np.linalg.norm(pts[i] - pts[j]))
            if d < best_d:
                best_d, best_j = d, j
        if best_j is not None:
            pairs.append((i, best_j))
    curve = np.empty(horizon + 1)
    for step in range(horizon + 1):
        logs = [math.log(max(float(np.linalg.norm(pts[i + step]
                                                  - pts[j + step])),
                             LOG_FLOOR))
                for i, j in pairs]
        curve[step] = float(np.mean(logs))
    return curve


def exhaustive_mos(xcom: np.ndarray, cop: np.ndarray, stance: np.ndarray,
                   events: np.ndarray, mode: str) -> list[float]:
    """Per-cycle extreme |cop - xcom| by scanning every frame explicitly."""
    values = []
    for k in range(len(events) - 1):
        extreme = None
        for f in range(events[k], events[k + 1]):
            if not stance[f]:
                continue
            gap = abs(cop[f] - xcom[f])
            if extreme is None:
                extreme = gap
            elif mode == "min":
                extreme = min(extreme, gap)
            else:
                extreme = max(extreme, gap)
        if extreme is not None:
            values.append(extreme)
    return values


def exhaustive_ranksum_p(a, b) -> float:
    """Two-sided rank-sum p-value by enumerating every assignment of the
    pooled observations to the first sample (no ties assumed)."""
    a = list(map(float, a))
    b = list(map(float, b))
    pooled = np.asarray(a + b)
    order = np.argsort(pooled)
    ranks = np.empty(len(pooled))
    ranks[order] = np.arange(1, len(pooled) + 1)
    n1, n = len(a), len(pooled)
    w_obs = ranks[:n1].sum()
    obs_dev = abs(2.0 * w_obs - n1 * (n + 1))
    hits = total = 0
    for subset in combinations(range(n), n1):
        w = ranks[list(subset)].sum()
        if abs(2.0 * w - n1 * (n + 1)) >= obs_dev - 1e-9:
            hits += 1
        total += 1
    return hits / total


def shuffle_ranksum_p(a, b, n_shuffles: int, seed: int = 0) -> float:
    """Monte-carlo permutation p-value of the rank-sum statistic."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pooled = np.concatenate([a, b])
    order = np.argsort(pooled)
    ranks = np.empty(len(pooled))
    ranks[order] = np.arange(1, len(pooled) + 1)
    n1, n = len(a), len(pooled)
    obs_dev = abs(2.0 * ranks[:n1].sum() - n1 * (n + 1))
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 5000
    done = 0
    while done < n_shuffles:
        m = min(chunk, n_shuffles - done)
        # random subsets via argsort of uniform noise, one row per shuffle
        keys = rng.random((m, n))
        idx = np.argpartition(keys, n1 - 1, axis=1)[:, :n1]
        w = ranks[idx].sum(axis=1)
        hits += int(np.sum(np.abs(2.0 * w - n1 * (n + 1)) >= obs_dev - 1e-9))
        done += m
    return hits / n_shuffles
