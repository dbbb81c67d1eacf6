"""Whole-trial analysis: foot-strikes, windowed divergence exponents,
margins of stability, and quasi-stiffness, aggregated into a report
dictionary that serializes to the report file."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .plant import TrialRecording
from .signals import TimeSeries, butterworth_lowpass, moving_average
from .stability import (AXES, EmbeddingParams, com_velocity,
                        detect_foot_strikes, estimate_com, mos_ap, mos_ml,
                        pendulum_eigenfrequency, pendulum_length,
                        stance_frames, windowed_lyapunov, xcom)
from .stability.stats import delta_lambda, wilcoxon_ranksum
from .stiffness import (average_cycle, quasi_stiffness, segment_cycles)

LYAPUNOV_FILTER = (2, 10.0)   # order, cutoff Hz for divergence CoM
MOS_FILTER = (4, 5.0)         # order, cutoff Hz for MOS kinematics
PROSTHESIS_FILTER = (2, 5.0)  # order, cutoff Hz for moment/angle profiles
COP_WINDOW = 10               # moving-average samples for CoP


@dataclass
class AnalysisSettings:
    exclude_strides: int = 25
    window_strides: int = 150
    n_windows: int = 25
    points_per_window: int = 15000
    embedding_overrides: dict | None = None   # axis -> (tau, dim)
    fallback_tau: int = 10
    max_lag: int = 30
    max_dim: int = 8
    alpha: float = 0.01


def analyze_trial(rec: TrialRecording,
                  settings: AnalysisSettings | None = None) -> dict:
    if settings is None:
        settings = AnalysisSettings()
    rate = rec.rate
    body_weight = rec.meta.get("body_mass", 59.0) * 9.81
    nominal_stride = rec.meta.get("stride_period", None)

    heel = rec.markers["LHEEL"]
    heel_vt = TimeSeries(heel[:, 2], rate, 0.0, "VT")
    heel_ap = TimeSeries(heel[:, 1], rate, 0.0, "AP")
    strikes = detect_foot_strikes(heel_vt, heel_ap,
                                  nominal_stride_s=nominal_stride)
    if len(strikes) <= settings.exclude_strides + 1:
        raise ValueError("not enough strides after transient exclusion")
    events = strikes[settings.exclude_strides:]
    n_strides = len(events) - 1

    # windowed divergence exponents on filtered CoM velocities
    com_raw = estimate_com(rec.markers, rate)
    com_lyap = {a: butterworth_lowpass(ts, *LYAPUNOV_FILTER)
                for a, ts in com_raw.items()}
    vel_lyap = com_velocity(com_lyap)
    n_windows = settings.n_windows
    if n_strides < settings.window_strides + n_windows - 1:
        n_windows = n_strides - settings.window_strides + 1
        if n_windows < 1:
            raise ValueError(
                f"need at least {settings.window_strides} strides, "
                f"have {n_strides}")
        warnings.warn(
            f"only {n_strides} strides: reducing to {n_windows} window(s)")
    lam = {}
    for axis in AXES:
        override = (settings.embedding_overrides or {}).get(axis)
        params = EmbeddingParams(*override) if override else None
        res = windowed_lyapunov(vel_lyap[axis], events,
                                settings.window_strides, n_windows,
                                settings.points_per_window, params,
                                settings.max_lag, settings.fallback_tau,
                                settings.max_dim)
        lam[axis] = res

    # margins of stability on 5 Hz kinematics and averaged CoP
    com_mos = {a: butterworth_lowpass(ts, *MOS_FILTER)
               for a, ts in com_raw.items()}
    vel_mos = com_velocity(com_mos)
    length_m = pendulum_length(com_mos, heel, events)
    omega0 = pendulum_eigenfrequency(length_m)
    xc = xcom(com_mos, vel_mos, length_m)

    def side_mos(cop: np.ndarray, side_events: np.ndarray):
        cop_ml_f = moving_average(TimeSeries(cop[:, 0], rate), COP_WINDOW)
        cop_ap_f = moving_average(TimeSeries(cop[:, 1], rate), COP_WINDOW)
        stance = stance_frames(cop[:, 2], body_weight)
        ml = mos_ml(xc["ML"], cop_ml_f.samples, stance, side_events)
        ap = mos_ap(xc["AP"], cop_ap_f.samples, stance, side_events)
        return ml, ap

    left_ml, left_ap = side_mos(rec.cop_left, events)
    right_events = rec.events_right[
        (rec.events_right >= events[0]) & (rec.events_right <= events[-1])]
    right_ml, right_ap = side_mos(rec.cop_right, right_events)

    # quasi-stiffness on filtered prosthesis moment/angle
    q_f = butterworth_lowpass(
        TimeSeries(rec.prosthesis["q"], rate), *PROSTHESIS_FILTER)
    m_f = butterworth_lowpass(
        TimeSeries(rec.prosthesis["M"], rate), *PROSTHESIS_FILTER)
    cycles = segment_cycles({"q": q_f.samples, "M": m_f.samples}, events)
    avg = average_cycle(cycles)
    profile = quasi_stiffness(avg)

    # phase portrait (angular velocity vs angle) of the average cycle
    qdot = np.gradient(q_f.samples, 1.0 / rate)
    qdot_f = butterworth_lowpass(TimeSeries(qdot, rate), *PROSTHESIS_FILTER)
    pp_cycles = segment_cycles({"q": q_f.samples, "qdot": qdot_f.samples},
                               events)
    pp_avg_q = np.mean([c["q"] for c in pp_cycles], axis=0)
    pp_avg_qdot = np.mean([c["qdot"] for c in pp_cycles], axis=0)

    report = {
        "meta": dict(rec.meta),
        "n_analyzed_strides": int(n_strides),
        "n_windows": int(n_windows),
        "pendulum_length_m": length_m,
        "pendulum_eigenfrequency": omega0,
        "embedding": {a: {"tau": int(lam[a].params.tau),
                          "dim": int(lam[a].params.dim)} for a in AXES},
        "lyapunov": {a: {
            "short": {"mean": lam[a].lambda_short_mean,
                      "sd": lam[a].lambda_short_sd},
            "long": {"mean": lam[a].lambda_long_mean,
                     "sd": lam[a].lambda_long_sd},
        } for a in AXES},
        "divergence": {a: lam[a].mean_curve.tolist() for a in AXES},
        "mos": {
            "left": {"ML": _mos_entry(left_ml), "AP": _mos_entry(left_ap)},
            "right": {"ML": _mos_entry(right_ml), "AP": _mos_entry(right_ap)},
        },
        "quasi_stiffness": {
            "stance_percent": profile.stance_percent.tolist(),
            "stiffness": [None if not np.isfinite(v) else float(v)
                          for v in profile.stiffness],
            "terminal": profile.terminal_value(60.0),
        },
        "profiles": {
            "moment_angle": {"q": avg.mean_angle.tolist(),
                             "M": avg.mean_moment.tolist()},
            "phase_portrait": {"q": pp_avg_q.tolist(),
                               "qdot": pp_avg_qdot.tolist()},
        },
    }
    return report


def _mos_entry(res) -> dict:
    return {"mean": res.mean, "sd": res.sd,
            "per_cycle": res.per_cycle.tolist(),
            "skipped_cycles": list(res.skipped)}


def compare_reports(baseline: dict, candidates: dict[str, dict],
                    alpha: float = 0.01) -> dict:
    """Exponent changes against the baseline and MOS rank-sum tests.

    Negative delta means improved local dynamic stability; for margins of
    stability, larger is better, so improvement is a greater mean.
    """
    _check_schema(baseline)
    out = {"baseline": baseline["meta"], "alpha": alpha, "candidates": {}}
    for name, cand in candidates.items():
        _check_schema(cand)
        entry = {"meta": cand["meta"], "delta_lambda": {}, "mos": {}}
        for axis in AXES:
            entry["delta_lambda"][axis] = {}
            for horizon in ("short", "long"):
                d = delta_lambda(cand["lyapunov"][axis][horizon]["mean"],
                                 baseline["lyapunov"][axis][horizon]["mean"])
                entry["delta_lambda"][axis][horizon] = {
                    "delta": d, "improved": d < 0}
        for side in ("left", "right"):
            entry["mos"][side] = {}
            for direction in ("ML", "AP"):
                base = baseline["mos"][side][direction]["per_cycle"]
                new = cand["mos"][side][direction]["per_cycle"]
                p, significant = wilcoxon_ranksum(new, base, alpha)
                entry["mos"][side][direction] = {
                    "mean": cand["mos"][side][direction]["mean"],
                    "baseline_mean": baseline["mos"][side][direction]["mean"],
                    "p_value": p,
                    "significant": significant,
                    "improved": (cand["mos"][side][direction]["mean"]
                                 > baseline["mos"][side][direction]["mean"]),
                }
        out["candidates"][name] = entry
    return out


class SchemaMismatchError(ValueError):
    pass


def _check_schema(report: dict) -> None:
    try:
        for axis in AXES:
            report["lyapunov"][axis]["short"]["mean"]
            report["lyapunov"][axis]["long"]["mean"]
        for side in ("left", "right"):
            for direction in ("ML", "AP"):
                report["mos"][side][direction]["per_cycle"]
    except KeyError as exc:
        raise SchemaMismatchError(f"report missing {exc}") from exc
