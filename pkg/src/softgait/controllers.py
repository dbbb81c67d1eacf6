"""Tibia and admittance controllers as deterministic 100 Hz state machines.

The tibia controller (TC) is a phase-variable controller: tibia angular
velocity drives a phase-plane estimator producing gait percent and stride
length, a gait surface gives the reference ankle angle, and the moment map
inversion turns that into a motor command.  The admittance controller (AC)
wraps the TC: it derives the unloaded equilibrium angle from the TC
command and offsets it by M / K_d to emulate the chosen quasi-stiffness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .lut import Lut2D, SyntheticMomentMap, build_lut_from_map

MOTOR_RANGE_MM = (-40.0, 40.0)
ANGLE_RANGE_DEG = (-30.0, 30.0)


def _clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


@dataclass
class ProsthesisState:
    """What the controllers see each tick: motor position x (mm), ankle
    angle q (deg, dorsiflexion positive), ankle moment M (Nm), and tibia
    angular velocity (deg/s)."""

    x: float = 0.0
    q: float = 0.0
    M: float = 0.0
    tibia_omega: float = 0.0


@dataclass
class TibiaPhaseState:
    """Phase-plane estimator state.

    The tibia angle is recovered from angular velocity by leaky
    integration (time constant ~2 s kills drift).  The phase plane uses
    (theta - running mean, omega / omega_scale) with omega_scale the ratio
    of the two running RMS levels, which makes the orbit near-circular;
    gait percent is the normalized polar angle and stride length is the
    orbit radius through a linear calibration.
    """

    theta_integral: float = 0.0
    phase_angle: float = 0.0
    gait_percent: float = 0.0
    L_s: float = 0.0
    ssp: float = 0.95  # self-selected-pace stride length, m
    # estimator internals
    theta_mean: float = 0.0
    ms_theta: float = 0.0
    ms_omega: float = 0.0
    leak_tau: float = 2.0
    stride_calibration: float = 0.095  # m of stride length per deg of orbit radius
    wrapped: bool = False

    @property
    def L_s_norm(self) -> float:
        return self.L_s / self.ssp


@dataclass
class AdmittanceParams:
    """Admittance law gains.  Only stiffness is active in this artifact:
    damping and inertia are pinned to zero."""

    K_d: float = 15.0        # Nm/deg
    B_d: float = 0.0
    I_d: float = 0.0
    fb_gain: float = 0.45    # mm/deg
    k_m: float = 0.1         # mm/Nm, moment feedback gain of the TC path
    moment_filter_hz: float = 4.0  # low-pass on measured moment in the AC path

    def __post_init__(self):
        if not self.K_d > 0:
            raise ValueError("K_d must be positive")
        if self.B_d != 0.0 or self.I_d != 0.0:
            raise ValueError("damping and inertia terms are fixed at zero")


_OMEGA_FLOOR = 1e-9


def tibia_phase_update(state: TibiaPhaseState, omega: float,
                       dt: float) -> TibiaPhaseState:
    """Advance the phase-plane estimator by one tick of tibia velocity."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    leak = dt / state.leak_tau
    theta = state.theta_integral * (1.0 - leak) + omega * dt
    theta_mean = state.theta_mean + (theta - state.theta_mean) * leak
    theta_c = theta - theta_mean
    ms_theta = state.ms_theta + (theta_c ** 2 - state.ms_theta) * leak
    ms_omega = state.ms_omega + (omega ** 2 - state.ms_omega) * leak

    if ms_omega < _OMEGA_FLOOR and abs(omega) < _OMEGA_FLOOR:
        # no motion: hold phase and stride length
        return replace(state, theta_integral=theta, theta_mean=theta_mean,
                       ms_theta=ms_theta, ms_omega=ms_omega, wrapped=False)

    omega_scale = math.sqrt(ms_omega / ms_theta) if ms_theta > _OMEGA_FLOOR else 1.0
    phase = math.atan2(-omega / omega_scale, theta_c) % (2.0 * math.pi)
    delta = phase - state.phase_angle
    wrapped = delta < -math.pi
    L_s = state.L_s
    if wrapped:
        radius = math.sqrt(2.0 * ms_theta)
        L_s = state.stride_calibration * radius
    return replace(state, theta_integral=theta, theta_mean=theta_mean,
                   ms_theta=ms_theta, ms_omega=ms_omega, phase_angle=phase,
                   gait_percent=phase / (2.0 * math.pi), L_s=L_s,
                   wrapped=wrapped)


def blend_commands(x_m: float, x_g: float, L_s_norm: float) -> float:
    """Weighted TC output: moment feedback dominates at low stride length."""
    if L_s_norm < 0:
        raise ValueError("L_s_norm must be non-negative")
    if L_s_norm >= 1.0:
        return x_g
    a = 0.5 * math.cos(math.pi * L_s_norm) + 0.5
    return a * x_m + (1.0 - a) * x_g


def moment_feedback(M: float, k_m: float = 0.1,
                    motor_range: tuple[float, float] = MOTOR_RANGE_MM) -> float:
    """Proportional moment-to-motor command, clamped to the motor range."""
    return _clamp(k_m * M, *motor_range)


def tibia_reference_motor(gait_percent: float, L_s: float, gait_lut: Lut2D,
                          moment_lut: Lut2D) -> float:
    """Reference motor position: gait surface gives the reference ankle
    angle, whose unloaded (zero-moment) motor position is looked up."""
    gp = _clamp(gait_percent, gait_lut.axis_a[0], gait_lut.axis_a[-1])
    ls = _clamp(L_s, gait_lut.axis_b[0], gait_lut.axis_b[-1])
    q_ref = gait_lut.eval(gp, ls)
    return moment_lut.invert(0.0, ("b", q_ref))


def admittance_equilibrium(x_d_tc: float, moment_lut: Lut2D) -> float:
    """Virtual unloaded ankle angle realized by the TC motor command."""
    x = _clamp(x_d_tc, moment_lut.axis_a[0], moment_lut.axis_a[-1])
    return moment_lut.invert(0.0, ("a", x))


def admittance_target(q_e: float, M: float, K_d: float,
                      angle_range: tuple[float, float] = ANGLE_RANGE_DEG) -> float:
    """Admittance law: desired angle is the equilibrium offset by M / K_d."""
    if not K_d > 0:
        raise ValueError("K_d must be positive")
    return _clamp(q_e + M / K_d, *angle_range)


def ankle_controller(q_d: float, q: float, M: float, moment_lut: Lut2D,
                     K: float = 0.45) -> float:
    """Feedforward (moment-map inversion at the desired angle) plus
    proportional feedback on the angle error."""
    qd = _clamp(q_d, moment_lut.axis_b[0], moment_lut.axis_b[-1])
    try:
        x_ff = moment_lut.invert(M, ("b", qd))
    except ValueError:
        # moment not reachable at this angle: saturate at the range edge
        lo, hi = moment_lut.axis_a[0], moment_lut.axis_a[-1]
        x_ff = hi if M > moment_lut.eval(hi, qd) else lo
    x_fb = K * (qd - q)
    return _clamp(x_ff + x_fb, MOTOR_RANGE_MM[0], MOTOR_RANGE_MM[1])


@dataclass
class ControllerOutput:
    """One tick of controller diagnostics alongside the motor command."""

    x_cmd: float
    x_d_tc: float
    x_g: float
    x_m: float
    q_d: float | None = None
    q_e: float | None = None
    m_filtered: float | None = None


def step_controller(mode: str, state: ProsthesisState, phase: TibiaPhaseState,
                    params: AdmittanceParams, gait_lut: Lut2D,
                    moment_lut: Lut2D, m_prev: float | None = None,
                    dt: float = 0.01) -> ControllerOutput:
    """Compose one control tick in either TC or AC mode.

    `m_prev` is last tick's filtered moment; the AC path low-passes the
    measured moment before the admittance law because the feedforward loop
    gain on the raw moment exceeds one (1 + sigma*rho / K_d) and would
    otherwise limit-cycle against the ankle dynamics.
    """
    x_g = tibia_reference_motor(phase.gait_percent, phase.L_s, gait_lut,
                                moment_lut)
    x_m = moment_feedback(state.M, params.k_m)
    x_d_tc = _clamp(blend_commands(x_m, x_g, phase.L_s_norm), *MOTOR_RANGE_MM)
    if mode == "TC":
        return ControllerOutput(x_cmd=x_d_tc, x_d_tc=x_d_tc, x_g=x_g, x_m=x_m)
    if mode == "AC":
        if m_prev is None:
            m_f = state.M
        else:
            alpha = 1.0 - math.exp(-2.0 * math.pi
                                   * params.moment_filter_hz * dt)
            m_f = m_prev + alpha * (state.M - m_prev)
        q_e = admittance_equilibrium(x_d_tc, moment_lut)
        q_d = admittance_target(q_e, m_f, params.K_d)
        # raw moment in the map inversion keeps the position loop exact;
        # only the admittance offset sees the filtered moment
        x_d_ac = ankle_controller(q_d, state.q, state.M, moment_lut,
                                  params.fb_gain)
        return ControllerOutput(x_cmd=x_d_ac, x_d_tc=x_d_tc, x_g=x_g, x_m=x_m,
                                q_d=q_d, q_e=q_e, m_filtered=m_f)
    raise ValueError(f"unknown controller mode {mode!r}")


def default_gait_lut(peak_dorsiflexion: float = 8.0,
                     pushoff_plantarflexion: float = -12.0,
                     ssp: float = 0.95) -> Lut2D:
    """Synthetic gait surface: reference ankle angle vs (gait percent,
    stride length).

    Shape: dorsiflexion ramp over early stance, a plateau through mid and
    terminal stance, plantarflexion push-off right after stance, and
    return to neutral in swing.  Amplitude scales linearly with stride
    length.  The plateau before push-off is what lets the admittance
    wrapper emulate a clean constant stiffness in late stance.
    """
    gp = np.linspace(0.0, 1.0, 101)
    shape = np.zeros_like(gp)
    for i, s in enumerate(gp):
        if s < 0.25:
            shape[i] = peak_dorsiflexion * 0.5 * (1 - math.cos(math.pi * s / 0.25))
        elif s < 0.60:
            shape[i] = peak_dorsiflexion
        elif s < 0.72:
            u = (s - 0.60) / 0.12
            shape[i] = (peak_dorsiflexion
                        + (pushoff_plantarflexion - peak_dorsiflexion)
                        * 0.5 * (1 - math.cos(math.pi * u)))
        else:
            u = (s - 0.72) / 0.28
            shape[i] = pushoff_plantarflexion * 0.5 * (1 + math.cos(math.pi * u))
    lengths = np.linspace(0.2, 2.0, 10)
    values = shape[:, None] * (lengths[None, :] / ssp)
    return Lut2D(gp, lengths, values, units=("gait fraction", "m", "deg"))


def default_moment_lut(moment_map: SyntheticMomentMap | None = None) -> Lut2D:
    from .lut import default_angle_grid, default_motor_grid
    if moment_map is None:
        moment_map = SyntheticMomentMap()
    return build_lut_from_map(moment_map, default_motor_grid(),
                              default_angle_grid())
