"""Fixed-step simulation of the series-elastic ankle on compliant ground,
plus a synthetic gait-trial generator feeding the analysis pipeline.

The plant is a lumped one-degree-of-freedom ankle: the motor position
tracks its command through a critically damped second-order loop, the
ankle joint sees the spring torque implied by the moment map plus any
external load, and the ground deflects linearly with vertical force.
The trial generator drives the controller/plant loop with a kinematic
template (pelvis sway, heel trajectory, stance load profile) and seeded
stride-to-stride variability so the stability analysis downstream is
non-degenerate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .controllers import (AdmittanceParams, ControllerOutput, ProsthesisState,
                          TibiaPhaseState, default_gait_lut, default_moment_lut,
                          step_controller, tibia_phase_update)
from .lut import Lut2D, SyntheticMomentMap

DEG = math.pi / 180.0


class SimulationDivergedError(RuntimeError):
    pass


@dataclass
class PlantConfig:
    sea_stiffness: float = 377.0          # kN/m, series spring of the actuator
    moment_map: SyntheticMomentMap = field(default_factory=SyntheticMomentMap)
    ankle_inertia: float = 0.005          # kg m^2, foot about the ankle joint
    ankle_damping: float = 0.03           # Nm s/deg, parasitic joint damping
    ground_stiffness: float = math.inf    # kN/m; inf = rigid
    belt_speed: float = 0.65              # m/s
    motor_loop_bandwidth: float = 40.0    # Hz
    dt: float = 0.01                      # s, matches the 100 Hz analysis rate

    def __post_init__(self):
        for name in ("sea_stiffness", "ankle_inertia", "ankle_damping",
                     "ground_stiffness", "belt_speed",
                     "motor_loop_bandwidth", "dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def inertia_deg(self) -> float:
        """Ankle inertia expressed as Nm per (deg/s^2)."""
        return self.ankle_inertia * DEG


@dataclass
class PlantState:
    x: float = 0.0            # motor position, mm
    x_dot: float = 0.0
    q: float = 0.0            # ankle angle, deg
    q_dot: float = 0.0
    moment: float = 0.0       # spring moment from the map, Nm
    vertical_force: float = 0.0   # N, set by the trial template
    ground_deflection: float = 0.0  # mm


def ground_deflection(vertical_force: float, ground_stiffness: float) -> float:
    """Linear surface model: deflection in mm for force in N and stiffness
    in kN/m (N / (kN/m) = mm)."""
    if math.isinf(ground_stiffness):
        return 0.0
    return vertical_force / ground_stiffness


def step_plant(state: PlantState, motor_cmd: float, external_load: float,
               cfg: PlantConfig, vertical_force: float = 0.0) -> PlantState:
    """Advance the plant by one dt.

    Motor: exact discrete update of a critically damped tracker at the
    configured bandwidth.  Ankle: semi-implicit Euler of
    I qdd = M(x, q) + M_ext - b qd, where the map moment is the restoring
    spring torque (positive toward the zero-moment angle).
    """
    w = 2.0 * math.pi * cfg.motor_loop_bandwidth
    # the ankle is much faster than dt, so integrate on a finer sub-grid
    # (semi-implicit Euler is only stable well below the natural period)
    n_sub = 20
    h = cfg.dt / n_sub
    e = math.exp(-w * h)
    y = state.x - motor_cmd
    yd = state.x_dot
    q = state.q
    q_dot = state.q_dot
    for _ in range(n_sub):
        # closed form of ydd = -2 w yd - w^2 y over one substep
        y, yd = e * (y + (yd + w * y) * h), e * (yd - w * h * (yd + w * y))
        x_here = y + motor_cmd
        qdd = (cfg.moment_map(x_here, q) + external_load
               - cfg.ankle_damping * q_dot) / cfg.inertia_deg
        q_dot = q_dot + qdd * h
        q = q + q_dot * h
    x_new = y + motor_cmd
    yd_new = yd
    q_new = q
    q_dot_new = q_dot

    deflection = ground_deflection(vertical_force, cfg.ground_stiffness)
    new = PlantState(x=x_new, x_dot=yd_new, q=q_new, q_dot=q_dot_new,
                     moment=cfg.moment_map(x_new, q_new),
                     vertical_force=vertical_force,
                     ground_deflection=deflection)
    for v in (new.x, new.q, new.x_dot, new.q_dot, new.moment):
        if not math.isfinite(v):
            raise SimulationDivergedError("plant state is no longer finite")
    return new


@dataclass
class Perturbation:
    kind: str          # "stiffness-step" | "load-impulse"
    at_stride: int
    magnitude: float   # new kN/m for stiffness-step, extra Nm for load-impulse

    def __post_init__(self):
        if self.kind not in ("stiffness-step", "load-impulse"):
            raise ValueError(f"unknown perturbation kind {self.kind!r}")


@dataclass
class TrialSpec:
    """Everything that determines a generated trial, including the seed."""

    cfg: PlantConfig = field(default_factory=PlantConfig)
    mode: str = "TC"
    params: AdmittanceParams = field(default_factory=AdmittanceParams)
    n_strides: int = 200
    stride_period: float = 1.47     # s, mean stride duration
    seed: int = 0
    period_jitter: float = 0.02     # fractional sd of stride period
    amplitude_jitter: float = 0.02  # fractional sd of per-stride amplitudes
    noise_mm: float = 1.0           # marker measurement noise, smoothed
    body_mass: float = 59.0         # kg
    load_moment_arm: float = 0.055  # m, peak CoP lever arm at the ankle
    pelvis_height: float = 970.0    # mm, CoM height over heel level
    ml_sway: float = 20.0           # mm
    ap_sway: float = 12.0           # mm
    vt_bounce: float = 10.0         # mm
    tibia_amplitude: float = 10.0   # deg
    perturbations: tuple[Perturbation, ...] = ()


def inject_perturbation(spec: TrialSpec, kind: str, at_stride: int,
                        magnitude: float) -> TrialSpec:
    if not 0 <= at_stride < spec.n_strides:
        raise ValueError("at_stride outside trial")
    pert = Perturbation(kind, at_stride, magnitude)
    return replace(spec, perturbations=spec.perturbations + (pert,))


@dataclass
class TrialRecording:
    """Synchronized channels of one simulated walking trial at 100 Hz."""

    markers: dict[str, np.ndarray]        # name -> (N, 3) mm, axes (ML, AP, VT)
    cop_left: np.ndarray                  # (N, 3): ML mm, AP mm, force N
    cop_right: np.ndarray
    prosthesis: dict[str, np.ndarray]     # per-tick controller/plant log
    events_left: np.ndarray               # ground-truth foot-strike indices
    events_right: np.ndarray
    rate: float = 100.0
    excluded_strides: int = 25            # transient strides skipped by analysis
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.cop_left)
        for name, arr in self.markers.items():
            if len(arr) != n:
                raise ValueError(f"marker {name} length mismatch")
        for name, arr in self.prosthesis.items():
            if len(arr) != n:
                raise ValueError(f"prosthesis channel {name} length mismatch")
        if np.any(np.diff(self.events_left) <= 0) \
                or np.any(np.diff(self.events_right) <= 0):
            raise ValueError("events must be strictly increasing")

    @property
    def n_samples(self) -> int:
        return len(self.cop_left)


def _stance_bump(u: np.ndarray) -> np.ndarray:
    """Double-bump vertical force template on stance fraction u in [0, 1],
    normalized to unit peak."""
    raw = np.sin(np.pi * u) * (1.0 + 0.15 * np.cos(2.0 * np.pi * u))
    return raw / 0.85  # peak of the raw template, at u = 0.5

def _heel_height(s: np.ndarray) -> np.ndarray:
    """Heel height template over the gait cycle fraction s: heel-rise ramp
    through stance, swing arc, and a sharp notch pinning the minimum at
    foot-strike."""
    h = np.zeros_like(s)
    stance = s < 0.6
    u = s[stance] / 0.6
    h[stance] = 40.0 * u ** 0.9
    sw = ~stance
    v = (s[sw] - 0.6) / 0.4
    # from heel-off height up to peak clearance and back to zero at strike
    h[sw] = 40.0 * (1.0 - v) + 25.0 * np.sin(np.pi * v) ** 2
    notch_w = 0.06
    d = np.minimum(s, 1.0 - s)
    near = d < notch_w
    h[near] -= 15.0 * np.cos(0.5 * np.pi * d[near] / notch_w) ** 2
    return h


def _smooth_noise(rng: np.random.Generator, n: int, scale: float,
                  window: int = 5) -> np.ndarray:
    if scale == 0.0:
        return np.zeros(n)
    w = np.ones(window) / window
    return scale * np.convolve(rng.standard_normal(n + window), w,
                               mode="same")[:n]


def generate_trial(spec: TrialSpec) -> TrialRecording:
    """Run the closed controller/plant loop under the kinematic template.

    Deterministic per spec (including seed): identical specs give
    bitwise-identical recordings.
    """
    if spec.n_strides < 2:
        raise ValueError("need at least two strides")
    rng = np.random.default_rng(spec.seed)
    dt = spec.cfg.dt
    T = spec.stride_period

    period_g = np.clip(rng.standard_normal(spec.n_strides), -3, 3)
    durations = T * (1.0 + spec.period_jitter * period_g)
    amp_g = np.clip(rng.standard_normal(spec.n_strides), -3, 3)
    amps = 1.0 + spec.amplitude_jitter * amp_g
    starts = np.concatenate(([0.0], np.cumsum(durations)))
    total = starts[-1]
    n = int(math.floor(total / dt))
    t = np.arange(n) * dt

    # continuous stride phase: k + s with s in [0, 1) inside stride k
    stride_idx = np.clip(np.searchsorted(starts, t, side="right") - 1,
                         0, spec.n_strides - 1)
    s_local = (t - starts[stride_idx]) / durations[stride_idx]
    amp_here = amps[stride_idx]

    # ground stiffness per sample (stiffness-step perturbations)
    k_g = np.full(n, spec.cfg.ground_stiffness)
    impulse = np.zeros(n)
    for p in spec.perturbations:
        mask = stride_idx >= p.at_stride
        if p.kind == "stiffness-step":
            k_g[mask] = p.magnitude
        else:  # load-impulse active during one stance
            one = (stride_idx == p.at_stride) & (s_local < 0.6)
            impulse[one] = p.magnitude

    # per-leg vertical force; right leg offset by half a stride
    peak = 1.1 * spec.body_mass * 9.81
    s_right = (s_local + 0.5) % 1.0
    f_left = np.where(s_local < 0.6,
                      peak * _stance_bump(np.clip(s_local / 0.6, 0, 1)), 0.0) \
        * amp_here
    f_right = np.where(s_right < 0.6,
                       peak * _stance_bump(np.clip(s_right / 0.6, 0, 1)), 0.0) \
        * amp_here
    defl_left = np.where(np.isinf(k_g), 0.0, f_left / k_g)
    defl_right = np.where(np.isinf(k_g), 0.0, f_right / k_g)
    f_total = f_left + f_right
    with np.errstate(invalid="ignore"):
        defl_com = np.where(f_total > 0,
                            (f_left * defl_left + f_right * defl_right)
                            / np.where(f_total > 0, f_total, 1.0), 0.0)

    # pelvis / CoM template (mm)
    two_pi_s = 2.0 * math.pi * s_local
    com_ml = -spec.ml_sway * amp_here * np.sin(two_pi_s) \
        + _smooth_noise(rng, n, spec.noise_mm)
    com_ap = spec.ap_sway * amp_here * np.sin(2.0 * two_pi_s + 0.7) \
        + _smooth_noise(rng, n, spec.noise_mm)
    com_vt = spec.pelvis_height + spec.vt_bounce * amp_here \
        * np.cos(2.0 * two_pi_s) - defl_com \
        + _smooth_noise(rng, n, spec.noise_mm)

    offsets = {"LASI": (-60.0, 80.0, 0.0), "RASI": (60.0, 80.0, 0.0),
               "LPSI": (-60.0, -80.0, 0.0), "RPSI": (60.0, -80.0, 0.0)}
    markers = {}
    center = np.stack([com_ml, com_ap, com_vt], axis=1)
    for name, off in offsets.items():
        markers[name] = center + np.asarray(off)

    # left heel: template height minus local ground deflection
    heel_vt = _heel_height(s_local) * amp_here - defl_left \
        + _smooth_noise(rng, n, 0.3 * spec.noise_mm)
    heel_ml = np.full(n, -90.0) + _smooth_noise(rng, n, 0.3 * spec.noise_mm)
    heel_ap = 150.0 * np.cos(two_pi_s) + _smooth_noise(rng, n,
                                                       0.3 * spec.noise_mm)
    markers["LHEEL"] = np.stack([heel_ml, heel_ap, heel_vt], axis=1)

    # CoP: heel-to-toe progression during stance, held elsewhere
    def cop_channels(s_leg, force, ml_base):
        u = np.clip(s_leg / 0.6, 0.0, 1.0)
        ap = 250.0 - 372.0 * u
        ml = np.full_like(ap, ml_base)
        in_stance = s_leg < 0.6
        ap = np.where(in_stance, ap, 250.0)
        return np.stack([ml, ap, force], axis=1)

    cop_left = cop_channels(s_local, f_left, -80.0)
    cop_right = cop_channels(s_right, f_right, 80.0)

    # closed-loop prosthesis simulation
    gait_lut = default_gait_lut(ssp=0.95)
    moment_lut = default_moment_lut(spec.cfg.moment_map)
    omega_noise = _smooth_noise(rng, n, 2.0)  # deg/s
    plant = PlantState()
    phase = TibiaPhaseState(ssp=0.95)
    m_filt = 0.0
    log = {k: np.zeros(n) for k in
           ("t", "x", "q", "M", "omega", "gait_percent", "L_s", "q_d", "x_cmd")}
    cfg = spec.cfg
    for i in range(n):
        Tk = durations[stride_idx[i]]
        # -sin puts the estimator's phase zero at foot strike
        omega = -spec.tibia_amplitude * amp_here[i] * (2.0 * math.pi / Tk) \
            * math.sin(two_pi_s[i]) + omega_noise[i]
        phase = tibia_phase_update(phase, omega, dt)
        meas = ProsthesisState(x=plant.x, q=plant.q, M=plant.moment,
                               tibia_omega=omega)
        out = step_controller(spec.mode, meas, phase, spec.params,
                              gait_lut, moment_lut, m_prev=m_filt, dt=dt)
        m_filt = out.m_filtered
        # the ankle moment rises monotonically through stance as the CoP
        # travels heel to toe, then releases quickly at toe-off
        u_st = s_local[i] / 0.6
        if u_st < 0.95:
            g = u_st / 0.95
        elif u_st < 1.0:
            g = math.cos(0.5 * math.pi * (u_st - 0.95) / 0.05) ** 2
        else:
            g = 0.0
        load = -spec.load_moment_arm * peak * amp_here[i] * g + impulse[i]
        cfg_i = cfg if k_g[i] == cfg.ground_stiffness \
            else replace(cfg, ground_stiffness=float(k_g[i]))
        plant = step_plant(plant, out.x_cmd, load, cfg_i,
                           vertical_force=float(f_left[i]))
        log["t"][i] = t[i]
        log["x"][i] = plant.x
        log["q"][i] = plant.q
        log["M"][i] = plant.moment
        log["omega"][i] = omega
        log["gait_percent"][i] = phase.gait_percent
        log["L_s"][i] = phase.L_s
        log["q_d"][i] = out.q_d if out.q_d is not None else math.nan
        log["x_cmd"][i] = out.x_cmd

    events_left = np.round(starts[:-1] / dt).astype(int)
    events_left = events_left[events_left < n]
    right_times = starts[:-1] + 0.5 * durations
    events_right = np.round(right_times / dt).astype(int)
    events_right = events_right[events_right < n]

    meta = {"mode": spec.mode, "K_d": spec.params.K_d, "seed": spec.seed,
            "n_strides": spec.n_strides, "stride_period": spec.stride_period,
            "ground_stiffness": ("rigid" if math.isinf(spec.cfg.ground_stiffness)
                                 else spec.cfg.ground_stiffness),
            "body_mass": spec.body_mass}
    return TrialRecording(markers=markers, cop_left=cop_left,
                          cop_right=cop_right, prosthesis=log,
                          events_left=events_left, events_right=events_right,
                          rate=1.0 / dt, meta=meta)


_AXIS_HARMONICS = {
    # weights of stride harmonics 1..4 per axis, loosely shaped like CoM
    # velocity spectra during walking
    "ML": (1.0, 0.9, 0.7, 0.5, 0.3),
    "AP": (0.6, 1.0, 0.8, 0.55, 0.35),
    "VT": (0.55, 1.0, 0.8, 0.5, 0.35),
}


def gait_like_velocity(axis: str, seed: int, n_strides: int = 50,
                       pts_per_stride: int = 100, jitter: float = 0.03,
                       noise: float = 0.08):
    """Synthetic stride-periodic velocity with per-stride variability,
    used to exercise the embedding-parameter estimators."""
    from .signals import TimeSeries
    weights = _AXIS_HARMONICS[axis]
    rng = np.random.default_rng(seed)
    n = n_strides * pts_per_stride
    phases = rng.uniform(0, 2 * np.pi, size=len(weights))
    # per-stride amplitude and phase variability, linearly interpolated so
    # stride boundaries stay smooth
    knots = np.arange(n_strides + 1) * pts_per_stride
    t = np.arange(n)
    amp_k = 1.0 + jitter * np.clip(rng.standard_normal(n_strides + 1), -3, 3)
    ph_k = jitter * np.clip(rng.standard_normal(n_strides + 1), -3, 3)
    stride_amp = np.interp(t, knots, amp_k)
    stride_ph = np.interp(t, knots, ph_k)
    s = t / pts_per_stride + stride_ph
    x = np.zeros(n)
    for h, (w, ph) in enumerate(zip(weights, phases), start=1):
        x += w * np.sin(2 * np.pi * h * s + ph)
    # band-limited noise: white noise through a short gaussian kernel, so
    # the false-neighbor test sees a low-dimensional signal
    kern = np.exp(-0.5 * (np.arange(-6, 7) / 2.5) ** 2)
    kern /= kern.sum()
    colored = np.convolve(rng.standard_normal(n), kern, mode="same")
    colored /= max(colored.std(), 1e-12)
    x = stride_amp * x + noise * colored
    return TimeSeries(x, float(pts_per_stride), 0.0, axis)
