"""Admittance-controlled prosthetic ankle simulation and gait-stability
analysis: signal utilities, lookup-table engine, controllers, a closed-loop
plant with compliant ground, divergence exponents, margins of stability,
and quasi-stiffness profiles."""

from .signals import (StrideGrid, TimeSeries, butterworth_lowpass,
                      finite_difference, moving_average, resample_linear,
                      time_normalize)
from .lut import (InvalidLutError, Lut2D, LutDomainError, SyntheticMomentMap,
                  UnreachableTargetError, build_lut_from_map,
                  default_angle_grid, default_motor_grid, lut_eval,
                  lut_invert, read_lut_csv, write_lut_csv)
from .controllers import (AdmittanceParams, ControllerOutput, ProsthesisState,
                          TibiaPhaseState, admittance_equilibrium,
                          admittance_target, ankle_controller, blend_commands,
                          default_gait_lut, default_moment_lut,
                          moment_feedback, step_controller,
                          tibia_phase_update, tibia_reference_motor)
from .plant import (Perturbation, PlantConfig, PlantState,
                    SimulationDivergedError, TrialRecording, TrialSpec,
                    gait_like_velocity, generate_trial, ground_deflection,
                    inject_perturbation, step_plant)
from .stiffness import (CycleAverage, GaitPhaseConfig, StiffnessProfile,
                        average_cycle, quasi_stiffness, segment_cycles)
from .analysis import (AnalysisSettings, SchemaMismatchError, analyze_trial,
                       compare_reports)
from .config import ConfigError, RunConfig
from . import io, stability

__version__ = "0.1.0"
