"""Virtual levitation-mass impact-tensile test bench.

Simulate a rigid mass striking a viscoelastic wire, synthesize the
heterodyne beat record its digitizer would capture, and run the full
analysis chain: zero-crossing frequency estimation, kinematics
reconstruction, event and energy analysis, constitutive-coefficient
regression, and the force-uncertainty budget.
"""

__version__ = "0.1.0"

from .model import ApparatusSpec, MaterialKV, SpecimenSpec, cross_section_area, wire_volume
from .dynamics import MotionTrace, SimConfig, analytic_contact_trace, contact_force, simulate_impact
from .synth import NoiseModel, Waveform, synthesize_beat, synthesize_reference
from .zfm import CrossingList, FrequencySeries, detect_zero_crossings, estimate_frequency_series
from .kinematics import (beat_to_velocity, build_motion_trace, differentiate_velocity,
                         inertial_force, integrate_velocity)
from .events import (EventSummary, StressStrainTrace, detect_event_origin, event_summary,
                     fwhm, stress_strain_trace)
from .kvfit import KVFit, LoadingSamples, fit_diagnostics, fit_kelvin_voigt, predict_stress, select_loading_samples
from .uncertainty import UncertaintyBudget, bearing_friction, evaluate_budget, velocity_jitter
from .config import CampaignConfig, RunConfig, paper_run_config
from .pipeline import RunResult, analyze_record, run_pipeline
from .campaign import emit_report, run_campaign

__all__ = [
    "ApparatusSpec", "MaterialKV", "SpecimenSpec", "cross_section_area", "wire_volume",
    "MotionTrace", "SimConfig", "analytic_contact_trace", "contact_force", "simulate_impact",
    "NoiseModel", "Waveform", "synthesize_beat", "synthesize_reference",
    "CrossingList", "FrequencySeries", "detect_zero_crossings", "estimate_frequency_series",
    "beat_to_velocity", "build_motion_trace", "differentiate_velocity",
    "inertial_force", "integrate_velocity",
    "EventSummary", "StressStrainTrace", "detect_event_origin", "event_summary",
    "fwhm", "stress_strain_trace",
    "KVFit", "LoadingSamples", "fit_diagnostics", "fit_kelvin_voigt", "predict_stress",
    "select_loading_samples",
    "UncertaintyBudget", "bearing_friction", "evaluate_budget", "velocity_jitter",
    "CampaignConfig", "RunConfig", "paper_run_config",
    "RunResult", "analyze_record", "run_pipeline",
    "emit_report", "run_campaign",
]
