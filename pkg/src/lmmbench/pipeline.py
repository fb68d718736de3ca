"""Single-run orchestration: simulate, synthesize, analyze, summarize.

Channel noise seeds derive deterministically from the run's
``sim.rng_seed`` (beat channel: 2*seed, reference channel: 2*seed + 1),
so a run config pins every output byte.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .config import RunConfig, config_hash, run_config_to_dict
from .dynamics import MotionTrace, simulate_impact
from .errors import AnalysisError
from .events import EventSummary, StressStrainTrace, event_summary, locate_event, stress_strain_trace
from .io import (write_frequency_csv, write_json, write_summary_json, write_trace_csv,
                 write_waveform)
from .kinematics import build_motion_trace
from .model import ApparatusSpec
from .synth import NoiseModel, Waveform, synthesize_beat, synthesize_reference
from .zfm import FrequencySeries, detect_zero_crossings, estimate_frequency_series


@dataclass
class RunResult:
    """Everything one virtual run produces, in memory."""

    config: RunConfig
    motion: MotionTrace
    beat: Waveform
    reference: Waveform
    series: FrequencySeries
    f_rest_used: float
    trace: MotionTrace
    summary: EventSummary
    stress_strain: StressStrainTrace


def channel_noise(config: RunConfig) -> tuple[NoiseModel, NoiseModel]:
    """Beat and reference noise models with derived, independent seeds."""
    base = config.sim.rng_seed
    return (replace(config.noise, rng_seed=2 * base),
            replace(config.noise, rng_seed=2 * base + 1))


def estimate_rest_frequency(reference: Waveform, n_periods: int,
                            hysteresis: float = 8.0) -> float:
    """Mean windowed frequency of the reference channel."""
    crossings = detect_zero_crossings(reference, hysteresis)
    series = estimate_frequency_series(crossings, n_periods)
    return float(series.f.mean())


def analyze_record(beat: Waveform, f_rest: float, apparatus: ApparatusSpec,
                   config: RunConfig,
                   run_id: int | None = None) -> tuple[FrequencySeries, MotionTrace,
                                                       EventSummary, StressStrainTrace]:
    """Record to results: crossings, windowed frequency, kinematics, event."""
    analysis = config.analysis
    crossings = detect_zero_crossings(beat, analysis.hysteresis)
    if len(crossings) == 0:
        raise AnalysisError("no zero crossings detected in the record")
    crossings.validate_spacing(apparatus.f_rest)
    series = estimate_frequency_series(crossings, config.zfm_periods)
    trace = build_motion_trace(series, f_rest, apparatus, analysis.diff_half_window)
    summary = event_summary(trace, config.sim.specimen, apparatus.moving_mass,
                            pre_n=analysis.pre_n, guard_windows=analysis.guard_windows,
                            noise_floor=analysis.noise_floor,
                            refine=analysis.refine_origin)
    _, rezeroed = locate_event(trace, analysis.noise_floor, analysis.refine_origin)
    stress_strain = stress_strain_trace(rezeroed, config.sim.specimen)
    if run_id is not None:
        stress_strain.meta["run_id"] = run_id
        rezeroed.meta["run_id"] = run_id
    return series, rezeroed, summary, stress_strain


def run_pipeline(config: RunConfig, run_id: int | None = None) -> RunResult:
    """Full virtual experiment for one run config."""
    motion = simulate_impact(config.sim)
    beat_noise, ref_noise = channel_noise(config)
    apparatus = config.sim.apparatus
    beat = synthesize_beat(motion, apparatus, beat_noise, config.analysis.pre_trigger)
    reference = synthesize_reference(apparatus, beat.duration, ref_noise)
    f_rest_used = estimate_rest_frequency(reference, config.zfm_periods,
                                          config.analysis.hysteresis)
    series, trace, summary, stress_strain = analyze_record(
        beat, f_rest_used, apparatus, config, run_id)
    return RunResult(config=config, motion=motion, beat=beat, reference=reference,
                     series=series, f_rest_used=f_rest_used, trace=trace,
                     summary=summary, stress_strain=stress_strain)


RUN_FILES = {
    "config_json": "config.json",
    "motion_csv": "motion.csv",
    "beat_raw": "beat.raw",
    "reference_raw": "reference.raw",
    "frequency_csv": "frequency.csv",
    "trace_csv": "trace.csv",
    "summary_json": "summary.json",
}


def write_run(result: RunResult, out_dir: str | Path,
              motion_stride: int = 1) -> dict[str, str]:
    """Persist a run's artifacts; returns the manifest file map.

    ``motion_stride`` thins the simulator ground-truth CSV (every n-th
    sample) to keep campaign directories desk-sized; the analysis chain
    never reads it back.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = config_hash(result.config)
    seed = result.config.sim.rng_seed

    write_json(run_config_to_dict(result.config), out / RUN_FILES["config_json"])
    motion = result.motion
    if motion_stride > 1:
        sl = slice(None, None, motion_stride)
        motion = MotionTrace(t=motion.t[sl], v=motion.v[sl], x=motion.x[sl],
                             a=motion.a[sl], F=motion.F[sl], meta=motion.meta)
    write_trace_csv(motion, out / RUN_FILES["motion_csv"])
    write_waveform(result.beat, out / RUN_FILES["beat_raw"], seed=2 * seed,
                   config_digest=digest)
    write_waveform(result.reference, out / RUN_FILES["reference_raw"],
                   seed=2 * seed + 1, config_digest=digest)
    write_frequency_csv(result.series, out / RUN_FILES["frequency_csv"])
    write_trace_csv(result.trace, out / RUN_FILES["trace_csv"])
    write_summary_json(result.summary, out / RUN_FILES["summary_json"])
    return {key: name for key, name in RUN_FILES.items()}
