"""Heterodyne beat synthesis: motion in, quantized photodiode record out.

The instantaneous beat frequency follows the Doppler law
``f_beat(t) = f_rest - 2 v(t) / wavelength``.  Phase is accumulated by
trapezoidal integration of the beat frequency on the dense sample grid,
with the velocity linearly interpolated between motion-grid points, so
the synthesized record is exact up to quantization for piecewise-linear
velocity histories.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import MotionTrace
from .errors import ConfigError, SignalError
from .model import ApparatusSpec

SIGNAL_BEAT = "signal_beat"
REST_REFERENCE = "rest_reference"
CHANNELS = (SIGNAL_BEAT, REST_REFERENCE)


@dataclass(frozen=True)
class NoiseModel:
    """Additive front-end noise and carrier amplitude, as fractions of full scale."""

    additive_sigma: float = 0.02
    amplitude: float = 0.95
    phase0: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.amplitude <= 1.0):
            raise ConfigError(f"amplitude must be in (0, 1], got {self.amplitude}")
        if self.additive_sigma < 0.0:
            raise ConfigError(f"additive_sigma must be >= 0, got {self.additive_sigma}")


@dataclass
class Waveform:
    """Quantized sample stream of one digitizer channel.

    ``codes`` are signed integers centered on zero (int8 for records of
    up to 8 bits; int16 in memory for deeper quantization studies).
    ``trigger_index`` marks where the capture trigger fired within the
    record; synthesized records start at the trigger, so it is zero for
    them.  Times downstream are relative to the first sample.
    """

    codes: np.ndarray
    sample_rate: float
    channel: str
    trigger_index: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.channel not in CHANNELS:
            raise ConfigError(f"channel must be one of {CHANNELS}, got {self.channel!r}")
        if not (self.sample_rate > 0):
            raise ConfigError(f"sample_rate must be > 0, got {self.sample_rate}")
        if len(self.codes) and not (0 <= self.trigger_index < len(self.codes)):
            raise ConfigError(
                f"trigger_index {self.trigger_index} outside [0, {len(self.codes)})"
            )

    @property
    def duration(self) -> float:
        return len(self.codes) / self.sample_rate

    def __len__(self) -> int:
        return len(self.codes)


def quantize(samples: np.ndarray, adc_bits: int) -> np.ndarray:
    """Round full-scale-fraction samples to signed codes and clamp to range."""
    full_scale = 2 ** (adc_bits - 1) - 1
    codes = np.clip(np.rint(samples * full_scale), -(full_scale + 1), full_scale)
    return codes.astype(np.int8 if adc_bits <= 8 else np.int16)


def _render_tone(f_inst: np.ndarray, sample_rate: float, noise: NoiseModel,
                 adc_bits: int) -> np.ndarray:
    """Phase-accumulate an instantaneous-frequency law and quantize it."""
    dphi = (np.pi / sample_rate) * (f_inst[1:] + f_inst[:-1])
    phase = np.empty(len(f_inst))
    phase[0] = noise.phase0
    np.cumsum(dphi, out=phase[1:])
    phase[1:] += noise.phase0
    samples = noise.amplitude * np.sin(phase)
    if noise.additive_sigma > 0.0:
        rng = np.random.default_rng(noise.rng_seed)
        samples = samples + rng.normal(0.0, noise.additive_sigma, len(samples))
    return quantize(samples, adc_bits)


def taut_time(motion: MotionTrace) -> float | None:
    """First instant the mass reaches the slack gap recorded in the trace meta."""
    slack = motion.meta.get("slack_gap")
    if slack is None:
        return None
    hit = np.flatnonzero(motion.x >= slack)
    if len(hit) == 0:
        return None
    return float(motion.t[hit[0]])


def synthesize_beat(motion: MotionTrace, apparatus: ApparatusSpec, noise: NoiseModel,
                    pre_trigger: float = 0.03) -> Waveform:
    """Render the signal-channel beat record for a motion history.

    The capture starts ``pre_trigger`` seconds before the wire-taut
    instant (clamped to the motion span) and runs for the apparatus
    capture duration or to the end of the motion, whichever is shorter.
    """
    if len(motion) < 2:
        raise SignalError("motion trace too short to synthesize")
    t_taut = taut_time(motion)
    t_start = motion.t[0] if t_taut is None else max(motion.t[0], t_taut - pre_trigger)
    available = motion.t[-1] - t_start
    duration = min(apparatus.capture_duration, available)
    n_samples = int(round(duration * apparatus.sample_rate))
    if n_samples < 2:
        raise SignalError("capture window holds no samples")

    t_dense = t_start + np.arange(n_samples) / apparatus.sample_rate
    v_dense = np.interp(t_dense, motion.t, motion.v)
    f_beat = apparatus.f_rest - 2.0 * v_dense / apparatus.wavelength_air
    if np.any(f_beat <= 0.0):
        raise SignalError(
            f"beat frequency would go non-positive (min {f_beat.min():g} Hz); "
            "velocity exceeds the heterodyne range"
        )
    codes = _render_tone(f_beat, apparatus.sample_rate, noise, apparatus.adc_bits)
    meta = {
        "capture_start": float(t_start),
        "taut_time": t_taut,
        "pre_trigger": pre_trigger,
        "rng_seed": noise.rng_seed,
    }
    return Waveform(codes=codes, sample_rate=apparatus.sample_rate,
                    channel=SIGNAL_BEAT, trigger_index=0, meta=meta)


def synthesize_reference(apparatus: ApparatusSpec, duration: float,
                         noise: NoiseModel) -> Waveform:
    """Render the rest-frequency reference channel: a constant tone."""
    if not (duration > 0):
        raise SignalError(f"reference duration must be > 0, got {duration}")
    n_samples = int(round(duration * apparatus.sample_rate))
    if n_samples < 2:
        raise SignalError("reference window holds no samples")
    f_inst = np.full(n_samples, apparatus.f_rest)
    codes = _render_tone(f_inst, apparatus.sample_rate, noise, apparatus.adc_bits)
    return Waveform(codes=codes, sample_rate=apparatus.sample_rate,
                    channel=REST_REFERENCE, trigger_index=0,
                    meta={"rng_seed": noise.rng_seed})
