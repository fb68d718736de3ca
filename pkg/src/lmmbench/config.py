"""JSON run manifests: one record describing a whole virtual experiment.

A run config bundles the physical configuration (specimen, material,
apparatus), the simulation inputs, the synthesis noise model and the
analysis knobs.  The pipeline derives all channel noise seeds from the
single ``sim.rng_seed``, so one (config, seed) pair pins every byte of
the outputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .dynamics import SimConfig
from .errors import ConfigError
from .model import ApparatusSpec, MaterialKV, SpecimenSpec
from .synth import NoiseModel


@dataclass(frozen=True)
class AnalysisParams:
    """Knobs of the record-to-results chain."""

    zfm_periods: int | None = None        # None: use the apparatus value
    diff_half_window: int = 3
    hysteresis: float = 8.0               # code units
    pre_trigger: float = 0.03             # s of flight captured before wire-taut
    pre_n: int = 20                       # free-flight windows per velocity average
    guard_windows: int = 1
    noise_floor: float = 1e-3             # N
    refine_origin: bool = True
    onset_guard: int = 2                  # windows dropped after origin when pooling
    include_unloading: bool = False


@dataclass(frozen=True)
class RunConfig:
    sim: SimConfig
    noise: NoiseModel = NoiseModel()
    analysis: AnalysisParams = AnalysisParams()

    @property
    def zfm_periods(self) -> int:
        return self.analysis.zfm_periods or self.sim.apparatus.zfm_periods


@dataclass(frozen=True)
class CampaignConfig:
    """A batch of runs sharing one base config with per-run initial velocities."""

    base: RunConfig
    n_runs: int
    v0_schedule: tuple[float, ...]
    seed: int = 0
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.n_runs != len(self.v0_schedule):
            raise ConfigError(
                f"n_runs {self.n_runs} != len(v0_schedule) {len(self.v0_schedule)}"
            )
        if any(not (v > 0) for v in self.v0_schedule):
            raise ConfigError("campaign v0 values must be > 0")


def default_v0_schedule(n_runs: int, lo: float = 8.25e-3, hi: float = 5.61e-2) -> tuple[float, ...]:
    """Evenly spaced initial velocities spanning the bench's working force range.

    The published thirty velocities are not available, so the default
    schedule spans initial kinetic energies of roughly 0.1 to 4.5 mJ,
    which drives peak forces over about -2.4 to -16.3 N at the default
    wire.
    """
    if n_runs == 1:
        return (0.5 * (lo + hi),)
    return tuple(np.linspace(lo, hi, n_runs))


def paper_run_config(rng_seed: int = 20260809) -> RunConfig:
    """Bench defaults: 0.1 mm x 100 mm tungsten wire on the 2.897 kg carriage."""
    specimen = SpecimenSpec(diameter=1e-4, natural_length=0.1, label="tungsten-wire-0.1mm")
    material = MaterialKV(c=0.0, e_modulus=-3.758e11, eta=-2.432e7)
    apparatus = ApparatusSpec(
        moving_mass=2.897,
        wavelength_air=632.8e-9,
        f_rest=3.13e6,
        bearing_coefficient=8e-2,
        sample_rate=30e6,
        adc_bits=8,
        capture_duration=0.5,
        zfm_periods=2000,
    )
    sim = SimConfig(specimen=specimen, material=material, apparatus=apparatus,
                    v0=4.18e-2, slack_gap=1.5e-3, dt=1e-6, duration=0.5,
                    rng_seed=rng_seed)
    return RunConfig(sim=sim)


# ---------------------------------------------------------------------------
# JSON (de)serialization

def run_config_to_dict(config: RunConfig) -> dict:
    sim = config.sim
    return {
        "specimen": asdict(sim.specimen),
        "material": asdict(sim.material),
        "apparatus": asdict(sim.apparatus),
        "sim": {
            "v0": sim.v0,
            "slack_gap": sim.slack_gap,
            "dt": sim.dt,
            "duration": sim.duration,
            "rng_seed": sim.rng_seed,
        },
        "noise": {
            "additive_sigma": config.noise.additive_sigma,
            "amplitude": config.noise.amplitude,
            "phase0": config.noise.phase0,
        },
        "analysis": asdict(config.analysis),
    }


def _build(section: dict, cls, name: str):
    try:
        return cls(**section)
    except TypeError as exc:
        raise ConfigError(f"bad {name} section: {exc}") from None


def parse_run_config(data: dict) -> RunConfig:
    for key in ("specimen", "material", "apparatus", "sim"):
        if key not in data:
            raise ConfigError(f"config is missing the {key!r} section")
    specimen = _build(dict(data["specimen"]), SpecimenSpec, "specimen")
    material = _build(dict(data["material"]), MaterialKV, "material")
    apparatus = _build(dict(data["apparatus"]), ApparatusSpec, "apparatus")
    sim = _build({"specimen": specimen, "material": material, "apparatus": apparatus,
                  **data["sim"]}, SimConfig, "sim")
    noise = _build(dict(data.get("noise", {})), NoiseModel, "noise")
    analysis = _build(dict(data.get("analysis", {})), AnalysisParams, "analysis")
    return RunConfig(sim=sim, noise=noise, analysis=analysis)


def campaign_config_to_dict(config: CampaignConfig) -> dict:
    return {
        "base": run_config_to_dict(config.base),
        "n_runs": config.n_runs,
        "v0_schedule": list(config.v0_schedule),
        "seed": config.seed,
        "output_dir": config.output_dir,
    }


def parse_campaign_config(data: dict) -> CampaignConfig:
    if "base" not in data:
        raise ConfigError("campaign config is missing the 'base' section")
    base = parse_run_config(data["base"])
    schedule = data.get("v0_schedule")
    if schedule is None:
        n_runs = data.get("n_runs")
        if n_runs is None:
            raise ConfigError("campaign config needs v0_schedule or n_runs")
        schedule = default_v0_schedule(int(n_runs))
    schedule = tuple(float(v) for v in schedule)
    return CampaignConfig(
        base=base,
        n_runs=int(data.get("n_runs", len(schedule))),
        v0_schedule=schedule,
        seed=int(data.get("seed", 0)),
        output_dir=data.get("output_dir"),
    )


def load_run_config(path: str | Path) -> RunConfig:
    with open(path, encoding="utf-8") as handle:
        return parse_run_config(json.load(handle))


def load_campaign_config(path: str | Path) -> CampaignConfig:
    with open(path, encoding="utf-8") as handle:
        return parse_campaign_config(json.load(handle))


def save_run_config(config: RunConfig, path: str | Path) -> None:
    Path(path).write_text(json.dumps(run_config_to_dict(config), indent=2) + "\n",
                          encoding="utf-8")


def config_hash(config: RunConfig) -> str:
    """Stable short digest of a run config for provenance sidecars."""
    canonical = json.dumps(run_config_to_dict(config), sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def with_run_overrides(config: RunConfig, v0: float | None = None,
                       rng_seed: int | None = None) -> RunConfig:
    """Copy of a run config with the per-run campaign fields replaced."""
    sim = config.sim
    if v0 is not None or rng_seed is not None:
        sim = replace(sim, v0=sim.v0 if v0 is None else v0,
                      rng_seed=sim.rng_seed if rng_seed is None else rng_seed)
    return replace(config, sim=sim)
