"""Shared bench fixtures: the 0.1 mm tungsten wire on the 2.897 kg carriage."""

import numpy as np
import pytest

from lmmbench.config import AnalysisParams, RunConfig
from lmmbench.dynamics import SimConfig
from lmmbench.model import ApparatusSpec, MaterialKV, SpecimenSpec

# fitted constitutive coefficients of the reference wire
E_MOD = -3.758e11
ETA = -2.432e7
C_OFFSET = 4.960e7

MASS = 2.897
WAVELENGTH = 632.8e-9
F_REST = 3.13e6
SAMPLE_RATE = 30e6
ZFM_PERIODS = 2000
BEARING_A = 8e-2

DIAMETER = 1e-4
LENGTH = 0.1

#: nominal frequency-window duration at the rest beat
WINDOW_S = ZFM_PERIODS / F_REST


def make_specimen() -> SpecimenSpec:
    return SpecimenSpec(diameter=DIAMETER, natural_length=LENGTH, label="test-wire")


def make_material(c: float = 0.0, e_modulus: float = E_MOD, eta: float = ETA) -> MaterialKV:
    return MaterialKV(c=c, e_modulus=e_modulus, eta=eta)


def make_apparatus(capture_duration: float = 0.12, **overrides) -> ApparatusSpec:
    params = dict(
        moving_mass=MASS,
        wavelength_air=WAVELENGTH,
        f_rest=F_REST,
        bearing_coefficient=BEARING_A,
        sample_rate=SAMPLE_RATE,
        adc_bits=8,
        capture_duration=capture_duration,
        zfm_periods=ZFM_PERIODS,
    )
    params.update(overrides)
    return ApparatusSpec(**params)


def make_sim_config(v0: float = 4.18e-2, slack_gap: float = 1.5e-3, dt: float = 2e-6,
                    duration: float = 0.16, rng_seed: int = 11,
                    material: MaterialKV | None = None,
                    capture_duration: float = 0.12, **apparatus_overrides) -> SimConfig:
    return SimConfig(
        specimen=make_specimen(),
        material=material if material is not None else make_material(),
        apparatus=make_apparatus(capture_duration, **apparatus_overrides),
        v0=v0,
        slack_gap=slack_gap,
        dt=dt,
        duration=duration,
        rng_seed=rng_seed,
    )


def make_run_config(noise=None, analysis: AnalysisParams | None = None,
                    **sim_kwargs) -> RunConfig:
    from lmmbench.synth import NoiseModel
    return RunConfig(
        sim=make_sim_config(**sim_kwargs),
        noise=noise if noise is not None else NoiseModel(),
        analysis=analysis if analysis is not None else AnalysisParams(),
    )


@pytest.fixture(scope="session")
def specimen():
    return make_specimen()


@pytest.fixture(scope="session")
def apparatus():
    return make_apparatus()


@pytest.fixture(scope="session")
def material():
    return make_material()


def window_grid_velocity(sim_trace, window_s: float = WINDOW_S,
                         phase: float = 0.25) -> tuple[np.ndarray, np.ndarray]:
    """Sample a simulator trace's velocity onto a frequency-window grid."""
    t0 = sim_trace.t[0] + phase * window_s
    n = int((sim_trace.t[-1] - t0) / window_s)
    t = t0 + np.arange(n) * window_s
    return t, np.interp(t, sim_trace.t, sim_trace.v)
