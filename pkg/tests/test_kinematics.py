"""Doppler inversion, integration, differentiation and trace assembly."""

import numpy as np
import pytest

from conftest import (F_REST, MASS, WAVELENGTH, WINDOW_S, ZFM_PERIODS, make_apparatus,
                      make_run_config, make_sim_config)
from lmmbench.dynamics import simulate_impact
from lmmbench.errors import AnalysisError
from lmmbench.kinematics import (assemble_trace, beat_to_velocity, build_motion_trace,
                                 differentiate_velocity, inertial_force,
                                 integrate_velocity)
from lmmbench.pipeline import run_pipeline
from lmmbench.synth import NoiseModel, synthesize_beat
from lmmbench.zfm import FrequencySeries, detect_zero_crossings, estimate_frequency_series


def make_series(f, t=None):
    f = np.asarray(f, dtype=np.float64)
    if t is None:
        t = np.arange(len(f)) * WINDOW_S
    return FrequencySeries(t_mid=t, f=f, window_periods=ZFM_PERIODS)


def test_rest_beat_means_standstill():
    series = make_series([F_REST] * 5)
    _, v = beat_to_velocity(series, F_REST, WAVELENGTH)
    np.testing.assert_array_equal(v, 0.0)


def test_doppler_inversion_exact():
    # wavelength * offset / 2 by hand: 632.8e-9 * 132.12e3 / 2
    offset = 132.12e3
    expected = 4.1802768e-2
    assert WAVELENGTH * offset / 2 == pytest.approx(expected, rel=1e-15)
    series = make_series([F_REST - offset])
    _, v = beat_to_velocity(series, F_REST, WAVELENGTH)
    assert v[0] == pytest.approx(expected, rel=1e-12)


def test_doppler_linearity():
    series1 = make_series([F_REST - 1e4])
    series2 = make_series([F_REST - 2e4])
    _, v1 = beat_to_velocity(series1, F_REST, WAVELENGTH)
    _, v2 = beat_to_velocity(series2, F_REST, WAVELENGTH)
    assert v2[0] == pytest.approx(2 * v1[0], rel=1e-14)


def test_rest_frequency_shift_sensitivity():
    # 10 Hz rest-frequency error maps to wavelength * 10 / 2 of velocity
    delta_v = WAVELENGTH * 10.0 / 2.0
    assert delta_v == pytest.approx(3.164e-6, rel=1e-3)
    series = make_series([F_REST])
    _, v_shifted = beat_to_velocity(series, F_REST + 10.0, WAVELENGTH)
    assert v_shifted[0] == pytest.approx(delta_v, rel=1e-12)


def test_integrate_constant_velocity():
    t = np.arange(101) * 1e-3
    x = integrate_velocity(t, np.full(101, 0.25))
    assert x[0] == 0.0
    assert x[-1] == pytest.approx(0.25 * t[-1], rel=1e-12)


def test_integrate_sine_against_antiderivative():
    omega = 40.0
    dt = 1e-4
    t = np.arange(5000) * dt
    x = integrate_velocity(t, np.sin(omega * t))
    exact = (1 - np.cos(omega * t)) / omega
    assert np.abs(x - exact).max() < omega * dt**2  # O(dt^2) trapezoid bound


def test_integrate_single_sample():
    assert list(integrate_velocity(np.array([0.0]), np.array([3.0]))) == [0.0]


def test_integrate_rejects_nonuniform_grid():
    with pytest.raises(AnalysisError):
        integrate_velocity(np.array([0.0, 1.0, 2.5]), np.zeros(3))


def test_differentiate_affine_exact_everywhere():
    dt = 1e-3
    v = 0.7 - 4.0 * np.arange(50) * dt
    a = differentiate_velocity(v, dt, half_window=3)
    np.testing.assert_allclose(a, -4.0, rtol=1e-10)


def test_differentiate_quadratic_exact_in_interior():
    dt = 1e-3
    t = np.arange(60) * dt
    v = 3.0 * t**2
    a = differentiate_velocity(v, dt, half_window=4)
    interior = slice(4, -4)
    np.testing.assert_allclose(a[interior], 6.0 * t[interior], rtol=1e-9)


def test_differentiate_too_short():
    with pytest.raises(AnalysisError):
        differentiate_velocity(np.zeros(6), 1e-3, half_window=3)


def test_differentiate_white_noise_gain():
    # sigma_a = sigma_v * sqrt(2) / (2 k dt) for white velocity noise
    rng = np.random.default_rng(5)
    dt, k, sigma_v = 0.64e-3, 3, 3.29e-5
    v = rng.normal(0.0, sigma_v, 200_000)
    a = differentiate_velocity(v, dt, half_window=k)
    expected = sigma_v * np.sqrt(2.0) / (2 * k * dt)
    assert expected == pytest.approx(1.21e-2, rel=2e-2)
    assert np.std(a[k:-k]) == pytest.approx(expected, rel=2e-2)


def test_inertial_force_values():
    a = np.array([-4.2458, 0.0])
    force = inertial_force(a, MASS)
    assert force[0] == pytest.approx(MASS * -4.2458, rel=1e-15)
    assert force[0] == pytest.approx(-12.30, abs=0.01)
    assert force[1] == 0.0
    # 1.15e-2 m/s^2 of acceleration noise maps to ~33 mN of force noise
    assert MASS * 1.15e-2 == pytest.approx(33.3e-3, rel=1e-2)


def test_build_motion_trace_constant_rest():
    series = make_series([F_REST] * 40)
    trace = build_motion_trace(series, F_REST, make_apparatus(), half_window=3)
    assert len(trace) == 40
    np.testing.assert_allclose(trace.v, 0.0, atol=1e-18)
    np.testing.assert_allclose(trace.F, 0.0, atol=1e-12)
    np.testing.assert_array_equal(trace.F, MASS * trace.a)


def test_build_motion_trace_alignment_and_grid():
    rng = np.random.default_rng(1)
    t = np.cumsum(np.full(50, WINDOW_S) * (1 + 0.03 * rng.standard_normal(50)))
    series = make_series(F_REST + 100.0 * rng.standard_normal(50), t=np.sort(t))
    trace = build_motion_trace(series, F_REST, make_apparatus())
    steps = np.diff(trace.t)
    assert np.abs(steps - steps.mean()).max() < 1e-9 * steps.mean()
    assert len({len(trace.t), len(trace.v), len(trace.x), len(trace.a), len(trace.F)}) == 1


def test_differentiate_then_integrate_recovers_velocity():
    dt = 1e-3
    t = np.arange(400) * dt
    v = 0.01 * np.sin(7.0 * t)
    a = differentiate_velocity(v, dt, half_window=1)
    v_back = integrate_velocity(t, a)
    drift = v - v[0] - v_back
    assert np.abs(drift[1:-1]).max() <= np.abs(np.diff(v)).max()


def test_round_trip_against_ground_truth():
    """Full signal chain vs the same processing applied to true velocities."""
    cfg = make_sim_config(dt=2e-6, duration=0.14, capture_duration=0.1)
    motion = simulate_impact(cfg)
    quiet = NoiseModel(additive_sigma=0.0, amplitude=0.95, phase0=0.1, rng_seed=1)
    beat = synthesize_beat(motion, cfg.apparatus, quiet, pre_trigger=0.02)
    series = estimate_frequency_series(detect_zero_crossings(beat, 8), ZFM_PERIODS)
    trace = build_motion_trace(series, F_REST, cfg.apparatus, half_window=3)

    # ground truth: true velocity sampled on the same grid, same processing
    t_abs = trace.t + beat.meta["capture_start"]
    v_true = np.interp(t_abs, motion.t, motion.v)
    truth = assemble_trace(trace.t, v_true, MASS, half_window=3)

    assert np.abs(trace.v - truth.v).max() < 5e-5
    assert np.abs(trace.x - truth.x).max() < 2e-6
    assert np.abs(trace.F - truth.F).max() < 0.05
    # single negative force lobe, free flight on both sides
    peak = np.argmin(trace.F)
    assert trace.F[peak] < -5.0
    assert np.abs(trace.F[:peak - 40]).max() < 0.1
    assert np.abs(trace.F[peak + 40:]).max() < 0.1


def test_full_pipeline_smoke():
    result = run_pipeline(make_run_config(duration=0.12, capture_duration=0.08))
    assert result.summary.F_max < -10.0
    assert result.summary.v1 > 0.0
