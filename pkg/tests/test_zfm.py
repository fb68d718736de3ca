"""Crossing detection and windowed frequency fits against analytic oracles."""

import numpy as np
import pytest

from conftest import F_REST, SAMPLE_RATE, WINDOW_S, ZFM_PERIODS, make_apparatus
from lmmbench.errors import AnalysisError, ConfigError
from lmmbench.synth import NoiseModel, Waveform, synthesize_reference
from lmmbench.zfm import CrossingList, detect_zero_crossings, estimate_frequency_series


def make_waveform(codes, sample_rate=SAMPLE_RATE):
    return Waveform(codes=np.asarray(codes, dtype=np.int8), sample_rate=sample_rate,
                    channel="signal_beat")


def quiet_noise(seed=0):
    return NoiseModel(additive_sigma=0.0, amplitude=0.95, phase0=0.1, rng_seed=seed)


def test_two_sample_crossing_midpoint():
    crossings = detect_zero_crossings(make_waveform([-10, 10]), hysteresis=0)
    assert len(crossings) == 1
    assert crossings.times[0] == pytest.approx(0.5 / SAMPLE_RATE, rel=1e-15)


def test_interpolation_weights_asymmetric_pair():
    # zero sits 1/4 of the way from -30 to +10
    crossings = detect_zero_crossings(make_waveform([-30, 10]), hysteresis=5)
    assert crossings.times[0] == pytest.approx(0.75 / SAMPLE_RATE, rel=1e-12)


def test_pure_tone_crossing_count():
    duration = 0.004
    tone = synthesize_reference(make_apparatus(), duration, quiet_noise())
    crossings = detect_zero_crossings(tone, hysteresis=8)
    expected = int(duration * F_REST)
    assert abs(len(crossings) - expected) <= 1


def test_noise_does_not_change_crossing_count():
    apparatus = make_apparatus()
    clean = synthesize_reference(apparatus, 0.002, quiet_noise())
    noisy = synthesize_reference(
        apparatus, 0.002,
        NoiseModel(additive_sigma=5 / 127, amplitude=0.95, phase0=0.1, rng_seed=42))
    n_clean = len(detect_zero_crossings(clean, hysteresis=16))
    n_noisy = len(detect_zero_crossings(noisy, hysteresis=16))
    assert n_clean == n_noisy


def test_schmitt_trigger_suppresses_chatter():
    # slow ramp rattling around zero: one arming, one firing
    codes = [-50, -3, 2, -2, 3, -1, 50]
    assert len(detect_zero_crossings(make_waveform(codes), hysteresis=8)) == 1
    # without hysteresis each sign change upward counts
    assert len(detect_zero_crossings(make_waveform(codes), hysteresis=0)) == 3


def test_empty_waveform_rejected():
    with pytest.raises(AnalysisError):
        detect_zero_crossings(make_waveform([]))


def test_flat_waveform_yields_no_crossings():
    crossings = detect_zero_crossings(make_waveform([0, 0, 0, 0]), hysteresis=8)
    assert len(crossings) == 0


def test_crossing_list_must_increase():
    with pytest.raises(ConfigError):
        CrossingList(times=np.array([0.0, 2.0, 1.0]))


def test_spacing_validation():
    good = CrossingList(times=np.arange(100) / F_REST)
    good.validate_spacing(F_REST)
    sparse = CrossingList(times=np.arange(10) * 5.0 / F_REST)
    with pytest.raises(AnalysisError):
        sparse.validate_spacing(F_REST)


def test_exact_on_periodic_grid():
    for f0 in (1.0, 3.13e6, 7.7e4):
        times = np.arange(5001) / f0
        series = estimate_frequency_series(CrossingList(times=times), 500)
        np.testing.assert_allclose(series.f, f0, rtol=1e-12)


def test_exact_on_affine_grid_any_n():
    f0 = 2.5e6
    times = 0.123 + np.arange(1001) / f0
    for n in (50, 100, 1000):
        series = estimate_frequency_series(CrossingList(times=times), n)
        np.testing.assert_allclose(series.f, f0, rtol=1e-12)
    # tiny windows on exactly representable times are exact as well
    exact_times = 16.0 + np.arange(64.0)
    series = estimate_frequency_series(CrossingList(times=exact_times), 5)
    np.testing.assert_allclose(series.f, 1.0, rtol=1e-14)


def test_window_tiling_accounting():
    times = np.arange(10_457) / 1e6
    n = 2000
    series = estimate_frequency_series(CrossingList(times=times), n)
    n_windows = len(series)
    assert n_windows == (len(times) - 1) // n
    consumed = n_windows * n + 1
    assert len(times) - consumed < n


def test_insufficient_crossings_rejected():
    times = np.arange(100) / 1e6
    with pytest.raises(AnalysisError):
        estimate_frequency_series(CrossingList(times=times), 100)


def test_linear_chirp_bias_bound():
    # crossing times of quadratic phase: phi = 2 pi (f0 t + r t^2 / 2)
    f0, rate = 3.13e6, 5e7
    k = np.arange(25_000, dtype=np.float64)
    times = (np.sqrt(f0 * f0 + 2 * rate * k) - f0) / rate
    series = estimate_frequency_series(CrossingList(times=times), ZFM_PERIODS)
    f_true_mid = f0 + rate * series.t_mid
    bound = rate * WINDOW_S * 1e-2
    assert np.abs(series.f - f_true_mid).max() <= bound


def test_tone_every_window_within_1hz():
    tone = synthesize_reference(make_apparatus(), 0.01, quiet_noise())
    crossings = detect_zero_crossings(tone, hysteresis=8)
    series = estimate_frequency_series(crossings, ZFM_PERIODS)
    assert len(series) >= 10
    assert np.abs(series.f - F_REST).max() < 1.0


def test_window_duration_near_nominal():
    tone = synthesize_reference(make_apparatus(), 0.005, quiet_noise())
    crossings = detect_zero_crossings(tone, hysteresis=8)
    n = ZFM_PERIODS
    duration = crossings.times[n] - crossings.times[0]
    assert abs(duration - 0.639e-3) <= 1.0 / SAMPLE_RATE


def test_overlap_stride_doubles_cadence():
    times = np.arange(5001) / 1e6
    full = estimate_frequency_series(CrossingList(times=times), 500)
    half = estimate_frequency_series(CrossingList(times=times), 500, stride=250)
    assert len(half) == 2 * len(full) - 1 or len(half) == 2 * len(full)
    np.testing.assert_allclose(half.f, 1e6, rtol=1e-12)
