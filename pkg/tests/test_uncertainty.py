"""Force-uncertainty budget items against hand propagation."""

import math

import numpy as np
import pytest

from conftest import BEARING_A, MASS, WAVELENGTH, WINDOW_S, make_apparatus, make_run_config
from lmmbench.errors import AnalysisError
from lmmbench.kinematics import assemble_trace
from lmmbench.pipeline import run_pipeline
from lmmbench.uncertainty import (bearing_friction, evaluate_budget, render_budget_table,
                                  velocity_jitter)
from test_events import half_sine_pulse_trace


def test_bearing_friction_values():
    assert bearing_friction(0.06, BEARING_A) == pytest.approx(4.8e-3, rel=1e-12)
    assert bearing_friction(0.0, BEARING_A) == 0.0
    assert bearing_friction(-0.06, BEARING_A) == pytest.approx(-4.8e-3, rel=1e-12)


def test_bearing_friction_linear_odd():
    rng = np.random.default_rng(2)
    for v in rng.uniform(-0.2, 0.2, 10):
        assert bearing_friction(-v, BEARING_A) == -bearing_friction(v, BEARING_A)
        assert bearing_friction(2 * v, BEARING_A) == pytest.approx(
            2 * bearing_friction(v, BEARING_A), rel=1e-14)


def jittered_trace(sigma_v=3.29e-5, seed=21, v0=0.0561):
    """Half-sine event with per-segment normalized white velocity jitter."""
    trace = half_sine_pulse_trace(t0=0.05, base=0.031, peak=-16.30, v0=v0)
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(len(trace.v))
    v = trace.v + sigma_v * noise / np.std(noise, ddof=1)
    return assemble_trace(trace.t, v, MASS, half_window=3)


def test_velocity_jitter_normalized_injection():
    # 20-sample standard deviations scatter by ~16 percent around the
    # injected level; the band covers three of those
    trace = jittered_trace()
    pre, post = velocity_jitter(trace, n=20)
    assert 1.7e-5 < pre < 4.9e-5
    assert 1.7e-5 < post < 4.9e-5


def test_velocity_jitter_constant_series_is_zero():
    trace = half_sine_pulse_trace()
    pre, post = velocity_jitter(trace, n=20)
    assert pre == pytest.approx(0.0, abs=1e-15)
    assert post == pytest.approx(0.0, abs=1e-12)


def test_velocity_jitter_noise_free_chain_is_tiny():
    result = run_pipeline(make_run_config(
        noise=__import__("lmmbench.synth", fromlist=["NoiseModel"]).NoiseModel(
            additive_sigma=0.0, amplitude=0.95, phase0=0.1),
        duration=0.12, capture_duration=0.09))
    pre, post = velocity_jitter(result.trace, n=20)
    assert pre < 1e-6
    assert post < 1e-6


def test_velocity_jitter_needs_segments():
    trace = half_sine_pulse_trace(t0=0.004)
    with pytest.raises(AnalysisError):
        velocity_jitter(trace, n=20)


def test_budget_terms_match_hand_propagation():
    trace = jittered_trace()
    budget = evaluate_budget(trace, make_apparatus(), n=20, half_window=3)
    span = 2 * 3 * trace.dt
    sigma_v = max(budget.u1_vibration.sigma_v_pre, budget.u1_vibration.sigma_v_post)
    assert budget.u1_vibration.sigma_a == pytest.approx(
        sigma_v * math.sqrt(2) / span, rel=1e-12)
    assert budget.u1_vibration.sigma_F == pytest.approx(
        MASS * budget.u1_vibration.sigma_a, rel=1e-12)

    assert budget.u2_mass.delta_F_at_Fmax == pytest.approx(
        (1e-5 / MASS) * budget.f_max, rel=1e-12)

    assert budget.u3_alignment.relative_v_error == pytest.approx(0.5 * 1e-6, rel=1e-3)
    assert budget.u3_alignment.relative_v_error == pytest.approx(5e-7, rel=1e-3)

    assert budget.u4_frequency.delta_v == pytest.approx(WAVELENGTH * 10 / 2, rel=1e-12)
    assert budget.u4_frequency.delta_F == pytest.approx(
        MASS * budget.u4_frequency.delta_v * math.sqrt(2) / span, rel=1e-12)

    assert budget.u5_friction.F_af_at_vref == pytest.approx(4.8e-3, rel=1e-12)

    rss = math.sqrt(budget.u1_vibration.sigma_F**2
                    + budget.u2_mass.delta_F_at_Fmax**2
                    + budget.u4_frequency.delta_F**2
                    + budget.u5_friction.F_af_at_vref**2)
    assert budget.combined_sigma_F == pytest.approx(rss, rel=1e-12)
    assert budget.combined_relative == pytest.approx(rss / budget.f_max, rel=1e-12)
    # combined_sigma_F is at least the largest combined item
    assert budget.combined_sigma_F >= budget.u1_vibration.sigma_F


def test_vibration_dominates_variance():
    # the bearing-drag term (4.8 mN) caps the vibration share just above
    # 95 percent of the combined variance at bench parameters
    budget = evaluate_budget(jittered_trace(), make_apparatus(), n=20, half_window=3)
    share = budget.u1_vibration.sigma_F**2 / budget.combined_sigma_F**2
    assert share > 0.95
    others = (budget.u2_mass.delta_F_at_Fmax, budget.u4_frequency.delta_F,
              budget.u5_friction.F_af_at_vref)
    assert budget.u1_vibration.sigma_F > max(others)


def test_budget_homogeneous_in_jitter():
    small = evaluate_budget(jittered_trace(sigma_v=1e-5, seed=3),
                            make_apparatus(), n=20, half_window=3)
    large = evaluate_budget(jittered_trace(sigma_v=2e-5, seed=3),
                            make_apparatus(), n=20, half_window=3)
    assert large.u1_vibration.sigma_F == pytest.approx(
        2 * small.u1_vibration.sigma_F, rel=1e-6)


def test_budget_table_renders():
    budget = evaluate_budget(jittered_trace(), make_apparatus(), n=20, half_window=3)
    table = render_budget_table(budget)
    assert "U1 vibration" in table
    assert "combined (rss)" in table
    assert "of |F_max|" in table


def test_frequency_item_magnitude():
    # 10 Hz instability propagates to around 3 mN through the 3.83 ms span
    budget = evaluate_budget(jittered_trace(), make_apparatus(), n=20, half_window=3)
    span = 2 * 3 * WINDOW_S
    expected = MASS * (WAVELENGTH * 10 / 2) * math.sqrt(2) / span
    assert expected == pytest.approx(3.38e-3, rel=2e-2)
    assert budget.u4_frequency.delta_F == pytest.approx(expected, rel=1e-3)
