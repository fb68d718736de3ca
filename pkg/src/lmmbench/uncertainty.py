"""Force-uncertainty budget from a measured trace and apparatus constants.

Five items: free-flight velocity jitter propagated through the
differentiation span (the dominant one), mass calibration, optical
alignment (a relative cosine error), laser frequency stability, and
bearing drag.  The combined figure is the root sum of squares of the
force-dimensioned items; at bench parameters it coincides with the
dominant item to three significant figures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import MotionTrace
from .errors import AnalysisError
from .events import DEFAULT_NOISE_FLOOR, locate_event
from .kinematics import DEFAULT_DIFF_HALF_WINDOW
from .model import ApparatusSpec


@dataclass(frozen=True)
class VibrationItem:
    sigma_v_pre: float
    sigma_v_post: float
    sigma_a: float
    sigma_F: float


@dataclass(frozen=True)
class MassItem:
    delta_m: float
    delta_F_at_Fmax: float


@dataclass(frozen=True)
class AlignmentItem:
    theta: float
    relative_v_error: float


@dataclass(frozen=True)
class FrequencyItem:
    delta_f: float
    delta_v: float
    delta_F: float


@dataclass(frozen=True)
class FrictionItem:
    v_ref: float
    F_af_at_vref: float


@dataclass(frozen=True)
class UncertaintyBudget:
    u1_vibration: VibrationItem
    u2_mass: MassItem
    u3_alignment: AlignmentItem
    u4_frequency: FrequencyItem
    u5_friction: FrictionItem
    f_max: float
    combined_sigma_F: float
    combined_relative: float


def bearing_friction(v: float, coefficient: float) -> float:
    """Bearing drag force, linear and odd in the velocity."""
    return coefficient * v


def velocity_jitter(trace: MotionTrace, n: int = 20,
                    guard_windows: int = 1,
                    noise_floor: float = DEFAULT_NOISE_FLOOR) -> tuple[float, float]:
    """Sample standard deviation of the velocity in both free-flight segments.

    Uses the ``n`` windows right before the event origin and the ``n``
    windows starting one guard window after the force decays back below
    the origin threshold.
    """
    bounds, rez = locate_event(trace, noise_floor)
    if bounds.end_index is None:
        raise AnalysisError("record ends before the force decays; no post-event segment")
    if bounds.origin_index < n:
        raise AnalysisError(f"need {n} pre-event windows, have {bounds.origin_index}")
    post_start = bounds.end_index + guard_windows
    if post_start + n > len(rez):
        raise AnalysisError(f"need {n} post-event windows, have {len(rez) - post_start}")
    pre = rez.v[bounds.origin_index - n:bounds.origin_index]
    post = rez.v[post_start:post_start + n]
    return float(np.std(pre, ddof=1)), float(np.std(post, ddof=1))


def evaluate_budget(trace: MotionTrace, apparatus: ApparatusSpec,
                    n: int = 20,
                    half_window: int | None = None,
                    delta_m: float = 1e-5,
                    theta: float = 1e-3,
                    delta_f: float = 10.0,
                    v_ref: float = 0.06,
                    guard_windows: int = 1,
                    noise_floor: float = DEFAULT_NOISE_FLOOR) -> UncertaintyBudget:
    """Assemble the five-item force-uncertainty ledger for one trace.

    ``half_window`` defaults to the differentiation half-window recorded
    in the trace metadata so the propagation matches the analysis that
    produced the trace.
    """
    if half_window is None:
        half_window = int(trace.meta.get("diff_half_window", DEFAULT_DIFF_HALF_WINDOW))
    window = trace.dt
    span = 2.0 * half_window * window

    sigma_pre, sigma_post = velocity_jitter(trace, n, guard_windows, noise_floor)
    sigma_v = max(sigma_pre, sigma_post)
    sigma_a = sigma_v * math.sqrt(2.0) / span
    mass = apparatus.moving_mass
    u1 = VibrationItem(sigma_v_pre=sigma_pre, sigma_v_post=sigma_post,
                       sigma_a=sigma_a, sigma_F=mass * sigma_a)

    f_max = float(np.abs(trace.F).max())
    u2 = MassItem(delta_m=delta_m, delta_F_at_Fmax=(delta_m / mass) * f_max)

    u3 = AlignmentItem(theta=theta, relative_v_error=1.0 - math.cos(theta))

    delta_v = apparatus.wavelength_air * delta_f / 2.0
    u4 = FrequencyItem(delta_f=delta_f, delta_v=delta_v,
                       delta_F=mass * delta_v * math.sqrt(2.0) / span)

    u5 = FrictionItem(v_ref=v_ref,
                      F_af_at_vref=bearing_friction(v_ref, apparatus.bearing_coefficient))

    combined = math.sqrt(u1.sigma_F**2 + u2.delta_F_at_Fmax**2
                         + u4.delta_F**2 + u5.F_af_at_vref**2)
    return UncertaintyBudget(
        u1_vibration=u1, u2_mass=u2, u3_alignment=u3, u4_frequency=u4, u5_friction=u5,
        f_max=f_max, combined_sigma_F=combined,
        combined_relative=combined / f_max if f_max else 0.0,
    )


def render_budget_table(budget: UncertaintyBudget) -> str:
    """Human-readable table: one row per item with its share of the combined figure."""
    combined = budget.combined_sigma_F

    def share(value: float) -> str:
        return f"{100.0 * value / combined:6.2f}%" if combined else "   n/a"

    rows = [
        ("U1 vibration", budget.u1_vibration.sigma_F, "N", share(budget.u1_vibration.sigma_F)),
        ("U2 mass calibration", budget.u2_mass.delta_F_at_Fmax, "N", share(budget.u2_mass.delta_F_at_Fmax)),
        ("U3 alignment", budget.u3_alignment.relative_v_error, "rel", "  excl."),
        ("U4 frequency stability", budget.u4_frequency.delta_F, "N", share(budget.u4_frequency.delta_F)),
        ("U5 bearing friction", budget.u5_friction.F_af_at_vref, "N", share(budget.u5_friction.F_af_at_vref)),
    ]
    lines = [f"{'item':24s} {'value':>12s} {'unit':>5s} {'of combined':>12s}"]
    for name, value, unit, pct in rows:
        lines.append(f"{name:24s} {value:12.4e} {unit:>5s} {pct:>12s}")
    lines.append(
        f"{'combined (rss)':24s} {combined:12.4e} {'N':>5s} "
        f"{100.0 * budget.combined_relative:11.3f}% of |F_max| = {budget.f_max:.3f} N"
    )
    return "\n".join(lines)
