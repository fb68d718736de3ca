"""Event extraction: origin, peak force, FWHM, stress/strain and energies.

The event origin follows a threshold rule: 0.1 percent of the peak force
magnitude, traced back from the peak to the first sample below it.  The
finite-difference span of the force reconstruction smears the contact
onset over several windows, which would park that sample well before
the wire actually goes taut; by default the origin is therefore refined
to the zero-force intercept of the straight loading portion of the
force-displacement curve, which pins the taut point to a fraction of a
window.  The refinement can be disabled to get the bare threshold rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import MotionTrace
from .errors import AnalysisError
from .model import SpecimenSpec, cross_section_area, wire_volume

#: assumed force noise floor (N); an event must exceed ten times this
DEFAULT_NOISE_FLOOR = 1e-3
#: force-magnitude band (fractions of the peak) used for origin refinement
REFINE_BAND = (0.2, 0.9)
THRESHOLD_FRACTION = 1e-3


@dataclass
class EventBounds:
    """Indices delimiting one tensile event on a (re-zeroed) trace."""

    origin_index: int
    peak_force_index: int
    end_index: int | None
    threshold: float
    origin_time: float
    origin_displacement: float
    refined: bool


@dataclass
class StressStrainTrace:
    """Stress, strain and strain rate of the wire, aligned with the trace grid."""

    t: np.ndarray
    stress: np.ndarray
    strain: np.ndarray
    strain_rate: np.ndarray
    volume: float
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.t)


@dataclass
class EventSummary:
    """Scalar results of one run (signed per the lab-axis convention)."""

    F_max: float
    x_max: float
    t_Fmax: float
    T_FWHM: float
    v1: float
    v2: float
    delta_KE: float
    work: float
    U_max: float
    spring_constant: float
    strain_max: float
    stress_max: float

    def __post_init__(self) -> None:
        if not (self.T_FWHM > 0):
            raise AnalysisError(f"T_FWHM must be positive, got {self.T_FWHM}")
        if not (self.F_max < 0):
            raise AnalysisError(f"a tensile event needs F_max < 0, got {self.F_max}")


def locate_event(trace: MotionTrace, noise_floor: float = DEFAULT_NOISE_FLOOR,
                 refine: bool = True) -> tuple[EventBounds, MotionTrace]:
    """Find the tensile event and re-zero time and displacement at its origin."""
    F = trace.F
    peak = int(np.argmin(F))
    f_peak = float(F[peak])
    if f_peak >= 0 or abs(f_peak) < 10.0 * noise_floor:
        raise AnalysisError(
            f"no tensile event: peak force {f_peak:g} N under the "
            f"{10 * noise_floor:g} N floor"
        )
    threshold = THRESHOLD_FRACTION * abs(f_peak)

    j = peak
    while j > 0 and abs(F[j]) >= threshold:
        j -= 1
    if abs(F[j]) >= threshold:
        raise AnalysisError("record starts inside the event; no pre-event sample")

    t0 = float(trace.t[j])
    x0 = float(trace.x[j])
    origin = j
    refined = False
    if refine:
        result = _refine_origin(trace, j, peak)
        if result is not None:
            t0, x0 = result
            origin = int(np.searchsorted(trace.t, t0))
            refined = True

    after = np.flatnonzero(np.abs(F[peak + 1:]) < threshold)
    end = int(peak + 1 + after[0]) if len(after) else None

    rezeroed = MotionTrace(
        t=trace.t - t0, v=trace.v, x=trace.x - x0, a=trace.a, F=trace.F,
        meta={**trace.meta, "origin_time": t0, "origin_displacement": x0,
              "event_threshold": threshold, "origin_refined": refined},
    )
    bounds = EventBounds(origin_index=origin, peak_force_index=peak, end_index=end,
                         threshold=threshold, origin_time=t0, origin_displacement=x0,
                         refined=refined)
    return bounds, rezeroed


def _refine_origin(trace: MotionTrace, coarse: int, peak: int) -> tuple[float, float] | None:
    """Zero-force intercept of the straight loading portion of F vs x."""
    lo, hi = REFINE_BAND
    segment = slice(coarse, peak + 1)
    F = trace.F[segment]
    x = trace.x[segment]
    t = trace.t[segment]
    f_peak = abs(trace.F[peak])
    in_band = (np.abs(F) >= lo * f_peak) & (np.abs(F) <= hi * f_peak)
    if in_band.sum() < 3:
        return None
    slope, intercept = np.polyfit(x[in_band], F[in_band], 1)
    if slope >= 0:
        return None
    x_taut = -intercept / slope
    if not (x[0] <= x_taut <= x[-1]):
        return None
    t_taut = float(np.interp(x_taut, x, t))
    return t_taut, float(x_taut)


def detect_event_origin(trace: MotionTrace, noise_floor: float = DEFAULT_NOISE_FLOOR,
                        refine: bool = True) -> tuple[int, MotionTrace]:
    """Origin index plus the trace with time and displacement re-zeroed there."""
    bounds, rezeroed = locate_event(trace, noise_floor, refine)
    return bounds.origin_index, rezeroed


def fwhm(trace: MotionTrace) -> float:
    """Temporal full width of the force pulse at half its peak magnitude.

    Each half-level crossing is located by linear interpolation between
    the adjacent samples bracketing it.
    """
    F = trace.F
    t = trace.t
    peak = int(np.argmin(F))
    half = F[peak] / 2.0

    left = None
    for i in range(peak, 0, -1):
        if F[i - 1] > half >= F[i]:
            frac = (half - F[i - 1]) / (F[i] - F[i - 1])
            left = t[i - 1] + frac * (t[i] - t[i - 1])
            break
    right = None
    for i in range(peak, len(F) - 1):
        if F[i] <= half < F[i + 1]:
            frac = (half - F[i]) / (F[i + 1] - F[i])
            right = t[i] + frac * (t[i + 1] - t[i])
            break
    if left is None or right is None:
        raise AnalysisError("force pulse does not cross its half level on both sides")
    return float(right - left)


def stress_strain_trace(trace: MotionTrace, specimen: SpecimenSpec) -> StressStrainTrace:
    """Wire stress (force over area, negative in tension), strain and strain rate."""
    area = cross_section_area(specimen)
    length = specimen.natural_length
    return StressStrainTrace(
        t=trace.t.copy(),
        stress=trace.F / area,
        strain=trace.x / length,
        strain_rate=trace.v / length,
        volume=wire_volume(specimen),
        meta=dict(trace.meta),
    )


def event_summary(trace: MotionTrace, specimen: SpecimenSpec, mass: float,
                  pre_n: int = 20, guard_windows: int = 1,
                  noise_floor: float = DEFAULT_NOISE_FLOOR,
                  refine: bool = True) -> EventSummary:
    """Scalar event results: peak force, FWHM, in/out velocities and energies.

    ``v1`` averages the ``pre_n`` velocities just before the origin and
    ``v2`` the ``pre_n`` velocities starting one guard window after the
    force has decayed back below the origin threshold.
    """
    bounds, rez = locate_event(trace, noise_floor, refine)
    origin, peak, end = bounds.origin_index, bounds.peak_force_index, bounds.end_index
    if end is None:
        raise AnalysisError("record ends before the force decays; no post-event flight")
    if origin < pre_n:
        raise AnalysisError(
            f"need {pre_n} pre-event windows, record has {origin} before the origin"
        )
    post_start = end + guard_windows
    if post_start + pre_n > len(rez):
        raise AnalysisError(
            f"need {pre_n} post-event windows, record has {len(rez) - post_start}"
        )

    v1 = float(np.mean(rez.v[origin - pre_n:origin]))
    v2 = float(np.mean(rez.v[post_start:post_start + pre_n]))
    delta_ke = 0.5 * mass * (v1 * v1 - v2 * v2)

    event = slice(origin, end + 1)
    x_ev = rez.x[event]
    F_ev = rez.F[event]
    work = float(np.trapezoid(F_ev, x_ev))

    i_peak_strain = int(np.argmax(x_ev))
    x_max = float(x_ev[i_peak_strain])
    if x_max <= 0:
        raise AnalysisError("event shows no positive stretch")
    u_max = 0.5 * F_ev[i_peak_strain] * x_ev[i_peak_strain]

    area = cross_section_area(specimen)
    length = specimen.natural_length
    f_max = float(rez.F[peak])
    summary = EventSummary(
        F_max=f_max,
        x_max=x_max,
        t_Fmax=float(rez.t[peak]),
        T_FWHM=fwhm(rez),
        v1=v1,
        v2=v2,
        delta_KE=delta_ke,
        work=work,
        U_max=float(u_max),
        spring_constant=f_max / x_max,
        strain_max=x_max / length,
        stress_max=f_max / area,
    )
    if abs(summary.work) > 0.5 * mass * v1 * v1 * (1.0 + 1e-9) and v1 != 0.0:
        raise AnalysisError(
            f"work magnitude {abs(summary.work):g} J exceeds the incoming "
            f"kinetic energy {0.5 * mass * v1 * v1:g} J"
        )
    return summary


def strain_energy(stress_strain: StressStrainTrace) -> np.ndarray:
    """Pointwise stored elastic energy, U = V * stress * strain / 2."""
    return 0.5 * stress_strain.volume * stress_strain.stress * stress_strain.strain
