"""From beat-frequency series to a full motion trace.

Velocity follows the Doppler inversion v = wavelength * (f_rest - f_beat) / 2,
displacement is the cumulative trapezoid of velocity, acceleration is a
symmetric finite difference over +-k windows, and force is mass times
acceleration.  Estimation windows hold a fixed number of beat periods,
so their centers drift apart where the beat slows; the series is
interpolated onto a uniform grid at the nominal window pitch before
integration and differentiation.
"""

from __future__ import annotations

import numpy as np

from .dynamics import GRID_RTOL, MotionTrace
from .errors import AnalysisError, ConfigError
from .model import ApparatusSpec
from .zfm import FrequencySeries

DEFAULT_DIFF_HALF_WINDOW = 3


def beat_to_velocity(series: FrequencySeries, f_rest: float,
                     wavelength: float) -> tuple[np.ndarray, np.ndarray]:
    """Map a beat-frequency series to target velocity; timestamps carried over.

    Doppler shift is the negative beat excursion, -(f_beat - f_rest), and
    velocity is wavelength * shift / 2; motion away from the bench lowers
    the beat, so this recovers +v under the synthesis convention.
    """
    if not (f_rest > 0):
        raise ConfigError(f"f_rest must be > 0, got {f_rest}")
    velocity = wavelength * (-(series.f - f_rest)) / 2.0
    return series.t_mid.copy(), velocity


def _require_uniform(t: np.ndarray) -> float:
    steps = np.diff(t)
    if len(steps) == 0:
        return 0.0
    step = steps.mean()
    if step <= 0 or np.any(np.abs(steps - step) > GRID_RTOL * step + 1e-300):
        raise AnalysisError("series requires a uniform time grid")
    return float(step)


def integrate_velocity(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cumulative trapezoidal displacement with x[0] = 0."""
    t = np.asarray(t, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if len(t) != len(v):
        raise ConfigError("t and v must share one length")
    if len(v) <= 1:
        return np.zeros(len(v))
    dt = _require_uniform(t)
    x = np.empty(len(v))
    x[0] = 0.0
    np.cumsum(0.5 * (v[1:] + v[:-1]) * dt, out=x[1:])
    return x


def differentiate_velocity(v: np.ndarray, dt: float,
                           half_window: int = DEFAULT_DIFF_HALF_WINDOW) -> np.ndarray:
    """Central difference a[i] = (v[i+k] - v[i-k]) / (2 k dt).

    Endpoints use one-sided differences of the same 2k span, so the
    output is exact for affine velocity everywhere.
    """
    v = np.asarray(v, dtype=np.float64)
    k = int(half_window)
    if k < 1:
        raise ConfigError(f"half_window must be >= 1, got {half_window}")
    n = len(v)
    if n <= 2 * k:
        raise AnalysisError(f"series of {n} points too short for half-window {k}")
    span = 2.0 * k * dt
    a = np.empty(n)
    a[k:n - k] = (v[2 * k:] - v[:n - 2 * k]) / span
    # one-sided same-span differences at the ends, anchored inside the array
    head = np.minimum(np.arange(k), n - 1 - 2 * k)
    a[:k] = (v[head + 2 * k] - v[head]) / span
    tail = np.maximum(np.arange(n - k, n), 2 * k)
    a[n - k:] = (v[tail] - v[tail - 2 * k]) / span
    return a


def inertial_force(a: np.ndarray, mass: float) -> np.ndarray:
    """Force on the moving mass, F = m * a; the wire sees -F."""
    return mass * np.asarray(a, dtype=np.float64)


def assemble_trace(t: np.ndarray, v: np.ndarray, mass: float,
                   half_window: int = DEFAULT_DIFF_HALF_WINDOW,
                   meta: dict | None = None) -> MotionTrace:
    """Build the aligned trace (x, a, F) from a uniformly sampled velocity."""
    x = integrate_velocity(t, v)
    dt = float(t[1] - t[0])
    a = differentiate_velocity(v, dt, half_window)
    F = inertial_force(a, mass)
    full_meta = {"diff_half_window": half_window, "window_s": dt}
    if meta:
        full_meta.update(meta)
    return MotionTrace(t=np.asarray(t, dtype=np.float64), v=np.asarray(v, dtype=np.float64),
                       x=x, a=a, F=F, meta=full_meta)


def build_motion_trace(beat: FrequencySeries, f_rest: float, apparatus: ApparatusSpec,
                       half_window: int = DEFAULT_DIFF_HALF_WINDOW) -> MotionTrace:
    """Compose velocity, displacement, acceleration and force on one grid.

    The uniform grid pitch is the nominal window duration
    ``window_periods / f_rest``; velocity is linearly interpolated from
    the window centers onto it.
    """
    t_w, v_w = beat_to_velocity(beat, f_rest, apparatus.wavelength_air)
    if len(t_w) < 2:
        raise AnalysisError("need at least two windows to build a motion trace")
    pitch = beat.window_periods / f_rest
    n = int(np.floor((t_w[-1] - t_w[0]) / pitch)) + 1
    t_u = t_w[0] + np.arange(n) * pitch
    v_u = np.interp(t_u, t_w, v_w)
    meta = {
        "source": "build_motion_trace",
        "f_rest_hz": f_rest,
        "zfm_periods": beat.window_periods,
    }
    return assemble_trace(t_u, v_u, apparatus.moving_mass, half_window, meta)
