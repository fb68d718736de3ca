"""Zero-crossing frequency estimation.

A Schmitt trigger walks the quantized record: it arms when the signal
drops to or below ``-hysteresis`` and fires on the next sample at or
above ``+hysteresis``, which suppresses noise-induced double counts.
Each fired crossing is timed by linearly interpolating the zero between
the arming and firing samples.  Frequencies come from least-squares
straight-line fits of crossing time against crossing index over windows
of N periods (N+1 rising crossings), so every crossing in the window
contributes to the estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import AnalysisError, ConfigError
from .synth import Waveform


@dataclass
class CrossingList:
    """Strictly increasing rising-crossing instants, in seconds from record start."""

    times: np.ndarray
    rising_only: bool = True
    sample_rate: float = 0.0

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64)
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ConfigError("crossing times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    def validate_spacing(self, f_nominal: float) -> None:
        """Require consecutive spacings inside (0.25/f_nominal, 4/f_nominal)."""
        if len(self.times) < 2:
            return
        gaps = np.diff(self.times)
        lo, hi = 0.25 / f_nominal, 4.0 / f_nominal
        if gaps.min() <= lo or gaps.max() >= hi:
            raise AnalysisError(
                f"crossing spacing outside ({lo:g}, {hi:g}) s for nominal "
                f"{f_nominal:g} Hz: min {gaps.min():g}, max {gaps.max():g}"
            )


@dataclass
class FrequencySeries:
    """Per-window frequency estimates at window-center times."""

    t_mid: np.ndarray
    f: np.ndarray
    window_periods: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.t_mid = np.asarray(self.t_mid, dtype=np.float64)
        self.f = np.asarray(self.f, dtype=np.float64)
        if len(self.t_mid) != len(self.f):
            raise ConfigError("t_mid and f must share one length")
        if len(self.t_mid) > 1 and np.any(np.diff(self.t_mid) <= 0):
            raise ConfigError("window centers must be strictly increasing")
        if len(self.f) and np.any(self.f <= 0):
            raise ConfigError("window frequencies must be positive")

    def __len__(self) -> int:
        return len(self.f)


def detect_zero_crossings(waveform: Waveform, hysteresis: float = 8.0) -> CrossingList:
    """Find rising zero crossings of a quantized record.

    ``hysteresis`` is in code units of the record's own bit depth.  An
    empty result is permitted (flat or too-quiet record).
    """
    if len(waveform.codes) == 0:
        raise AnalysisError("cannot detect crossings of an empty waveform")
    s = waveform.codes.astype(np.float64)
    h = float(abs(hysteresis))
    out_of_band = np.flatnonzero((s <= -h) | (s >= h))
    if len(out_of_band) < 2:
        return CrossingList(times=np.empty(0), sample_rate=waveform.sample_rate)

    high = s[out_of_band] >= h
    fired = high[1:] & ~high[:-1]
    arm = out_of_band[:-1][fired]
    fire = out_of_band[1:][fired]
    s_arm = s[arm]
    s_fire = s[fire]
    # the armed sample is <= -h and the firing one >= +h (or < 0 vs >= 0 when
    # h = 0), so the span is strictly positive
    frac = -s_arm / (s_fire - s_arm)
    times = (arm + frac * (fire - arm)) / waveform.sample_rate
    return CrossingList(times=times, sample_rate=waveform.sample_rate)


def estimate_frequency_series(crossings: CrossingList, n_periods: int,
                              stride: int | None = None) -> FrequencySeries:
    """Window the crossing list and fit one frequency per window.

    Windows hold ``n_periods + 1`` consecutive crossings; adjacent
    windows share their boundary crossing (stride ``n_periods``), so the
    output cadence is one window per N periods.  A smaller ``stride``
    yields overlapped windows.

    Within a window the crossing times are fit as t_k ~ alpha + beta*k
    by least squares; the window frequency is 1/beta and the center time
    alpha + beta*N/2 (the mean crossing time for the symmetric index
    grid used here).
    """
    if n_periods < 1:
        raise ConfigError(f"n_periods must be >= 1, got {n_periods}")
    if stride is None:
        stride = n_periods
    if not (1 <= stride <= n_periods):
        raise ConfigError(f"stride must be in [1, {n_periods}], got {stride}")
    times = crossings.times
    if len(times) < n_periods + 1:
        raise AnalysisError(
            f"need at least {n_periods + 1} crossings for one window, got {len(times)}"
        )

    windows = sliding_window_view(times, n_periods + 1)[::stride]
    index = np.arange(n_periods + 1, dtype=np.float64)
    index -= index.mean()
    denom = np.dot(index, index)
    t_centered = windows - windows.mean(axis=1, keepdims=True)
    beta = t_centered @ index / denom
    if np.any(beta <= 0):
        raise AnalysisError("non-increasing window fit; crossing list is corrupt")
    freq = 1.0 / beta
    t_mid = windows.mean(axis=1)
    return FrequencySeries(t_mid=t_mid, f=freq, window_periods=n_periods,
                           meta={"stride": stride, "n_crossings": len(times)})
