"""Kelvin-Voigt coefficient estimation by pooled linear least squares.

The stress model is sigma = c + E*strain + eta*strain_rate.  E and eta
differ by ~4 orders of magnitude at wire scales, so the strain and
strain-rate columns are rescaled to unit maximum before the orthogonal
factorization and the coefficients unscaled afterward; raw normal
equations at these magnitudes lose most of the mantissa.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import FitError
from .events import StressStrainTrace

logger = logging.getLogger(__name__)

#: condition-number ceiling for the scaled design matrix
MAX_CONDITION = 1e10


@dataclass
class KVFit:
    """Fitted constitutive coefficients with regression quality measures."""

    c: float
    e_modulus: float
    eta: float
    r_squared: float
    n_samples: int
    residual_rms: float

    def __post_init__(self) -> None:
        if not (-1e-9 <= self.r_squared <= 1.0 + 1e-9):
            raise FitError(f"determination coefficient {self.r_squared} outside [0, 1]")
        self.r_squared = min(max(self.r_squared, 0.0), 1.0)
        if self.n_samples < 4:
            raise FitError(f"fit needs at least 4 samples, got {self.n_samples}")


@dataclass
class LoadingSamples:
    """Pooled (stress, strain, strain rate) rows with per-row run provenance."""

    stress: np.ndarray
    strain: np.ndarray
    strain_rate: np.ndarray
    run_ids: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.stress = np.asarray(self.stress, dtype=np.float64)
        self.strain = np.asarray(self.strain, dtype=np.float64)
        self.strain_rate = np.asarray(self.strain_rate, dtype=np.float64)
        if self.run_ids is None:
            self.run_ids = np.zeros(len(self.stress), dtype=np.int64)
        self.run_ids = np.asarray(self.run_ids)
        n = len(self.stress)
        if not (len(self.strain) == len(self.strain_rate) == len(self.run_ids) == n):
            raise FitError("sample columns must share one length")

    def __len__(self) -> int:
        return len(self.stress)


def select_loading_samples(runs: list[StressStrainTrace | None],
                           include_unloading: bool = False,
                           onset_guard: int = 0) -> LoadingSamples:
    """Pool the loading-limb samples of re-zeroed stress/strain traces.

    Per run the limb spans the event origin (t = 0 on a re-zeroed trace)
    up to the point of maximum strain; ``include_unloading`` extends it
    to the end of the event instead.  ``onset_guard`` drops that many
    windows right after the origin, where the finite-difference stencil
    of the force still straddles the contact onset and the stress does
    not reflect the constitutive law yet.  Runs without a detected event
    (``None`` entries) are skipped with a warning.
    """
    stress, strain, rate, ids = [], [], [], []
    for run_index, trace in enumerate(runs):
        if trace is None:
            logger.warning("run %d has no detected event; excluded from pooling", run_index)
            continue
        start = int(np.searchsorted(trace.t, 0.0)) + onset_guard
        peak = int(np.argmax(trace.strain))
        if include_unloading:
            sigma_peak = np.abs(trace.stress).max()
            tail = np.flatnonzero(np.abs(trace.stress[peak:]) < 1e-3 * sigma_peak)
            stop = peak + int(tail[0]) if len(tail) else len(trace.stress) - 1
        else:
            stop = peak
        if stop < start:
            logger.warning("run %d has an empty loading limb; excluded", run_index)
            continue
        sel = slice(start, stop + 1)
        stress.append(trace.stress[sel])
        strain.append(trace.strain[sel])
        rate.append(trace.strain_rate[sel])
        ids.append(np.full(stop + 1 - start, trace.meta.get("run_id", run_index), dtype=np.int64))
    if not stress:
        raise FitError("no loading samples selected from any run")
    return LoadingSamples(stress=np.concatenate(stress), strain=np.concatenate(strain),
                          strain_rate=np.concatenate(rate), run_ids=np.concatenate(ids))


def fit_kelvin_voigt(samples: LoadingSamples) -> KVFit:
    """Ordinary least squares on the scaled [1, strain, strain_rate] design."""
    n = len(samples)
    if n < 4:
        raise FitError(f"fit needs at least 4 samples, got {n}")
    s_eps = np.abs(samples.strain).max()
    s_rate = np.abs(samples.strain_rate).max()
    if s_eps == 0.0 or s_rate == 0.0:
        raise FitError("degenerate design: a regressor column is identically zero")

    design = np.column_stack([
        np.ones(n),
        samples.strain / s_eps,
        samples.strain_rate / s_rate,
    ])
    condition = np.linalg.cond(design)
    if condition > MAX_CONDITION:
        raise FitError(f"rank-deficient design: condition number {condition:.3g}")

    coef, _, _, _ = np.linalg.lstsq(design, samples.stress, rcond=None)
    predicted = design @ coef
    residual = samples.stress - predicted
    ss_res = float(residual @ residual)
    centered = samples.stress - samples.stress.mean()
    ss_tot = float(centered @ centered)
    if ss_tot == 0.0:
        # constant stress: a perfect intercept-only fit up to roundoff
        scale = max(np.abs(samples.stress).max(), 1e-300)
        r_squared = 1.0 if np.sqrt(ss_res / n) <= 1e-9 * scale else 0.0
    else:
        r_squared = 1.0 - ss_res / ss_tot
    return KVFit(
        c=float(coef[0]),
        e_modulus=float(coef[1] / s_eps),
        eta=float(coef[2] / s_rate),
        r_squared=r_squared,
        n_samples=n,
        residual_rms=float(np.sqrt(ss_res / n)),
    )


def predict_stress(fit: KVFit, strain, strain_rate):
    """Constitutive prediction sigma = c + E*strain + eta*strain_rate."""
    return fit.c + fit.e_modulus * np.asarray(strain) + fit.eta * np.asarray(strain_rate)


def fit_diagnostics(fit: KVFit, runs: list[StressStrainTrace]) -> list[dict]:
    """Per-run residual report over each run's event.

    Returns one row per run: rms of measured-minus-predicted stress, its
    percentage of that run's peak stress magnitude, and the aligned
    arrays for writing a residual file.
    """
    rows = []
    for run_index, trace in enumerate(runs):
        if trace is None:
            continue
        start = int(np.searchsorted(trace.t, 0.0))
        sigma_peak = np.abs(trace.stress).max()
        i_peak = int(np.argmin(trace.stress))
        tail = np.flatnonzero(np.abs(trace.stress[i_peak:]) < 1e-3 * sigma_peak)
        stop = i_peak + int(tail[0]) if len(tail) else len(trace.stress) - 1
        sel = slice(start, stop + 1)
        measured = trace.stress[sel]
        predicted = predict_stress(fit, trace.strain[sel], trace.strain_rate[sel])
        residual = measured - predicted
        rms = float(np.sqrt(np.mean(residual**2))) if len(residual) else 0.0
        rows.append({
            "run_id": trace.meta.get("run_id", run_index),
            "rms_pa": rms,
            "pct_of_max": 100.0 * rms / sigma_peak if sigma_peak else 0.0,
            "n": int(len(residual)),
            "t": trace.t[sel],
            "sigma_mea": measured,
            "sigma_cal": predicted,
            "residual": residual,
        })
    return rows
