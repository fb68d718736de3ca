"""File codecs: raw waveforms with JSON sidecars, CSV traces, JSON results.

All formats are bit-exact across platforms: raw records are signed
8-bit little-endian bytes, CSVs carry shortest round-trip decimal
representations with LF line endings, and JSON files are UTF-8.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .dynamics import MotionTrace
from .errors import ConfigError
from .events import EventSummary
from .kvfit import KVFit
from .synth import Waveform
from .uncertainty import UncertaintyBudget
from .zfm import FrequencySeries

TRACE_HEADER = ["t_s", "v_mps", "x_m", "a_mps2", "F_N"]
FREQUENCY_HEADER = ["t_mid_s", "f_hz"]
RESIDUAL_HEADER = ["t_s", "sigma_mea_pa", "sigma_cal_pa", "residual_pa"]


def _jsonify(value):
    if isinstance(value, dict):
        return {key: _jsonify(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(item) for item in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [_jsonify(item) for item in value]
    return value


def write_json(data: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(_jsonify(data), indent=2) + "\n", encoding="utf-8")


def read_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def write_csv(path: str | Path, header: list[str], columns: list[np.ndarray]) -> None:
    """Column-oriented CSV with full-precision decimals and LF endings."""
    n = len(columns[0])
    if any(len(col) != n for col in columns):
        raise ConfigError("CSV columns must share one length")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(header) + "\n")
        for row in zip(*columns):
            handle.write(",".join(repr(float(value)) for value in row) + "\n")


def read_csv_columns(path: str | Path, expected_header: list[str]) -> list[np.ndarray]:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip().split(",")
        if header != expected_header:
            raise ConfigError(f"{path}: header {header} != expected {expected_header}")
        rows = [line.strip().split(",") for line in handle if line.strip()]
    if not rows:
        return [np.empty(0) for _ in expected_header]
    data = np.array(rows, dtype=np.float64)
    return [data[:, i] for i in range(len(expected_header))]


# -- raw waveform records ----------------------------------------------------

def write_waveform(waveform: Waveform, raw_path: str | Path,
                   seed: int = 0, config_digest: str = "") -> None:
    """Raw signed 8-bit bytes plus a JSON sidecar next to them."""
    if waveform.codes.dtype != np.int8:
        raise ConfigError("raw records store 8-bit codes only")
    raw_path = Path(raw_path)
    waveform.codes.tofile(raw_path)
    sidecar = {
        "sample_rate": waveform.sample_rate,
        "channel": waveform.channel,
        "trigger_index": waveform.trigger_index,
        "seed": seed,
        "config_hash": config_digest,
    }
    write_json(sidecar, raw_path.with_suffix(raw_path.suffix + ".json"))


def read_waveform(raw_path: str | Path) -> Waveform:
    raw_path = Path(raw_path)
    sidecar_path = raw_path.with_suffix(raw_path.suffix + ".json")
    if not sidecar_path.exists():
        raise ConfigError(f"missing sidecar {sidecar_path}")
    sidecar = read_json(sidecar_path)
    codes = np.fromfile(raw_path, dtype=np.int8)
    return Waveform(
        codes=codes,
        sample_rate=float(sidecar["sample_rate"]),
        channel=sidecar["channel"],
        trigger_index=int(sidecar["trigger_index"]),
        meta={"seed": sidecar.get("seed"), "config_hash": sidecar.get("config_hash")},
    )


# -- traces and series -------------------------------------------------------

def write_trace_csv(trace: MotionTrace, path: str | Path) -> None:
    write_csv(path, TRACE_HEADER, [trace.t, trace.v, trace.x, trace.a, trace.F])


def read_trace_csv(path: str | Path) -> MotionTrace:
    t, v, x, a, force = read_csv_columns(path, TRACE_HEADER)
    return MotionTrace(t=t, v=v, x=x, a=a, F=force, meta={"source": str(path)})


def write_frequency_csv(series: FrequencySeries, path: str | Path) -> None:
    write_csv(path, FREQUENCY_HEADER, [series.t_mid, series.f])


def read_frequency_csv(path: str | Path, window_periods: int) -> FrequencySeries:
    t_mid, f = read_csv_columns(path, FREQUENCY_HEADER)
    return FrequencySeries(t_mid=t_mid, f=f, window_periods=window_periods)


# -- scalar results ----------------------------------------------------------

def summary_to_dict(summary: EventSummary) -> dict:
    return asdict(summary)


def write_summary_json(summary: EventSummary, path: str | Path) -> None:
    write_json(summary_to_dict(summary), path)


def kvfit_to_dict(fit: KVFit) -> dict:
    return {
        "c_pa": fit.c,
        "e_pa": fit.e_modulus,
        "eta_pa_s": fit.eta,
        "r_squared": fit.r_squared,
        "n_samples": fit.n_samples,
        "residual_rms_pa": fit.residual_rms,
    }


def write_kvfit_json(fit: KVFit, path: str | Path) -> None:
    write_json(kvfit_to_dict(fit), path)


def read_kvfit_json(path: str | Path) -> KVFit:
    data = read_json(path)
    return KVFit(c=data["c_pa"], e_modulus=data["e_pa"], eta=data["eta_pa_s"],
                 r_squared=data["r_squared"], n_samples=data["n_samples"],
                 residual_rms=data["residual_rms_pa"])


def write_budget_json(budget: UncertaintyBudget, path: str | Path) -> None:
    write_json(asdict(budget), path)


def write_residual_csv(row: dict, path: str | Path) -> None:
    """Per-run regression residual file from a fit-diagnostics row."""
    write_csv(path, RESIDUAL_HEADER,
              [row["t"], row["sigma_mea"], row["sigma_cal"], row["residual"]])
