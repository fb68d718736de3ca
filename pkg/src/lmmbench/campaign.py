"""Campaign runner and report emission.

A campaign maps a schedule of initial velocities onto one base config,
executes the runs independently (optionally on a process pool), and
leaves one subdirectory per run plus a campaign manifest.  The report
pass aggregates per-run scalars, refits the pooled constitutive model
from the stored trace files alone, and emits figure-data CSVs (and
rendered PNGs) for the standard bench plots.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .config import (CampaignConfig, RunConfig, campaign_config_to_dict, config_hash,
                     load_run_config, with_run_overrides)
from .errors import AnalysisError, ConfigError, FitError, SignalError
from .events import locate_event, strain_energy, stress_strain_trace
from .io import (read_json, read_trace_csv, write_csv, write_json, write_kvfit_json,
                 write_residual_csv)
from .kvfit import fit_diagnostics, fit_kelvin_voigt, select_loading_samples
from .pipeline import run_pipeline, write_run
from .uncertainty import evaluate_budget, render_budget_table

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
CAMPAIGN_MANIFEST = "campaign.json"
#: target ground-truth CSV pitch; simulator grids are thinned to about this
MOTION_CSV_PITCH = 2e-5

STATUS_COMPLETED = "completed"
STATUS_FAILED = "failed"


@dataclass
class RunManifest:
    """Per-run provenance: config digest, file map, outcome and timing."""

    config_hash: str
    files: dict[str, str]
    status: str
    timestamps: dict[str, float] = field(default_factory=dict)
    error: str | None = None


def run_seed(campaign_seed: int, run_index: int) -> int:
    """Per-run base seed; distinct campaigns never share channel streams."""
    return campaign_seed * 100003 + run_index


def _execute_run(run_dir: str, config: RunConfig, run_index: int) -> RunManifest:
    started = time.time()
    digest = config_hash(config)
    try:
        result = run_pipeline(config, run_id=run_index)
        stride = max(1, int(round(MOTION_CSV_PITCH / config.sim.dt)))
        files = write_run(result, run_dir, motion_stride=stride)
        manifest = RunManifest(config_hash=digest, files=files, status=STATUS_COMPLETED,
                               timestamps={"started": started, "finished": time.time()})
    except (AnalysisError, SignalError, FitError, ConfigError) as exc:
        logger.warning("run %d failed: %s", run_index, exc)
        manifest = RunManifest(config_hash=digest, files={}, status=STATUS_FAILED,
                               timestamps={"started": started, "finished": time.time()},
                               error=str(exc))
    write_json(asdict(manifest), Path(run_dir) / MANIFEST_NAME)
    return manifest


def run_campaign(campaign: CampaignConfig, out_dir: str | Path,
                 workers: int = 1) -> Path:
    """Execute every scheduled run into ``out_dir``; failures are recorded,
    not raised, and the campaign continues."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_json(campaign_config_to_dict(campaign), out / CAMPAIGN_MANIFEST)

    jobs = []
    for index, v0 in enumerate(campaign.v0_schedule):
        config = with_run_overrides(campaign.base, v0=v0,
                                    rng_seed=run_seed(campaign.seed, index))
        jobs.append((str(out / f"run_{index:03d}"), config, index))

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            statuses = list(pool.map(_execute_run_star, jobs))
    else:
        statuses = [_execute_run(*job) for job in jobs]

    summary = {
        "n_runs": campaign.n_runs,
        "seed": campaign.seed,
        "runs": [{"dir": f"run_{i:03d}", "status": manifest.status}
                 for i, manifest in enumerate(statuses)],
    }
    write_json(summary, out / "campaign_status.json")
    return out


def _execute_run_star(job: tuple[str, RunConfig, int]) -> RunManifest:
    return _execute_run(*job)


# ---------------------------------------------------------------------------
# report emission


def completed_run_dirs(campaign_dir: str | Path) -> list[Path]:
    root = Path(campaign_dir)
    dirs = []
    for run_dir in sorted(root.glob("run_*")):
        manifest_path = run_dir / MANIFEST_NAME
        if not manifest_path.exists():
            continue
        manifest = read_json(manifest_path)
        if manifest.get("status") == STATUS_COMPLETED:
            dirs.append(run_dir)
    return dirs


def _load_run(run_dir: Path) -> dict:
    config = load_run_config(run_dir / "config.json")
    summary = read_json(run_dir / "summary.json")
    trace = read_trace_csv(run_dir / "trace.csv")
    trace.meta["diff_half_window"] = config.analysis.diff_half_window
    trace.meta["run_id"] = int(run_dir.name.split("_")[-1])
    return {"dir": run_dir, "config": config, "summary": summary, "trace": trace}


def emit_report(campaign_dir: str | Path, out_dir: str | Path | None = None,
                figures: bool = True) -> Path:
    """Aggregate a campaign into tables, figure CSVs and rendered figures."""
    campaign_dir = Path(campaign_dir)
    run_dirs = completed_run_dirs(campaign_dir)
    if not run_dirs:
        raise AnalysisError(f"no completed runs under {campaign_dir}")
    out = Path(out_dir) if out_dir is not None else campaign_dir / "report"
    out.mkdir(parents=True, exist_ok=True)

    runs = [_load_run(run_dir) for run_dir in run_dirs]
    base_config = runs[0]["config"]
    specimen = base_config.sim.specimen
    mass = base_config.sim.apparatus.moving_mass

    # per-run scalar table
    rows = []
    for run in runs:
        summary = run["summary"]
        ke0 = 0.5 * mass * summary["v1"] ** 2
        rows.append({
            "run": run["trace"].meta["run_id"],
            "v0": run["config"].sim.v0,
            "F_max": summary["F_max"],
            "x_max": summary["x_max"],
            "T_FWHM": summary["T_FWHM"],
            "KE0": ke0,
            "delta_KE": summary["delta_KE"],
            "spring_constant": summary["spring_constant"],
        })
    write_csv(out / "runs.csv",
              ["run", "v0_mps", "F_max_N", "x_max_m", "T_FWHM_s", "KE0_J",
               "dKE_J", "spring_constant_N_per_m"],
              [np.array([r[k] for r in rows]) for k in
               ("run", "v0", "F_max", "x_max", "T_FWHM", "KE0", "delta_KE",
                "spring_constant")])

    # pooled constitutive fit, re-derived from stored traces alone
    stress_runs = []
    for run in runs:
        trace = run["trace"]
        ss = stress_strain_trace(trace, specimen)
        ss.meta["run_id"] = trace.meta["run_id"]
        stress_runs.append(ss)
    samples = select_loading_samples(
        stress_runs,
        include_unloading=base_config.analysis.include_unloading,
        onset_guard=base_config.analysis.onset_guard)
    fit = fit_kelvin_voigt(samples)
    write_kvfit_json(fit, out / "kvfit.json")
    diag_rows = fit_diagnostics(fit, stress_runs)
    for row in diag_rows:
        write_residual_csv(row, out / f"residual_run_{row['run_id']:03d}.csv")

    # uncertainty ledger of the strongest run
    strongest = min(runs, key=lambda run: run["summary"]["F_max"])
    budget = evaluate_budget(strongest["trace"], strongest["config"].sim.apparatus,
                             n=strongest["config"].analysis.pre_n,
                             noise_floor=strongest["config"].analysis.noise_floor)
    write_json(asdict(budget), out / "budget.json")
    (out / "budget.txt").write_text(render_budget_table(budget) + "\n", encoding="utf-8")

    figure_files = _emit_figure_data(out, runs, stress_runs, diag_rows)

    f_maxes = np.array([r["F_max"] for r in rows])
    springs = np.array([r["spring_constant"] for r in rows])
    fwhms = np.array([r["T_FWHM"] for r in rows])
    report = {
        "n_runs": len(rows),
        "runs": rows,
        "kv_fit": read_json(out / "kvfit.json"),
        "diagnostics": [{k: row[k] for k in ("run_id", "rms_pa", "pct_of_max", "n")}
                        for row in diag_rows],
        "budget_file": "budget.json",
        "aggregates": {
            "F_max_min": float(f_maxes.min()),
            "F_max_max": float(f_maxes.max()),
            "spring_constant_mean": float(springs.mean()),
            "spring_constant_cv": float(np.std(springs) / abs(springs.mean())),
            "T_FWHM_mean": float(fwhms.mean()),
            "T_FWHM_spread": float((fwhms.max() - fwhms.min()) / fwhms.mean()),
        },
        "figures": figure_files,
    }
    write_json(report, out / "report.json")

    if figures:
        from .figures import render_report_figures
        render_report_figures(out)
    return out


def _event_slice(trace) -> slice:
    bounds, _ = locate_event(trace, refine=False)
    end = bounds.end_index if bounds.end_index is not None else len(trace) - 1
    start = int(np.searchsorted(trace.t, 0.0))
    return slice(start, end + 1)


def _emit_figure_data(out: Path, runs: list[dict], stress_runs: list,
                      diag_rows: list[dict]) -> list[str]:
    """Figure-data CSVs: single-run cross plots, campaign overlays, residuals."""
    order = np.argsort([run["summary"]["F_max"] for run in runs])
    exemplar_pos = int(order[len(order) // 2])
    exemplar = runs[exemplar_pos]
    trace = exemplar["trace"]
    ss = stress_runs[exemplar_pos]
    ev = _event_slice(trace)

    files: list[str] = []

    def emit(name: str, header: list[str], columns: list[np.ndarray]) -> None:
        write_csv(out / name, header, columns)
        files.append(name)

    emit("fig3.csv", ["t_s", "v_mps", "x_m", "a_mps2", "F_N"],
         [trace.t, trace.v, trace.x, trace.a, trace.F])
    emit("fig4a.csv", ["x_m", "v_mps"], [trace.x[ev], trace.v[ev]])
    emit("fig4b.csv", ["strain", "strain_rate_per_s"],
         [ss.strain[ev], ss.strain_rate[ev]])
    emit("fig4c.csv", ["x_m", "F_N"], [trace.x[ev], trace.F[ev]])
    emit("fig4d.csv", ["strain", "stress_pa"], [ss.strain[ev], ss.stress[ev]])
    emit("fig4e.csv", ["v_mps", "F_N"], [trace.v[ev], trace.F[ev]])
    emit("fig4f.csv", ["strain_rate_per_s", "stress_pa"],
         [ss.strain_rate[ev], ss.stress[ev]])
    energy = strain_energy(ss)
    emit("fig5.csv", ["strain", "U_J"], [ss.strain[ev], energy[ev]])

    # campaign overlays, long format keyed by run
    def long_format(name: str, header: list[str], per_run) -> None:
        run_col, cols = [], None
        for run in runs:
            values = per_run(run)
            if cols is None:
                cols = [[] for _ in values]
            run_col.append(np.full(len(values[0]), run["trace"].meta["run_id"], dtype=float))
            for store, value in zip(cols, values):
                store.append(value)
        emit(name, ["run"] + header,
             [np.concatenate(run_col)] + [np.concatenate(c) for c in cols])

    long_format("fig6.csv", ["t_s", "F_N"],
                lambda run: (run["trace"].t[_event_slice(run["trace"])],
                             run["trace"].F[_event_slice(run["trace"])]))
    long_format("fig7.csv", ["x_m", "F_N"],
                lambda run: (run["trace"].x[_event_slice(run["trace"])],
                             run["trace"].F[_event_slice(run["trace"])]))

    emit("fig8.csv", ["F_max_N", "T_FWHM_s"],
         [np.array([run["summary"]["F_max"] for run in runs]),
          np.array([run["summary"]["T_FWHM"] for run in runs])])
    mass = runs[0]["config"].sim.apparatus.moving_mass
    ke0 = np.array([0.5 * mass * run["summary"]["v1"] ** 2 for run in runs])
    dke = np.array([run["summary"]["delta_KE"] for run in runs])
    emit("fig9.csv", ["KE0_J", "dKE_J", "dissipation_ratio"],
         [ke0, dke, dke / ke0])

    if diag_rows:
        picks = np.linspace(0, len(diag_rows) - 1, min(4, len(diag_rows))).astype(int)
        chosen = [diag_rows[i] for i in sorted(set(picks))]
        emit("fig12.csv", ["run", "t_s", "sigma_mea_pa", "sigma_cal_pa"],
             [np.concatenate([np.full(len(r["t"]), float(r["run_id"])) for r in chosen]),
              np.concatenate([r["t"] for r in chosen]),
              np.concatenate([r["sigma_mea"] for r in chosen]),
              np.concatenate([r["sigma_cal"] for r in chosen])])
        emit("fig13.csv", ["run", "t_s", "residual_pa"],
             [np.concatenate([np.full(len(r["t"]), float(r["run_id"])) for r in chosen]),
              np.concatenate([r["t"] for r in chosen]),
              np.concatenate([r["residual"] for r in chosen])])
    return files
