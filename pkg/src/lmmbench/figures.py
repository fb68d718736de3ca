"""Render the report's figure-data CSVs to PNG files.

Every plot is re-read from the delimited files in the report directory,
so the rendered figures show exactly what the CSVs carry.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import read_csv_columns  # noqa: E402


def _save(fig, path: Path, files: list[str]) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    files.append(path.name)


def _scatter_by_run(ax, run_ids, x, y, linestyle="-"):
    for run in np.unique(run_ids):
        mask = run_ids == run
        ax.plot(x[mask], y[mask], linestyle, linewidth=0.8)


def render_report_figures(report_dir: str | Path) -> list[str]:
    """Render all figure CSVs present in a report directory; returns filenames."""
    report_dir = Path(report_dir)
    files: list[str] = []

    path = report_dir / "fig3.csv"
    if path.exists():
        t, v, x, a, force = read_csv_columns(path, ["t_s", "v_mps", "x_m", "a_mps2", "F_N"])
        fig, axes = plt.subplots(4, 1, figsize=(7, 9), sharex=True)
        for ax, series, label in zip(axes, (v, x * 1e3, a, force),
                                     ("velocity (m/s)", "displacement (mm)",
                                      "acceleration (m/s$^2$)", "force (N)")):
            ax.plot(t * 1e3, series, linewidth=0.9)
            ax.set_ylabel(label)
            ax.grid(True, alpha=0.3)
        axes[-1].set_xlabel("time (ms)")
        _save(fig, report_dir / "fig3.png", files)

    pair_plots = [
        ("fig4a.csv", ["x_m", "v_mps"], "displacement (m)", "velocity (m/s)"),
        ("fig4b.csv", ["strain", "strain_rate_per_s"], "strain", "strain rate (1/s)"),
        ("fig4c.csv", ["x_m", "F_N"], "displacement (m)", "force (N)"),
        ("fig4d.csv", ["strain", "stress_pa"], "strain", "stress (Pa)"),
        ("fig4e.csv", ["v_mps", "F_N"], "velocity (m/s)", "force (N)"),
        ("fig4f.csv", ["strain_rate_per_s", "stress_pa"], "strain rate (1/s)", "stress (Pa)"),
        ("fig5.csv", ["strain", "U_J"], "strain", "strain energy (J)"),
    ]
    for name, header, xlabel, ylabel in pair_plots:
        path = report_dir / name
        if not path.exists():
            continue
        xcol, ycol = read_csv_columns(path, header)
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot(xcol, ycol, linewidth=0.9)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        _save(fig, path.with_suffix(".png"), files)

    overlays = [
        ("fig6.csv", ["t_s", "F_N"], "time (s)", "force (N)"),
        ("fig7.csv", ["x_m", "F_N"], "displacement (m)", "force (N)"),
    ]
    for name, header, xlabel, ylabel in overlays:
        path = report_dir / name
        if not path.exists():
            continue
        run_ids, xcol, ycol = read_csv_columns(path, ["run"] + header)
        fig, ax = plt.subplots(figsize=(6, 4.5))
        _scatter_by_run(ax, run_ids, xcol, ycol)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        _save(fig, path.with_suffix(".png"), files)

    path = report_dir / "fig8.csv"
    if path.exists():
        f_max, fwhm = read_csv_columns(path, ["F_max_N", "T_FWHM_s"])
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot(f_max, fwhm * 1e3, "o", markersize=4)
        ax.set_xlabel("peak force (N)")
        ax.set_ylabel("FWHM (ms)")
        ax.grid(True, alpha=0.3)
        _save(fig, report_dir / "fig8.png", files)

    path = report_dir / "fig9.csv"
    if path.exists():
        ke0, dke, _ratio = read_csv_columns(path, ["KE0_J", "dKE_J", "dissipation_ratio"])
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.plot(ke0 * 1e3, dke * 1e3, "o", markersize=4)
        ax.set_xlabel("initial kinetic energy (mJ)")
        ax.set_ylabel("dissipated energy (mJ)")
        ax.grid(True, alpha=0.3)
        _save(fig, report_dir / "fig9.png", files)

    path = report_dir / "fig12.csv"
    if path.exists():
        run_ids, t, mea, cal = read_csv_columns(
            path, ["run", "t_s", "sigma_mea_pa", "sigma_cal_pa"])
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for run in np.unique(run_ids):
            mask = run_ids == run
            ax.plot(t[mask] * 1e3, mea[mask] / 1e9, "-", linewidth=0.9,
                    label=f"measured, run {int(run)}")
            ax.plot(t[mask] * 1e3, cal[mask] / 1e9, "--", linewidth=0.9,
                    label=f"fitted, run {int(run)}")
        ax.set_xlabel("time (ms)")
        ax.set_ylabel("stress (GPa)")
        ax.legend(fontsize=7)
        ax.grid(True, alpha=0.3)
        _save(fig, report_dir / "fig12.png", files)

    path = report_dir / "fig13.csv"
    if path.exists():
        run_ids, t, residual = read_csv_columns(path, ["run", "t_s", "residual_pa"])
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for run in np.unique(run_ids):
            mask = run_ids == run
            ax.plot(t[mask] * 1e3, residual[mask] / 1e9, linewidth=0.9,
                    label=f"run {int(run)}")
        ax.set_xlabel("time (ms)")
        ax.set_ylabel("stress residual (GPa)")
        ax.legend(fontsize=7)
        ax.grid(True, alpha=0.3)
        _save(fig, report_dir / "fig13.png", files)

    return files
