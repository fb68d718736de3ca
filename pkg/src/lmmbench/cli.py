"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 analysis failure
(no event, too few crossings, fit failure), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .campaign import emit_report, run_campaign
from .config import (AnalysisParams, CampaignConfig, RunConfig, default_v0_schedule,
                     load_campaign_config, load_run_config, paper_run_config,
                     run_config_to_dict, save_run_config)
from .errors import AnalysisError, ConfigError, FitError, SignalError
from .events import stress_strain_trace
from .io import (read_trace_csv, read_waveform, write_frequency_csv, write_json,
                 write_kvfit_json, write_residual_csv, write_summary_json,
                 write_trace_csv, write_waveform)
from .kvfit import fit_diagnostics, fit_kelvin_voigt, select_loading_samples
from .pipeline import (analyze_record, channel_noise, estimate_rest_frequency,
                       run_pipeline, write_run)
from .dynamics import simulate_impact
from .synth import synthesize_beat, synthesize_reference
from .uncertainty import evaluate_budget, render_budget_table

logger = logging.getLogger("lmmbench")


def _load_config(args) -> RunConfig:
    if args.config:
        config = load_run_config(args.config)
    else:
        logger.info("no --config given; using built-in bench defaults")
        config = paper_run_config()
    if getattr(args, "seed", None) is not None:
        config = replace(config, sim=replace(config.sim, rng_seed=args.seed))
    analysis = config.analysis
    if getattr(args, "zfm_periods", None) is not None:
        analysis = replace(analysis, zfm_periods=args.zfm_periods)
    if getattr(args, "diff_halfwin", None) is not None:
        analysis = replace(analysis, diff_half_window=args.diff_halfwin)
    return replace(config, analysis=analysis)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    trace = simulate_impact(config.sim)
    write_trace_csv(trace, out / "motion.csv")
    save_run_config(config, out / "config.json")
    print(f"wrote {out / 'motion.csv'} ({len(trace)} samples)")
    return 0


def cmd_synthesize(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    motion = read_trace_csv(args.motion)
    motion.meta["slack_gap"] = config.sim.slack_gap
    beat_noise, ref_noise = channel_noise(config)
    apparatus = config.sim.apparatus
    beat = synthesize_beat(motion, apparatus, beat_noise, config.analysis.pre_trigger)
    reference = synthesize_reference(apparatus, beat.duration, ref_noise)
    from .config import config_hash
    digest = config_hash(config)
    write_waveform(beat, out / "beat.raw", seed=beat_noise.rng_seed, config_digest=digest)
    write_waveform(reference, out / "reference.raw", seed=ref_noise.rng_seed,
                   config_digest=digest)
    print(f"wrote {out / 'beat.raw'} ({len(beat)} samples) and reference")
    return 0


def cmd_analyze(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    beat = read_waveform(args.raw)
    if args.frest is not None:
        f_rest = args.frest
    elif args.reference:
        reference = read_waveform(args.reference)
        f_rest = estimate_rest_frequency(reference, config.zfm_periods,
                                         config.analysis.hysteresis)
    else:
        f_rest = config.sim.apparatus.f_rest
        logger.info("no reference channel; using the configured rest frequency")
    series, trace, summary, _ = analyze_record(beat, f_rest, config.sim.apparatus, config)
    write_frequency_csv(series, out / "frequency.csv")
    write_trace_csv(trace, out / "trace.csv")
    write_summary_json(summary, out / "summary.json")
    print(f"analyzed {args.raw}: F_max = {summary.F_max:.4f} N, "
          f"T_FWHM = {summary.T_FWHM * 1e3:.2f} ms")
    return 0


def cmd_fit(args) -> int:
    out = _out_dir(args)
    if args.campaign:
        from .campaign import completed_run_dirs, _load_run
        run_dirs = completed_run_dirs(args.campaign)
        if not run_dirs:
            raise AnalysisError(f"no completed runs under {args.campaign}")
        runs = [_load_run(run_dir) for run_dir in run_dirs]
        config = runs[0]["config"]
        traces = []
        for run in runs:
            ss = stress_strain_trace(run["trace"], config.sim.specimen)
            ss.meta["run_id"] = run["trace"].meta["run_id"]
            traces.append(ss)
        analysis = config.analysis
    else:
        config = _load_config(args)
        analysis = config.analysis
        traces = []
        for index, path in enumerate(args.traces):
            trace = read_trace_csv(path)
            ss = stress_strain_trace(trace, config.sim.specimen)
            ss.meta["run_id"] = index
            traces.append(ss)
    samples = select_loading_samples(traces,
                                     include_unloading=analysis.include_unloading,
                                     onset_guard=analysis.onset_guard)
    fit = fit_kelvin_voigt(samples)
    write_kvfit_json(fit, out / "kvfit.json")
    for row in fit_diagnostics(fit, traces):
        write_residual_csv(row, out / f"residual_run_{row['run_id']:03d}.csv")
    print(f"fit over {fit.n_samples} samples: E = {fit.e_modulus:.4e} Pa, "
          f"eta = {fit.eta:.4e} Pa*s, c = {fit.c:.4e} Pa, R^2 = {fit.r_squared:.4f}")
    return 0


def cmd_uncertainty(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    trace = read_trace_csv(args.trace)
    trace.meta["diff_half_window"] = config.analysis.diff_half_window
    budget = evaluate_budget(trace, config.sim.apparatus, n=config.analysis.pre_n,
                             noise_floor=config.analysis.noise_floor)
    from dataclasses import asdict
    write_json(asdict(budget), out / "budget.json")
    table = render_budget_table(budget)
    (out / "budget.txt").write_text(table + "\n", encoding="utf-8")
    print(table)
    return 0


def cmd_campaign(args) -> int:
    if args.config:
        campaign = load_campaign_config(args.config)
    else:
        logger.info("no --config given; 30-run default campaign")
        campaign = CampaignConfig(base=paper_run_config(), n_runs=30,
                                  v0_schedule=default_v0_schedule(30))
    if args.seed is not None:
        campaign = replace(campaign, seed=args.seed)
    out = Path(args.out or campaign.output_dir or "campaign_out")
    run_campaign(campaign, out, workers=args.workers)
    print(f"campaign finished under {out}")
    return 0


def cmd_report(args) -> int:
    out = emit_report(args.campaign, args.out, figures=not args.no_figures)
    print(f"report written to {out}")
    return 0


def cmd_pipeline(args) -> int:
    config = _load_config(args)
    out = _out_dir(args)
    result = run_pipeline(config)
    write_run(result, out)
    write_json({"f_rest_used": result.f_rest_used}, out / "analysis_context.json")
    print(f"pipeline finished: F_max = {result.summary.F_max:.4f} N, "
          f"x_max = {result.summary.x_max * 1e3:.4f} mm, "
          f"T_FWHM = {result.summary.T_FWHM * 1e3:.2f} ms")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmmbench",
        description="Virtual impact-tensile test bench: simulate a mass striking "
                    "a viscoelastic wire, synthesize the interferometer beat "
                    "record, and run the frequency/kinematics/fit analysis chain.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="info-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, zfm=True):
        p.add_argument("--config", help="run config JSON (defaults to bench constants)")
        p.add_argument("--out", required=True, help="output directory")
        if seed:
            p.add_argument("--seed", type=int, help="override the run RNG seed")
        if zfm:
            p.add_argument("--zfm-periods", type=int, help="periods per frequency window")
            p.add_argument("--diff-halfwin", type=int, help="differentiation half-window")

    p = sub.add_parser("simulate", help="integrate the impact and write the motion CSV")
    common(p, zfm=False)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("synthesize", help="render the two-channel record for a motion CSV")
    common(p, zfm=False)
    p.add_argument("--motion", required=True, help="motion CSV from 'simulate'")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("analyze", help="record to frequency, trace and event summary")
    common(p, seed=False)
    p.add_argument("--raw", required=True, help="beat record (.raw with JSON sidecar)")
    p.add_argument("--reference", help="reference record for the rest frequency")
    p.add_argument("--frest", type=float, help="constant rest frequency in Hz")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit", help="pooled constitutive fit over analyzed runs")
    p.add_argument("--config", help="run config JSON (for geometry when using --traces)")
    p.add_argument("--out", required=True)
    p.add_argument("--campaign", help="campaign directory to pool")
    p.add_argument("--traces", nargs="*", default=[], help="trace CSVs to pool")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("uncertainty", help="force-uncertainty budget for a trace CSV")
    common(p, seed=False, zfm=False)
    p.add_argument("--trace", required=True, help="analyzed trace CSV")
    p.set_defaults(func=cmd_uncertainty)

    p = sub.add_parser("campaign", help="run a schedule of virtual experiments")
    p.add_argument("--config", help="campaign config JSON (default: 30-run bench schedule)")
    p.add_argument("--out", help="campaign output directory")
    p.add_argument("--seed", type=int, help="campaign seed")
    p.add_argument("--workers", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("report", help="aggregate a campaign into tables and figures")
    p.add_argument("--campaign", required=True, help="campaign directory")
    p.add_argument("--out", help="report directory (default <campaign>/report)")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("pipeline", help="simulate + synthesize + analyze one run")
    common(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except (AnalysisError, SignalError, FitError) as exc:
        print(f"error: analysis failed: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
