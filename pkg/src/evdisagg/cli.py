"""Command-line surface: disaggregate, evaluate, synth and plot.

Exit codes: 0 on success, 1 when an input file fails to parse (the
message names the offending line), 2 when inputs violate a contract
(negative powers, misaligned series, undefined metric denominators).
``EVDISAGG_LOG`` selects log verbosity: off (default), info or debug.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from datetime import timedelta
from pathlib import Path

import numpy as np

from .config import ConfigError, apply_config, format_config, parse_kv
from .metrics import evaluate_month, summarize
from .model import PipelineParams, PowerSeries
from .pipeline import WindowSpec, disaggregate_windows, window_bounds
from .synth import ScenarioSpec, generate_month, preset, PRESETS
from .trace_io import (TraceParseError, disaggregation_report, evaluation_report,
                       read_trace_csv, write_report, write_trace_csv)

log = logging.getLogger("evdisagg")


def _setup_logging() -> None:
    level = os.environ.get("EVDISAGG_LOG", "off").lower()
    if level == "off":
        logging.disable(logging.CRITICAL)
        return
    numeric = {"info": logging.INFO, "debug": logging.DEBUG}.get(level)
    if numeric is None:
        raise ValueError(f"EVDISAGG_LOG must be off, info or debug, not {level!r}")
    logging.basicConfig(level=numeric,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _load_params(path: str | None) -> PipelineParams:
    params = PipelineParams()
    if path is None:
        return params
    return apply_config(params, parse_kv(Path(path).read_text()))


def _cmd_disaggregate(args) -> int:
    params = _load_params(args.params)
    series = read_trace_csv(args.input, gap_fill=args.gap_fill)
    spec = WindowSpec(kind=args.window)
    log.info("disaggregating %d minutes in %s windows", len(series), args.window)
    results = disaggregate_windows(series, spec, params)
    report = disaggregation_report(results, series.start_time, args.window)
    write_report(args.output, report)
    if args.emit_series:
        estimate = PowerSeries(series.start_time,
                               np.concatenate([r.estimated.values for r in results])
                               if results else np.zeros(0))
        write_trace_csv(args.emit_series, estimate)
    print(f"{report['n_events']} event(s), {report['total_energy_kwh']:.3f} kWh "
          f"estimated over {report['n_windows']} window(s) -> {args.output}")
    return 0


def _cmd_evaluate(args) -> int:
    estimate = read_trace_csv(args.estimate)
    truth = read_trace_csv(args.truth)
    if estimate.start_time != truth.start_time or len(estimate) != len(truth):
        raise ValueError(
            f"estimate and truth are misaligned: "
            f"{estimate.start_time}/{len(estimate)} min vs {truth.start_time}/{len(truth)} min")
    months = []
    for w0, w1 in window_bounds(truth, WindowSpec(kind="month")):
        label = (truth.start_time + timedelta(minutes=w0)).strftime("%Y-%m")
        months.append(evaluate_month(label, truth.values[w0:w1], estimate.values[w0:w1]))
    summary = summarize(months)
    write_report(args.output, evaluation_report(months, summary))
    print(f"{summary.n_months} month(s): {summary.table_row()}")
    return 0


def _cmd_synth(args) -> int:
    spec = preset(args.preset, args.seed) if args.preset else ScenarioSpec(seed=args.seed)
    if args.scenario:
        spec = apply_config(spec, parse_kv(Path(args.scenario).read_text()))
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    aggregate, truth = generate_month(spec, args.days)
    write_trace_csv(out_dir / "aggregate.csv", aggregate)
    for name, channel in truth.items():
        write_trace_csv(out_dir / f"truth_{name}.csv", channel)
    (out_dir / "scenario.txt").write_text(format_config(spec))
    print(f"wrote {args.days} day(s) of preset {args.preset or 'free'} "
          f"(seed {args.seed}) to {out_dir}")
    return 0


def _cmd_plot(args) -> int:
    from .plotting import plot_traces

    panels = [(Path(args.input).stem, read_trace_csv(args.input))]
    for overlay in args.overlay or []:
        panels.append((Path(overlay).stem, read_trace_csv(overlay)))
    plot_traces(panels, args.output)
    print(f"wrote {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evdisagg",
        description="Disaggregate EV charging load from 1/60 Hz aggregate power traces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disaggregate", help="run the pipeline over a trace")
    p.add_argument("--input", required=True, help="aggregate trace CSV")
    p.add_argument("--params", help="pipeline parameter overrides (key = value)")
    p.add_argument("--window", choices=("day", "month"), default="day")
    p.add_argument("--output", required=True, help="JSON report path")
    p.add_argument("--emit-series", help="also write the estimated EV trace CSV")
    p.add_argument("--gap-fill", action="store_true",
                   help="linearly fill gaps of up to 5 missing minutes")
    p.set_defaults(func=_cmd_disaggregate)

    p = sub.add_parser("evaluate", help="score an estimate against ground truth")
    p.add_argument("--estimate", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--output", required=True, help="JSON report path")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("synth", help="generate synthetic benchmark data")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--days", type=int, default=1)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--scenario", help="scenario overrides (key = value)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("plot", help="render traces as stacked SVG panels")
    p.add_argument("--input", required=True)
    p.add_argument("--overlay", action="append")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    try:
        _setup_logging()
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (TraceParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
