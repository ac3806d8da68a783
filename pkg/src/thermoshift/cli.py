"""Command-line front end: run scenarios, sweep thresholds, plot, go live."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .analysis import ablation_grid, summarize
from .config import load_scenario
from .controller import ControllerConfig
from .errors import ConfigFileError, ThermoshiftError
from .harness import emit_trace, parse_trace, run_scenario
from .plots import emit_plots
from .sensors import SysfsSource, live_run
from .suites import SUITE_NAMES, get_suite


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _write_summary(summary, path):
    with open(path, "w") as fh:
        json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_run(args) -> int:
    scenario = load_scenario(args.config)
    if args.baseline:
        scenario = replace(scenario, controller=None)
    if args.true_weight_sharing:
        scenario = replace(scenario, weight_shared=True)
    if args.literal_init:
        if scenario.controller is None:
            print("error: --literal-init needs a controller section", file=sys.stderr)
            return 2
        scenario = replace(scenario, controller=replace(scenario.controller, literal_init=True))
    trace = run_scenario(scenario)
    emit_trace(trace, args.out)
    summary = summarize(trace, scenario.large, scenario.small)
    summary_path = args.out + ".summary.json"
    _write_summary(summary, summary_path)
    print(f"wrote {len(trace)} rows to {args.out}")
    print(f"wrote summary to {summary_path}")
    for key, value in summary.to_dict().items():
        print(f"  {key}: {value}")
    return 0


def cmd_ablate(args) -> int:
    scenario = load_scenario(args.config)
    if scenario.controller is None:
        print("error: ablation needs a controller section in the config", file=sys.stderr)
        return 2
    grid = ablation_grid(scenario, args.tlims, args.glims, duration=args.duration)
    grid.to_csv(args.out)
    table = grid.format_table()
    table_path = args.out + ".txt"
    with open(table_path, "w") as fh:
        fh.write(table + "\n")
    print(table)
    print(f"wrote {args.out} and {table_path}")
    return 0


def cmd_summarize(args) -> int:
    trace = parse_trace(args.trace)
    suite = get_suite(args.suite)
    summary = summarize(trace, suite.large, suite.small)
    print(json.dumps(summary.to_dict(), indent=2, sort_keys=True))
    return 0


def cmd_plot(args) -> int:
    trace = parse_trace(args.trace)
    overlay = parse_trace(args.overlay) if args.overlay else None
    paths = emit_plots(
        trace, args.out, overlay=overlay,
        temp_threshold=args.tlim, trip_temp=args.t_throttle,
    )
    for path in paths:
        print(f"wrote {path}")
    return 0


def cmd_live(args) -> int:
    config = ControllerConfig(
        temp_smoothing=args.alpha,
        grad_smoothing=args.beta,
        temp_threshold=args.tlim,
        grad_threshold=args.glim,
    )
    source = SysfsSource(args.zone)
    # Fail fast on an unreadable zone rather than five polls in.
    source.read_now()

    def on_shift(decision, sample):
        print(f"[{sample.time_s:.2f}s] {decision.value} at {sample.celsius:.2f} C")

    trace = live_run(source, config, period=args.period,
                     on_shift=on_shift, duration=args.duration)
    print(f"collected {len(trace)} readings")
    if args.out:
        emit_trace(trace, args.out)
        print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoshift",
        description="Temperature-aware large/small model shifting: simulate, analyze, or run live.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and write its trace + summary")
    p_run.add_argument("--config", required=True, help="JSON scenario config")
    p_run.add_argument("--out", required=True, help="trace CSV output path")
    p_run.add_argument("--baseline", action="store_true",
                       help="ignore the controller section; run the large model only")
    p_run.add_argument("--true-weight-sharing", action="store_true",
                       help="shifts cost no load time")
    p_run.add_argument("--literal-init", action="store_true",
                       help="zero-seed controller filters (startup-artifact fidelity mode)")
    p_run.set_defaults(func=cmd_run)

    p_abl = sub.add_parser("ablate", help="sweep temperature/derivative thresholds")
    p_abl.add_argument("--config", required=True)
    p_abl.add_argument("--tlims", required=True, type=_float_list,
                       help="comma-separated temperature thresholds, e.g. 75,73,70,65")
    p_abl.add_argument("--glims", required=True, type=_float_list,
                       help="comma-separated derivative thresholds; use --glims=-0.07,-0.10 "
                            "so the leading dash is not read as a flag")
    p_abl.add_argument("--out", required=True, help="grid CSV output path")
    p_abl.add_argument("--duration", type=float, default=1800.0,
                       help="simulated seconds per cell (default 1800)")
    p_abl.set_defaults(func=cmd_ablate)

    p_sum = sub.add_parser("summarize", help="summarize an existing trace CSV")
    p_sum.add_argument("--trace", required=True)
    p_sum.add_argument("--suite", required=True,
                       help="built-in suite name: " + ", ".join(SUITE_NAMES))
    p_sum.set_defaults(func=cmd_summarize)

    p_plot = sub.add_parser("plot", help="render temperature/frequency/latency SVG charts")
    p_plot.add_argument("--trace", required=True)
    p_plot.add_argument("--overlay", help="second trace drawn on the same axes")
    p_plot.add_argument("--out", required=True, help="output path prefix")
    p_plot.add_argument("--tlim", type=float, help="shift threshold reference line")
    p_plot.add_argument("--t-throttle", type=float, help="throttle trip reference line")
    p_plot.set_defaults(func=cmd_plot)

    p_live = sub.add_parser("live", help="poll a Linux thermal zone and signal shifts")
    p_live.add_argument("--zone", required=True,
                        help="thermal zone file, e.g. /sys/class/thermal/thermal_zone0/temp")
    p_live.add_argument("--tlim", required=True, type=float, help="temperature threshold, C")
    p_live.add_argument("--glim", required=True, type=float,
                        help="derivative threshold, C per sample (usually negative)")
    p_live.add_argument("--alpha", type=float, default=0.995, help="temperature EMA coefficient")
    p_live.add_argument("--beta", type=float, default=0.99, help="derivative EMA coefficient")
    p_live.add_argument("--period", type=float, default=0.25, help="polling period, seconds")
    p_live.add_argument("--duration", type=float, help="stop after this many seconds")
    p_live.add_argument("--out", help="write the collected trace CSV here")
    p_live.set_defaults(func=cmd_live)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigFileError as exc:
        print("config errors:", file=sys.stderr)
        for problem in exc.problems:
            print(f"  - {problem}", file=sys.stderr)
        return 2
    except ThermoshiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
