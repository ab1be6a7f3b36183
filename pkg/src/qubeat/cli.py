"""Command-line driver.

Subcommands:
    evolve <config>    run one scenario, write its CSV (and optionally a PNG)
    figure <1..5>      run a figure preset: one CSV per curve plus a rendered PNG
    beat <config>      run a scenario, print and embed its beat report
    validate           run the oracle cross-check suite

Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import beat_analysis
from .exceptions import OscillationError, QubeatError
from .scenario import ConfigError, figure_preset, parse_config, run_scenario, with_overrides
from .traceio import write_trace_csv
from .validate import run_all

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default; the CLI contract wants 1
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="qubeat",
                     description="Non-Markovian two-qubit correlation dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", type=Path, default=Path("."),
                       help="output directory (default: current)")
        p.add_argument("--steps", type=int, default=None,
                       help="override the number of time samples")
        p.add_argument("--tmax", type=float, default=None,
                       help="override the trace length (units of 1/gamma0)")

    p_evolve = sub.add_parser("evolve", help="run a scenario config, write CSV")
    p_evolve.add_argument("config", type=Path)
    add_common(p_evolve)
    p_evolve.add_argument("--plot", action="store_true",
                          help="also render the trace to PNG")

    p_fig = sub.add_parser("figure", help="run a figure preset (CSV per curve + PNG)")
    p_fig.add_argument("fig_id", type=int, choices=range(1, 6), metavar="1..5")
    add_common(p_fig)
    p_fig.add_argument("--no-plot", action="store_true", help="skip PNG rendering")

    p_beat = sub.add_parser("beat", help="run a scenario and print its beat report")
    p_beat.add_argument("config", type=Path)
    add_common(p_beat)

    sub.add_parser("validate", help="run the oracle cross-check suite")
    return parser


def _cmd_evolve(args) -> int:
    cfg = with_overrides(parse_config(args.config), t_max=args.tmax, n_steps=args.steps)
    trace = run_scenario(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / f"{cfg.label}.csv"
    write_trace_csv(csv_path, trace)
    print(f"wrote {csv_path}")
    if args.plot:
        from .plotting import plot_trace

        png = plot_trace(trace, args.out / f"{cfg.label}.png")
        print(f"wrote {png}")
    return EXIT_OK


def _cmd_figure(args) -> int:
    configs = [with_overrides(c, t_max=args.tmax, n_steps=args.steps)
               for c in figure_preset(args.fig_id)]
    args.out.mkdir(parents=True, exist_ok=True)
    traces = []
    for cfg in configs:
        trace = run_scenario(cfg)
        traces.append(trace)
        csv_path = args.out / f"{cfg.label}.csv"
        write_trace_csv(csv_path, trace)
        print(f"wrote {csv_path}")
    if not args.no_plot:
        from .plotting import plot_figure

        png = plot_figure(args.fig_id, traces, args.out / f"fig{args.fig_id}.png")
        print(f"wrote {png}")
    return EXIT_OK


def _cmd_beat(args) -> int:
    cfg = with_overrides(parse_config(args.config), t_max=args.tmax, n_steps=args.steps)
    trace = run_scenario(cfg)
    blocks: list[str] = []
    for column in ("C", "D"):
        if column not in trace.series:
            continue
        try:
            report = beat_analysis(trace, column)
        except OscillationError as exc:
            blocks.append(f"beat.{column}.error = {exc}")
            continue
        blocks.extend(report.as_text_block(prefix=f"beat.{column}"))
    if not blocks:
        print("no oscillating measure columns (need C or D)", file=sys.stderr)
        return EXIT_USAGE
    for line in blocks:
        key, value = line.split(" = ", 1)
        trace.meta[key] = value
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / f"{cfg.label}.csv"
    write_trace_csv(csv_path, trace)
    for line in blocks:
        print(line)
    print(f"wrote {csv_path}")
    return EXIT_OK


def _cmd_validate(_args) -> int:
    results = run_all()
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    handlers = {
        "evolve": _cmd_evolve,
        "figure": _cmd_figure,
        "beat": _cmd_beat,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QubeatError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
