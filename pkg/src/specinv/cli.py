"""Command-line runner: execute suites from a JSON config, emit reports,
CSV series, and figures.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 configuration
error.  Identical (config, seed) pairs produce byte-identical report bodies
(runtime_ms excluded).
"""

import argparse
import json
import os
import sys

from .errors import ConfigError, UnknownSeries
from .report import body_bytes, emit_csv, write_report
from .suites import SuiteConfig, run_config


def _load_config(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return data


def _cmd_run(args):
    data = _load_config(args.config)
    if args.suite is not None:
        data["suite"] = args.suite
    if args.seed is not None:
        data["seed"] = args.seed
    cfg = SuiteConfig.from_dict(data)
    threads = os.environ.get("SPECINV_THREADS")
    if threads is not None:
        try:
            threads = int(threads)
        except ValueError as exc:
            raise ConfigError("SPECINV_THREADS must be an integer") from exc
        if threads < 1:
            raise ConfigError("SPECINV_THREADS must be >= 1")
    report = run_config(cfg)
    # the checks run sequentially: any positive thread cap is honored
    report["config"]["threads"] = threads
    write_report(report, args.out)
    sys.stdout.write(body_bytes(report).decode())
    if args.render:
        from .plots import render_report

        os.makedirs(args.render, exist_ok=True)
        for s in report.get("series", []):
            emit_csv(report, s["name"], os.path.join(args.render, f"{s['name']}.csv"))
        render_report(report, args.render)
    return 0 if report["failures"] == 0 else 1


def _cmd_csv(args):
    with open(args.report) as fh:
        report = json.load(fh)
    emit_csv(report, args.series, args.out)
    return 0


def _cmd_plot(args):
    from .plots import render_report

    with open(args.report) as fh:
        report = json.load(fh)
    written = render_report(report, args.outdir, args.series)
    for path in written:
        print(path)
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="specinv",
        description="Seeded numerical check suites with machine-readable reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute suites from a JSON config")
    p_run.add_argument("--config", required=True, help="path to the JSON config")
    p_run.add_argument("--suite", help="override the suite selection")
    p_run.add_argument("--seed", type=int, help="override the seed")
    p_run.add_argument("--out", default="report.json", help="report output path")
    p_run.add_argument("--render", metavar="DIR",
                       help="also write per-series CSV files and PNG figures to DIR")
    p_run.set_defaults(fn=_cmd_run)

    p_csv = sub.add_parser("csv", help="extract a series from a report as CSV")
    p_csv.add_argument("--report", required=True)
    p_csv.add_argument("--series", required=True)
    p_csv.add_argument("--out", required=True)
    p_csv.set_defaults(fn=_cmd_csv)

    p_plot = sub.add_parser("plot", help="render report series as PNG figures")
    p_plot.add_argument("--report", required=True)
    p_plot.add_argument("--series", help="single series name (default: all)")
    p_plot.add_argument("--outdir", default="figures")
    p_plot.set_defaults(fn=_cmd_plot)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except UnknownSeries as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
