"""Command line entry point: ``rlnet synth | analyze | metrics``.

Exit codes: 0 on success, 2 for unreadable or invalid input, 3 when the data
are valid but too degenerate to analyze.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import replace
from datetime import date

from .distributions import MC_REPLICATES, MC_SEED
from .errors import DegenerateDataError, InputError, InvalidConfig, OutOfRangeCoordinate
from .geo import GeoPoint
from .ingest import serialize_events, serialize_registry
from .report import PipelineOptions, emit, run_pipeline
from .synthgen import SynthConfig, format_keyvalue, generate, parse_keyvalue

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3

log = logging.getLogger("rlnet")


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected YYYY-MM-DD, got {text!r}")


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rlnet", description="Temporal inter-firm communication network analysis.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="generate a synthetic registry and event log")
    s.add_argument("--config", help="flat key=value file with generator settings")
    s.add_argument("--seed", type=int, help="generator seed (overrides the config file)")
    s.add_argument("--weeks", type=_positive_int, help="number of simulated weeks")
    s.add_argument("--center-lat", type=float)
    s.add_argument("--center-lon", type=float)
    s.add_argument("--out", required=True, help="output directory")

    for name, help_ in (("analyze", "run the full pipeline and write all tables"),
                        ("metrics", "write per-firm network metrics only")):
        a = sub.add_parser(name, help=help_)
        a.add_argument("--events", required=True)
        a.add_argument("--registry", required=True)
        a.add_argument("--window-days", type=_positive_int, default=182)
        a.add_argument("--step-days", type=_positive_int, default=7)
        a.add_argument("--center-lat", type=float, required=True)
        a.add_argument("--center-lon", type=float, required=True)
        a.add_argument("--seed", type=int, default=0, help="annealing seed")
        a.add_argument("--study-start", type=_iso_date, help="first day of the study period")
        a.add_argument("--study-end", type=_iso_date, help="day after the study period")
        a.add_argument("--mc-replicates", type=_positive_int, default=MC_REPLICATES,
                       help="studentized range Monte Carlo replicates")
        a.add_argument("--mc-seed", type=int, default=MC_SEED)
        a.add_argument("--format", choices=("json", "csv"), default="json")
        a.add_argument("--out", required=True, help="output directory")
    return p


def _synth(args) -> int:
    flat = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            flat = parse_keyvalue(fh.read())
    cfg = SynthConfig.from_flat(flat)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.weeks is not None:
        cfg = replace(cfg, weeks=args.weeks)
    if args.center_lat is not None or args.center_lon is not None:
        geo = cfg.geo_model
        geo = replace(geo, center_lat=geo.center_lat if args.center_lat is None else args.center_lat,
                      center_lon=geo.center_lon if args.center_lon is None else args.center_lon)
        cfg = replace(cfg, geo_model=geo)
    data = generate(cfg)
    os.makedirs(args.out, exist_ok=True)
    flat_out = cfg.to_flat()
    flat_out["study_start"] = cfg.start.isoformat()
    flat_out["study_end"] = cfg.study_end.isoformat()
    files = {
        "registry.csv": serialize_registry(data.registry),
        "events.csv": serialize_events(data.events),
        "synth_config.txt": format_keyvalue(flat_out),
        "planted_core.txt": "".join(f"{c}\n" for c in sorted(data.core)),
    }
    for name, text in files.items():
        with open(os.path.join(args.out, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    log.info("wrote %d firms and %d events to %s", len(data.registry), len(data.events), args.out)
    return EXIT_OK


def _analyze(args, firm_metrics_only: bool) -> int:
    try:
        center = GeoPoint(args.center_lat, args.center_lon)
    except OutOfRangeCoordinate as exc:
        raise InvalidConfig(str(exc))
    opts = PipelineOptions(
        center=center, window_days=args.window_days, step_days=args.step_days, seed=args.seed,
        study_start=args.study_start, study_end=args.study_end,
        mc_replicates=args.mc_replicates, mc_seed=args.mc_seed,
    )
    report = run_pipeline(args.registry, args.events, opts, firm_metrics_only=firm_metrics_only)
    for path in emit(report, args.format, args.out, firm_metrics_only=firm_metrics_only):
        log.info("wrote %s", path)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            return _synth(args)
        return _analyze(args, firm_metrics_only=args.command == "metrics")
    except InputError as exc:
        print(f"rlnet: input error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"rlnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateDataError as exc:
        print(f"rlnet: degenerate data ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
