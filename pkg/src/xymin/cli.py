"""Command line entry point.

    xymin sweep  --gamma 0 --gamma 0.5 --B 0:3:61 --kT 0.01:2:41 --out sweep.csv
    xymin figure --id fig1 --out results/
    xymin point  --gamma 0.8 --B 0.7 --kT 0.005

Exit status is 0 on success, 1 for invalid input and 2 for I/O errors.
Progress and diagnostics go to stderr; stdout carries only CSV data.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .qmat import InvalidStateError
from .sweeper import (
    CSV_HEADER,
    MEASURES,
    ConfigError,
    OracleDiscrepancy,
    Range,
    SweepConfig,
    emit_csv,
    format_row,
    panels,
    parse_measures,
    preset_figure,
    read_config_file,
    run_sweep,
    write_csv,
)

log = logging.getLogger("xymin")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def _range(text: str) -> Range:
    try:
        return Range.parse(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _measures(text: str) -> frozenset[str]:
    try:
        return parse_measures(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xymin", description="Measurement-induced nonlocality in the two-spin XY chain.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parser.add_argument("-j", "--jobs", type=int, default=1, help="worker processes (default 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="sweep a (gamma, B, kT) grid and write CSV")
    sw.add_argument("--config", help="flat 'key = value' file; flags override its values")
    sw.add_argument("--J", type=float)
    sw.add_argument("--gamma", type=float, action="append", help="anisotropy; repeat for several panels")
    sw.add_argument("--B", type=_range, metavar="MIN:MAX:STEPS")
    sw.add_argument("--kT", type=_range, metavar="MIN:MAX:STEPS")
    sw.add_argument("--measures", type=_measures, help=f"comma separated subset of {','.join(MEASURES)}")
    sw.add_argument("--oracle-check", action="store_true", default=None, help="audit rows against brute-force oracles")
    sw.add_argument("--out", help="output CSV path (default: stdout)")

    fig = sub.add_parser("figure", help="write the preset surfaces, one CSV per gamma panel")
    fig.add_argument("--id", dest="fig_id", required=True, choices=("fig1", "fig2"))
    fig.add_argument("--out", required=True, help="output directory")
    fig.add_argument("--resolution", type=int, default=81, help="points per axis (default 81)")

    pt = sub.add_parser("point", help="evaluate a single parameter point")
    pt.add_argument("--J", type=float, default=1.0)
    pt.add_argument("--gamma", type=float, required=True)
    pt.add_argument("--B", type=float, required=True)
    pt.add_argument("--kT", type=float, required=True)
    pt.add_argument("--header", action="store_true", help="print the CSV header first")
    return parser


def _sweep_config(args) -> SweepConfig:
    kwargs = read_config_file(args.config) if args.config else {}
    if args.J is not None:
        kwargs["J"] = args.J
    if args.gamma:
        kwargs["gammas"] = tuple(args.gamma)
    if args.B is not None:
        kwargs["B_range"] = args.B
    if args.kT is not None:
        kwargs["kT_range"] = args.kT
    if args.measures is not None:
        kwargs["measures"] = args.measures
    if args.oracle_check is not None:
        kwargs["oracle_check"] = args.oracle_check
    if args.out is not None:
        kwargs["output_path"] = args.out
    cfg = SweepConfig(**kwargs)
    cfg.validate()
    return cfg


def _cmd_sweep(args) -> int:
    cfg = _sweep_config(args)
    log.info("sweeping %d points", cfg.n_points())
    found: list[OracleDiscrepancy] = []
    rows = run_sweep(cfg, found, jobs=args.jobs)
    if cfg.output_path:
        emit_csv(rows, cfg.output_path)
        log.info("wrote %s", cfg.output_path)
    else:
        write_csv(rows, sys.stdout)
    if cfg.oracle_check:
        print(f"oracle check: {len(found)} discrepancies above tolerance", file=sys.stderr)
    return EXIT_OK


def _cmd_figure(args) -> int:
    cfg = preset_figure(args.fig_id, args.resolution)
    os.makedirs(args.out, exist_ok=True)
    for suffix, panel in panels(cfg):
        path = os.path.join(args.out, f"{args.fig_id}_{suffix}.csv")
        log.info("panel %s (gamma=%g): %d points", suffix, panel.gammas[0], panel.n_points())
        emit_csv(run_sweep(panel, jobs=args.jobs), path)
        log.info("wrote %s", path)
    return EXIT_OK


def _cmd_point(args) -> int:
    cfg = SweepConfig(
        J=args.J,
        gammas=(args.gamma,),
        B_range=Range(args.B, args.B, 1),
        kT_range=Range(args.kT, args.kT, 1),
    )
    (row,) = run_sweep(cfg)
    if args.header:
        print(",".join(CSV_HEADER))
    print(format_row(row))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    handlers = {"sweep": _cmd_sweep, "figure": _cmd_figure, "point": _cmd_point}
    try:
        return handlers[args.command](args)
    except (ConfigError, InvalidStateError, ValueError) as exc:
        print(f"xymin: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"xymin: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
