"""Command line entry point: ``laufer analyze | sweep | selftest``.

Exit codes: 0 verdict true, 1 verdict false (or solver failures), 2 input
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from .laurent import ModeError
from .pipeline import (
    InputError,
    SweepSpec,
    analyze,
    format_report,
    format_tsv,
    parse_points,
    parse_potential,
    parse_range,
    parse_slot,
    sweep,
)

EXIT_OK, EXIT_VERDICT, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def cmd_analyze(args) -> int:
    p = parse_potential(_read(args.file))
    points = parse_points(_read(args.points), p.n, p.mode) if args.points else None
    report = analyze(p, points=points, starts=args.starts, tol=args.tol, seed=args.seed)
    if args.json == "-":
        print(report.dumps())
    else:
        print(format_report(report))
        if args.json:
            Path(args.json).write_text(report.dumps() + "\n", encoding="utf-8")
    return report.exit_status


def cmd_sweep(args) -> int:
    base = parse_potential(_read(args.file))
    slots, grids = [], []
    for vary, rng in ((args.vary, args.range), (args.vary2, args.range2)):
        if vary is None:
            continue
        if rng is None:
            raise InputError("each --vary needs a matching --range")
        slots.append(parse_slot(vary))
        grids.append(parse_range(rng, base.mode))
    spec = SweepSpec(base, tuple(slots), tuple(grids), starts=args.starts, tol=args.tol)
    rows = sweep(spec, jobs=args.jobs)
    table = format_tsv(spec, rows)
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
    else:
        sys.stdout.write(table)
    return EXIT_OK if all(r.agrees for r in rows) else EXIT_VERDICT


def cmd_selftest(args) -> int:
    from .selftest import run

    results = run(exact_only=not args.all)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laufer",
        description="Sections, superpotential critical points and normal-bundle splittings of deformed rank-2 bundles on P^1.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the full pipeline on one potential document")
    a.add_argument("file")
    a.add_argument("--points", help="JSON list of critical points to analyze instead of solving")
    a.add_argument("--starts", type=int, default=64, help="Newton starts (default 64)")
    a.add_argument("--tol", type=float, default=1e-10, help="Newton gradient tolerance")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="vary one or two coefficients over a grid, emit TSV")
    s.add_argument("file")
    s.add_argument("--vary", metavar="D,K")
    s.add_argument("--range", metavar="A:B:STEPS")
    s.add_argument("--vary2", metavar="D,K")
    s.add_argument("--range2", metavar="A:B:STEPS")
    s.add_argument("--starts", type=int, default=64)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="TSV output path (default stdout)")
    s.set_defaults(func=cmd_sweep)

    t = sub.add_parser("selftest", help="run the exact acceptance checks")
    t.add_argument("--all", action="store_true", help="include the floating-point checks")
    t.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ModeError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
