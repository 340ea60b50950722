"""Command-line interface.

Exit codes: 0 success, 1 verification mismatch, 2 input or parse error,
3 internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .dataset import (
    TABLE,
    scan,
    table16,
    table_row,
    verify_comb_dual,
    verify_tor_dual,
)
from .errors import InternalConsistencyError, TorsionScanError
from .invariants import STRINGY_NOTE, analyze, fundamental_group
from .io import (
    TABLE_HEADER,
    emit_report,
    format_vertex_matrix,
    parse_records,
)
from .polytope import polar_dual

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("torsionscan")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _orientation(args) -> str:
    return "rows" if args.rows_are_points else "cols"


def _records(args):
    return parse_records(_read(args.file), _orientation(args))


def cmd_analyze(args) -> int:
    status = EXIT_OK
    if not args.json:
        print(TABLE_HEADER)
    for rec in _records(args):
        if rec.polytope is None:
            log.error("record %d: %s", rec.index + 1, rec.error)
            status = max(status, EXIT_INPUT)
            continue
        P = rec.polytope
        try:
            if P.dim != 4:
                Dstar = P if args.dual else polar_dual(P)
                g = fundamental_group(Dstar)
                payload = {"dim": P.dim, "pi1": list(g.invariant_factors)}
                if P.dim >= 5:
                    payload["notes"] = [STRINGY_NOTE]
                print(json.dumps(payload) if args.json else f"d={P.dim} pi1 {g}")
                continue
            report = analyze(polar_dual(P) if args.dual else P)
        except InternalConsistencyError as exc:
            log.error("record %d: internal consistency error: %s", rec.index + 1, exc)
            return EXIT_INTERNAL
        except TorsionScanError as exc:
            log.error("record %d: %s", rec.index + 1, exc)
            status = max(status, EXIT_INPUT)
            continue
        print(emit_report(report, "json" if args.json else "table"))
    return status


def cmd_dual(args) -> int:
    status = EXIT_OK
    for rec in _records(args):
        if rec.polytope is None:
            log.error("record %d: %s", rec.index + 1, rec.error)
            status = EXIT_INPUT
            continue
        try:
            sys.stdout.write(format_vertex_matrix(polar_dual(rec.polytope)))
        except TorsionScanError as exc:
            log.error("record %d: %s", rec.index + 1, exc)
            status = EXIT_INPUT
    return status


def cmd_check(args) -> int:
    status = EXIT_OK
    for rec in _records(args):
        if rec.polytope is None:
            print(f"{rec.index + 1} error")
            log.error("record %d: %s", rec.index + 1, rec.error)
            status = EXIT_INPUT
            continue
        print(f"{rec.index + 1} {'reflexive' if rec.polytope.is_reflexive else 'not-reflexive'}")
    return status


def cmd_table16(args) -> int:
    pairs = table16()
    status = EXIT_OK
    if args.json:
        for p in pairs:
            print(json.dumps({"row": p.label, **table_row(p).__dict__}))
    else:
        print("n | " + TABLE_HEADER)
        for p in pairs:
            r = table_row(p)
            print(
                f"{p.label} | {r.pi1} | {r.P_delta} {r.V_delta} | {r.P_dual} {r.V_dual}"
                f" | {r.h11} {r.h21} | {r.chi}"
            )
    if args.verify:
        for p in pairs:
            golden = table_row(p) == TABLE[p.label]
            comb = verify_comb_dual(p.delta)
            comb_mirror = verify_comb_dual(p.dstar)
            tor = verify_tor_dual(p)
            ok = golden and bool(comb) and bool(comb_mirror) and tor
            print(
                f"verify row {p.label}: table {_ok(golden)}, comb-dual {_ok(bool(comb))}"
                f" (mirror {_ok(bool(comb_mirror))}), tor-dual {_ok(tor)}"
                f" [A={p.report.A} B={p.report.B}; mirror A={p.mirror_report.A} B={p.mirror_report.B}]"
            )
            if not ok:
                status = EXIT_MISMATCH
    return status


def _ok(flag: bool) -> str:
    return "ok" if flag else "MISMATCH"


def cmd_scan(args) -> int:
    records = list(_records(args))
    summary = scan(
        records,
        jobs=args.jobs,
        skip_nonreflexive=args.skip_nonreflexive,
        as_dual=not args.as_delta,
    )
    print(json.dumps(summary, indent=2))
    parse_failures = [r for r in records if r.polytope is None]
    for r in parse_failures:
        log.error("record %d: %s", r.index + 1, r.error)
    return EXIT_INPUT if parse_failures else EXIT_OK


def _default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("TORSIONSCAN_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsionscan",
        description="Torsion invariants of Calabi-Yau hypersurfaces from reflexive polytopes.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_file(p):
        p.add_argument("file", help="vertex-matrix file, '-' for stdin")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--rows-are-points", action="store_true",
                       help="square matrices list one point per row")
        g.add_argument("--cols-are-points", action="store_true",
                       help="square matrices list one point per column (default)")

    p = sub.add_parser("analyze", help="torsion report for each record (read as Delta)")
    add_file(p)
    p.add_argument("--dual", action="store_true", help="records are Delta* instead of Delta")
    p.add_argument("--json", action="store_true", help="one JSON object per record")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dual", help="polar duals in the same matrix format")
    add_file(p)
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("table16", help="rebuild the table of the 16 exceptional polytopes")
    p.add_argument("--verify", action="store_true",
                   help="also check golden values and both duality statements")
    p.add_argument("--json", action="store_true", help="one JSON object per row")
    p.set_defaults(func=cmd_table16)

    p = sub.add_parser("scan", help="bulk scan; records are read as Delta* by default")
    add_file(p)
    p.add_argument("--jobs", type=int, default=_default_jobs(),
                   help="worker processes (default $TORSIONSCAN_JOBS or 1)")
    p.add_argument("--skip-nonreflexive", action="store_true",
                   help="count non-reflexive records instead of listing them as failures")
    p.add_argument("--as-delta", action="store_true", help="records are Delta instead of Delta*")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("check", help="reflexivity check, one line per record")
    add_file(p)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except InternalConsistencyError as exc:
        log.error("internal consistency error: %s", exc)
        return EXIT_INTERNAL
    except (OSError, TorsionScanError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
