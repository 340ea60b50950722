"""Vertex-matrix text format and report serialization.

A record is a header line ``r c [comment]`` followed by r lines of c
integers.  When r < c the rows are coordinates and the columns are points,
when c < r the rows are points; a square matrix is disambiguated by the
``orientation`` argument ("cols" means columns are points).  ``#`` starts
a comment that runs to the end of the line.
"""

from __future__ import annotations

import json
import logging
from typing import Iterator

from .dataset import ScanRecord
from .errors import DimensionError, ParseError
from .invariants import TorsionReport
from .lattice import FiniteAbelianGroup
from .polytope import LatticePolytope

log = logging.getLogger(__name__)

MAX_DIGITS = 15


def _parse_int(token: str, line: int, column: int) -> int:
    digits = token.lstrip("+-")
    if not digits.isdigit():
        raise ParseError(f"non-integer token {token!r}", line, column)
    if len(digits) > MAX_DIGITS:
        raise ParseError(f"integer {token!r} exceeds {MAX_DIGITS} digits", line, column)
    return int(token)


def _split(text: str) -> list[tuple[int, list[str]]]:
    return [(i + 1, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines())]


def _points(matrix: list[list[int]], r: int, c: int, orientation: str) -> list[tuple[int, ...]]:
    rows_are_points = c < r or (r == c and orientation == "rows")
    if rows_are_points:
        return [tuple(row) for row in matrix]
    return [tuple(matrix[i][j] for i in range(r)) for j in range(c)]


def _read_record(lines, pos, orientation) -> tuple[LatticePolytope, int, int]:
    """Parse the record whose header is at ``lines[pos]``; return (polytope, header line, next pos)."""
    lineno, tokens = lines[pos]
    if len(tokens) < 2:
        raise ParseError("header needs two integers 'rows cols'", lineno, 1)
    r = _parse_int(tokens[0], lineno, 1)
    c = _parse_int(tokens[1], lineno, 2)
    if r <= 0 or c <= 0:
        raise ParseError(f"zero-dimensional matrix {r}x{c}", lineno, 1)
    matrix = []
    for k in range(r):
        if pos + 1 + k >= len(lines):
            raise ParseError(f"expected {r} rows after header, found {k}", lineno + k + 1)
        rl, rt = lines[pos + 1 + k]
        if len(rt) != c:
            raise ParseError(f"expected {c} integers, found {len(rt)}", rl, min(len(rt), c) + 1)
        matrix.append([_parse_int(t, rl, j + 1) for j, t in enumerate(rt)])
    pts = _points(matrix, r, c, orientation)
    try:
        P = LatticePolytope(pts)
    except DimensionError as exc:
        raise ParseError(str(exc), lineno) from None
    dup = len(pts) - P.input_point_count
    if dup or P.dropped_points:
        log.warning(
            "record at line %d: dropped %d duplicate and %d non-vertex points",
            lineno, dup, P.dropped_points,
        )
    return P, lineno, pos + 1 + r


def _check_orientation(orientation: str) -> None:
    if orientation not in ("cols", "rows"):
        raise ValueError("orientation must be 'cols' or 'rows'")


def parse_records(text: str, orientation: str = "cols") -> Iterator[ScanRecord]:
    """All records in ``text``; malformed ones come back with ``error`` set."""
    _check_orientation(orientation)
    lines = [(n, t) for n, t in _split(text) if t]
    pos = 0
    index = 0
    while pos < len(lines):
        try:
            P, lineno, pos = _read_record(lines, pos, orientation)
            yield ScanRecord(index, P, line=lineno)
        except ParseError as exc:
            yield ScanRecord(index, None, error=str(exc), line=exc.line)
            pos = _resync(lines, pos)
        index += 1


def _resync(lines, pos) -> int:
    """Skip the declared extent of a broken record, or just its header line."""
    tokens = lines[pos][1]
    try:
        r = int(tokens[0])
        int(tokens[1])
    except (IndexError, ValueError):
        return pos + 1
    return pos + 1 + max(r, 0)


def parse_vertex_matrix(text: str, orientation: str = "cols") -> LatticePolytope:
    """Exactly one record; raises :class:`ParseError` on any defect."""
    _check_orientation(orientation)
    lines = [(n, t) for n, t in _split(text) if t]
    if not lines:
        raise ParseError("empty input", 1)
    P, _, pos = _read_record(lines, 0, orientation)
    if pos != len(lines):
        raise ParseError("trailing data after the matrix", lines[pos][0], 1)
    return P


def format_vertex_matrix(P: LatticePolytope, comment: str = "") -> str:
    """Header ``d n`` then d rows; the columns are the vertices."""
    head = f"{P.dim} {P.n_vertices}" + (f"  {comment}" if comment else "")
    rows = [" ".join(str(v[i]) for v in P.vertices) for i in range(P.dim)]
    return "\n".join([head, *rows]) + "\n"


def _factors(g: FiniteAbelianGroup) -> list[int]:
    return list(g.invariant_factors)


def report_dict(report: TorsionReport) -> dict:
    return {
        "pi1": _factors(report.pi1),
        "brauer": _factors(report.brauer),
        "A": _factors(report.A),
        "B": _factors(report.B),
        "h11": report.h11,
        "h21": report.h21,
        "chi": report.chi,
        "counts": list(report.counts),
        "tors_k0_order": report.tors_even_order,
        "tors_k1_order": report.tors_odd_order,
        "notes": list(report.notes),
    }


TABLE_HEADER = "|pi1| | P_D V_D | P_D* V_D* | h11 h21 | chi"


def table_line(report: TorsionReport) -> str:
    P, V, Ps, Vs = report.counts
    return f"{report.pi1.order} | {P} {V} | {Ps} {Vs} | {report.h11} {report.h21} | {report.chi}"


def emit_report(report: TorsionReport, format: str = "json") -> str:
    if format == "json":
        return json.dumps(report_dict(report))
    if format == "table":
        return table_line(report)
    raise ValueError(f"unknown format {format!r}")
