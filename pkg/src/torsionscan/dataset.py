"""The sixteen exceptional reflexive 4-polytopes and mirror-pair verifiers.

Each row describes the vertices v_1..v_n of Delta* by integer linear
relations, plus one rational vector v; the lattice is N = Z v + sum Z v_i.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import SpecError, TorsionScanError
from .invariants import TorsionReport, analyze, codim_filtered_span
from .lattice import (
    FiniteAbelianGroup,
    SublatticeSpan,
    contains,
    hermite_basis,
    quotient_group,
    rank,
    solve_rational,
    wedge_square_quotient,
)
from .polytope import LatticePolytope, polar_dual

# Largest denominator accepted for the auxiliary vector.
MAX_AUX_DENOMINATOR = 12


@dataclass(frozen=True)
class RelationSpec:
    label: int
    num_vertices: int
    relations: tuple[tuple[int, ...], ...]
    aux_numerators: tuple[int, ...]
    aux_denominator: int

    @property
    def aux_vector(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self.aux_denominator) for a in self.aux_numerators)


@dataclass(frozen=True)
class TableRow:
    pi1: int
    P_delta: int
    V_delta: int
    P_dual: int
    V_dual: int
    h11: int
    h21: int
    chi: int


def _spec(label, n, relations, aux, den):
    return RelationSpec(label, n, tuple(tuple(r) for r in relations), tuple(aux), den)


RELATION_SPECS: tuple[RelationSpec, ...] = (
    _spec(1, 5, [[1, 1, 1, 1, 1]], [0, 1, 2, 3, 4], 5),
    _spec(2, 6, [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]], [0, 1, 2, 0, 1, 2], 3),
    _spec(3, 5, [[3, 3, 1, 1, 1]], [1, 2, 1, 2, 0], 3),
    _spec(4, 5, [[4, 1, 1, 1, 1]], [2, 1, 2, 3, 0], 4),
    _spec(5, 6, [[4, 2, 1, 1, 0, 0], [2, 0, 0, 0, 1, 1]], [1, 1, 1, 0, 1, 0], 2),
    _spec(6, 7, [[2, 1, 1, 0, 0, 0, 0], [2, 0, 0, 1, 1, 0, 0], [2, 0, 0, 0, 0, 1, 1]],
          [1, 1, 0, 1, 0, 1, 0], 2),
    _spec(7, 5, [[8, 4, 2, 1, 1]], [1, 1, 1, 1, 0], 2),
    _spec(8, 6, [[4, 2, 1, 1, 0, 0], [4, 2, 0, 0, 1, 1]], [1, 1, 1, 0, 1, 0], 2),
    _spec(9, 6, [[1, 1, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]], [0, 1, 2, 3, 0, 2], 4),
    _spec(10, 6, [[4, 2, 1, 1, 0, 0], [0, 0, 0, 0, 1, 1]], [1, 1, 1, 0, 1, 0], 2),
    _spec(11, 7, [[2, 1, 1, 0, 0, 0, 0], [2, 0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 0, 1, 1]],
          [1, 1, 0, 1, 0, 1, 0], 2),
    _spec(12, 6, [[2, 1, 1, 0, 0, 0], [0, 0, 0, 2, 1, 1]], [1, 1, 0, 1, 1, 0], 2),
    _spec(13, 7, [[2, 1, 1, 0, 0, 0, 0], [0, 0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 0, 1, 1]],
          [1, 1, 0, 1, 0, 1, 0], 2),
    _spec(14, 8, [[1, 1, 0, 0, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0, 0, 0],
                  [0, 0, 0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 0, 0, 1, 1]],
          [1, 0, 1, 0, 1, 0, 1, 0], 2),
    _spec(15, 5, [[2, 2, 2, 1, 1]], [1, 2, 3, 0, 2], 4),
    _spec(16, 6, [[1, 1, 1, 1, 0, 0], [0, 0, 1, 1, 1, 1]], [1, 3, 0, 2, 0, 2], 4),
)

# Golden values: |pi1|, P_Delta, V_Delta, P_Delta*, V_Delta*, h11, h21, chi.
TABLE: dict[int, TableRow] = {
    1: TableRow(5, 26, 5, 6, 5, 1, 21, -40),
    2: TableRow(3, 34, 9, 7, 6, 2, 29, -54),
    3: TableRow(3, 49, 5, 7, 5, 2, 38, -72),
    4: TableRow(2, 53, 5, 9, 5, 3, 43, -80),
    5: TableRow(2, 77, 7, 9, 6, 3, 59, -112),
    6: TableRow(2, 77, 9, 9, 7, 3, 59, -112),
    7: TableRow(2, 101, 5, 9, 5, 3, 75, -144),
    8: TableRow(2, 101, 6, 9, 6, 3, 75, -144),
    9: TableRow(2, 29, 8, 9, 6, 4, 28, -48),
    10: TableRow(2, 53, 8, 9, 6, 4, 44, -80),
    11: TableRow(2, 53, 10, 9, 7, 4, 44, -80),
    12: TableRow(2, 41, 9, 9, 6, 4, 36, -64),
    13: TableRow(2, 41, 12, 9, 7, 4, 36, -64),
    14: TableRow(2, 41, 16, 9, 8, 4, 36, -64),
    15: TableRow(2, 29, 5, 9, 5, 5, 29, -48),
    16: TableRow(2, 29, 6, 9, 6, 5, 29, -48),
}

# Rows whose N' also needs the vector 2v.
ROWS_WITH_2V = frozenset({4, 9, 15, 16})


def _rational_kernel(relations: Sequence[Sequence[int]], n: int) -> list[list[Fraction]]:
    """Basis of {x in Q^n : R x = 0} as rows, from the reduced row echelon form."""
    rows = [[Fraction(x) for x in r] for r in relations]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -rows[i][fc]
        basis.append(vec)
    return basis


def embed_vertices(spec: RelationSpec) -> list[tuple[Fraction, ...]]:
    """Vertices in Q^4 satisfying the relations, the first independent four mapped to e_1..e_4."""
    n = spec.num_vertices
    for rel in spec.relations:
        if len(rel) != n:
            raise SpecError(f"row {spec.label}: relation {rel} does not have {n} coefficients")
    kernel = _rational_kernel(spec.relations, n)
    if len(kernel) != 4:
        raise SpecError(f"row {spec.label}: relations leave rank {len(kernel)}, expected 4")
    # Column i of the 4 x n matrix K is a realization of v_i.
    cols = [tuple(kernel[k][i] for k in range(4)) for i in range(n)]
    chosen: list[int] = []
    for i in range(n):
        if rank([cols[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == 4:
            break
    frame = [cols[j] for j in chosen]
    return [tuple(solve_rational(frame, c)) for c in cols]


def _lattice_generators(spec: RelationSpec) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Vertices and v scaled to integers, plus an HNF basis of the scaled N."""
    if len(spec.aux_numerators) != spec.num_vertices:
        raise SpecError(f"row {spec.label}: aux vector has the wrong length")
    if not 1 <= spec.aux_denominator <= MAX_AUX_DENOMINATOR:
        raise SpecError(f"row {spec.label}: aux denominator {spec.aux_denominator} out of range")
    verts = embed_vertices(spec)
    aux = tuple(sum(c * v[k] for c, v in zip(spec.aux_vector, verts)) for k in range(4))
    gens = verts + [aux]
    scale = lcm(*(x.denominator for g in gens for x in g))
    if scale > MAX_AUX_DENOMINATOR:
        raise SpecError(f"row {spec.label}: v is not in (1/r) <v_i> for small r (r = {scale})")
    scaled = [tuple(int(x * scale) for x in g) for g in gens]
    return scaled, hermite_basis(scaled, 4)


def _coordinates(basis, vector, label) -> tuple[int, ...]:
    c = solve_rational(basis, vector)
    if c is None or any(x.denominator != 1 for x in c):
        raise SpecError(f"row {label}: vector {vector} not integral in the lattice basis")
    return tuple(int(x) for x in c)


def build_from_relations(spec: RelationSpec) -> LatticePolytope:
    """Delta* written in the HNF basis of N = Z v + sum Z v_i."""
    scaled, basis = _lattice_generators(spec)
    P = LatticePolytope(_coordinates(basis, v, spec.label) for v in scaled[:-1])
    if P.n_vertices != spec.num_vertices:
        raise SpecError(
            f"row {spec.label}: {P.n_vertices} vertices after hull, expected {spec.num_vertices}"
        )
    if not P.is_reflexive:
        raise SpecError(f"row {spec.label}: resulting polytope is not reflexive")
    return P


def aux_lattice_vector(spec: RelationSpec) -> tuple[int, ...]:
    """Coordinates of v in the basis used by :func:`build_from_relations`."""
    scaled, basis = _lattice_generators(spec)
    return _coordinates(basis, scaled[-1], spec.label)


@dataclass(frozen=True)
class MirrorPair:
    label: int | str
    delta: LatticePolytope
    dstar: LatticePolytope
    report: TorsionReport
    mirror_report: TorsionReport

    @classmethod
    def from_dual(cls, dstar: LatticePolytope, label: int | str = "") -> "MirrorPair":
        delta = polar_dual(dstar)
        return cls(label, delta, dstar, analyze(delta), analyze(dstar))


def table16() -> list[MirrorPair]:
    return [MirrorPair.from_dual(build_from_relations(s), s.label) for s in RELATION_SPECS]


def table_row(pair: MirrorPair) -> TableRow:
    r = pair.report
    return TableRow(r.pi1.order, *r.counts, r.h11, r.h21, r.chi)


@dataclass(frozen=True)
class CombDualResult:
    """Both halves of the combinatorial duality check for one polytope."""

    wedge_m: FiniteAbelianGroup  # Lambda^2 M / (M ^ M'')
    quotient_n: FiniteAbelianGroup  # N / N'
    wedge_n: FiniteAbelianGroup  # Lambda^2 N / (N ^ N'')
    quotient_m: FiniteAbelianGroup  # M / M'

    @property
    def first(self) -> bool:
        return self.wedge_m == self.quotient_n

    @property
    def second(self) -> bool:
        return self.wedge_n == self.quotient_m

    def __bool__(self):
        return self.first and self.second


def verify_comb_dual(Delta: LatticePolytope) -> CombDualResult:
    Delta.require_reflexive()
    Dstar = polar_dual(Delta)
    d = Delta.dim
    return CombDualResult(
        wedge_m=wedge_square_quotient(d, codim_filtered_span(Delta, 2)),
        quotient_n=quotient_group(codim_filtered_span(Dstar, 1)),
        wedge_n=wedge_square_quotient(d, codim_filtered_span(Dstar, 2)),
        quotient_m=quotient_group(codim_filtered_span(Delta, 1)),
    )


def verify_tor_dual(pair: MirrorPair) -> bool:
    r, m = pair.report, pair.mirror_report
    return r.A == m.B and r.B == m.A


# -- bulk scanning ---------------------------------------------------------------


@dataclass(frozen=True)
class ScanRecord:
    """One input to :func:`scan`: a polytope, or the error that prevented parsing it."""

    index: int
    polytope: LatticePolytope | None = None
    error: str | None = None
    line: int | None = None


def _scan_one(args):
    index, vertices, as_dual = args
    try:
        P = LatticePolytope(vertices)
        if not P.is_reflexive:
            return index, "nonreflexive", None
        Delta = polar_dual(P) if as_dual else P
        report = analyze(Delta)
        return index, "ok", (report.pi1.invariant_factors, report.brauer.invariant_factors,
                             report.h11, report.h21)
    except TorsionScanError as exc:
        return index, "error", f"{type(exc).__name__}: {exc}"


def scan(
    source: Iterable[ScanRecord | LatticePolytope],
    jobs: int = 1,
    skip_nonreflexive: bool = False,
    as_dual: bool = True,
) -> dict:
    """Analyze a stream of polytopes and collect the ones with torsion.

    Records are read as Delta* (fan polytopes) when ``as_dual`` is set, as
    Delta otherwise.  Non-reflexive records are listed under ``failures``
    unless ``skip_nonreflexive``, in which case they are only counted.  The
    summary depends only on the input order, never on ``jobs``.
    """
    records = []
    for i, rec in enumerate(source):
        if isinstance(rec, LatticePolytope):
            rec = ScanRecord(i, rec)
        records.append(rec)
    failures = []
    work = []
    for rec in records:
        if rec.polytope is None:
            failures.append({"index": rec.index, "line": rec.line, "error": rec.error})
        else:
            work.append((rec.index, rec.polytope.vertices, as_dual))
    lines = {rec.index: rec.line for rec in records}

    if jobs > 1 and len(work) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_scan_one, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_scan_one(w) for w in work]

    nontrivial_pi1, nontrivial_brauer = [], []
    skipped = 0
    for index, status, payload in sorted(results, key=lambda r: r[0]):
        if status == "nonreflexive":
            if skip_nonreflexive:
                skipped += 1
            else:
                failures.append({"index": index, "line": lines[index], "error": "not reflexive"})
            continue
        if status == "error":
            failures.append({"index": index, "line": lines[index], "error": payload})
            continue
        pi1, br, h11, h21 = payload
        hit = {"index": index, "pi1": list(pi1), "brauer": list(br), "h11": h11, "h21": h21}
        if pi1:
            nontrivial_pi1.append(hit)
        if br:
            nontrivial_brauer.append(hit)
    failures.sort(key=lambda f: f["index"])
    return {
        "total": len(records),
        "analyzed": len(records) - len(failures) - skipped,
        "skipped_nonreflexive": skipped,
        "nontrivial_pi1": nontrivial_pi1,
        "nontrivial_brauer": nontrivial_brauer,
        "failures": failures,
    }


def check_2v_rule(spec: RelationSpec) -> bool:
    """N' equals <vertices> or <vertices, 2v> according to the row's class."""
    P = build_from_relations(spec)
    span = codim_filtered_span(P, 1)
    gens = list(P.vertices)
    if spec.label in ROWS_WITH_2V:
        gens.append(tuple(2 * x for x in aux_lattice_vector(spec)))
    expected = SublatticeSpan(4, tuple(gens))
    return all(contains(expected, g) for g in span.generators) and all(
        contains(span, g) for g in expected.generators
    )
