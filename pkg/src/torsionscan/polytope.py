"""Lattice polytopes with exact facets, polar duality and face lattices.

A :class:`LatticePolytope` is built from integer points; the convex hull is
computed exactly by testing the hyperplane through every affinely
independent d-subset of the input, which is cheap for the vertex counts of
reflexive polytopes in dimension <= 4.  Derived data (facets, faces, lattice
points) is computed lazily and cached on the instance.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ReflexivityError
from .lattice import rank

# Above this Hadamard bound the batched determinants fall back to Python ints.
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class FacetInequality:
    """Facet {x : <x, normal> = offset} of a polytope lying in <x, normal> >= offset."""

    normal: tuple[int, ...]
    offset: int

    def evaluate(self, x: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.normal, x)) - self.offset


@dataclass(frozen=True)
class FaceDescriptor:
    dim: int
    vertex_indices: frozenset[int]
    active_facets: frozenset[int]


@dataclass(frozen=True)
class ClassifiedPoint:
    point: tuple[int, ...]
    minimal_face_dim: int


def _batched_det(mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of k x k integer matrices by cofactor expansion."""
    k = mats.shape[-1]
    if k == 1:
        return mats[:, 0, 0]
    if k == 2:
        return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    total = None
    for j in range(k):
        minor = np.delete(mats[:, 1:, :], j, axis=2)
        term = mats[:, 0, j] * _batched_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def _hyperplane_normals(diffs: np.ndarray) -> np.ndarray:
    """Integer normals of the hyperplanes spanned by stacks of d-1 vectors in Z^d.

    Component i is the signed maximal minor omitting column i, so the normal
    is orthogonal to every row of the stack.
    """
    d = diffs.shape[-1]
    out = []
    for i in range(d):
        minor = np.delete(diffs, i, axis=2)
        det = _batched_det(minor)
        out.append(det if i % 2 == 0 else -det)
    return np.stack(out, axis=1)


def _primitive_rows(normals: np.ndarray) -> np.ndarray:
    if normals.dtype == object:
        g = np.array([math.gcd(*map(int, r)) for r in normals], dtype=object)
    else:
        g = np.gcd.reduce(normals, axis=1)
    keep = g != 0
    normals = normals[keep]
    g = g[keep]
    return normals // g[:, None]


class LatticePolytope:
    """Convex hull of integer points in Z^d.

    ``points`` may contain duplicates and non-vertices; both are dropped.
    The vertex list is stored lexicographically sorted, so two polytopes are
    equal iff their sorted vertex lists agree in the same basis.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(x) for x in p) for p in points})
        if not pts:
            raise DimensionError("empty point set")
        self.dim = len(pts[0])
        if self.dim == 0 or any(len(p) != self.dim for p in pts):
            raise DimensionError("points must share a positive dimension")
        base = pts[0]
        if rank([[a - b for a, b in zip(p, base)] for p in pts[1:]]) < self.dim:
            raise DimensionError(f"points do not span a {self.dim}-dimensional polytope")
        facets = _facets_of(pts, self.dim)
        self._facets = facets
        self.vertices = tuple(
            p for p in pts if _is_vertex(p, facets, self.dim)
        )
        self.input_point_count = len(pts)

    def __repr__(self):
        return f"LatticePolytope({[list(v) for v in self.vertices]})"

    def __eq__(self, other):
        return isinstance(other, LatticePolytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __getstate__(self):
        return {"vertices": self.vertices}

    def __setstate__(self, state):
        self.__init__(state["vertices"])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def dropped_points(self) -> int:
        """Number of distinct input points that were not vertices."""
        return self.input_point_count - len(self.vertices)

    # -- facets ----------------------------------------------------------------

    @property
    def facets(self) -> tuple[FacetInequality, ...]:
        return self._facets

    @functools.cached_property
    def facet_vertex_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(
            frozenset(i for i, v in enumerate(self.vertices) if f.evaluate(v) == 0)
            for f in self._facets
        )

    @functools.cached_property
    def is_reflexive(self) -> bool:
        return all(f.offset == -1 for f in self._facets)

    def require_reflexive(self):
        if not self.is_reflexive:
            raise ReflexivityError(f"polytope with vertices {list(self.vertices)} is not reflexive")

    # -- faces -----------------------------------------------------------------

    @functools.cached_property
    def faces(self) -> tuple[FaceDescriptor, ...]:
        """All nonempty proper faces, sorted by (dim, vertex indices)."""
        fsets = self.facet_vertex_sets
        seen = set(fsets)
        frontier = list(fsets)
        while frontier:
            nxt = []
            for s in frontier:
                for f in fsets:
                    t = s & f
                    if t and t not in seen:
                        seen.add(t)
                        nxt.append(t)
            frontier = nxt
        out = []
        for s in seen:
            verts = [self.vertices[i] for i in sorted(s)]
            base = verts[0]
            k = rank([[a - b for a, b in zip(v, base)] for v in verts[1:]]) if len(verts) > 1 else 0
            active = frozenset(j for j, f in enumerate(fsets) if s <= f)
            out.append(FaceDescriptor(k, s, active))
        out.sort(key=lambda fd: (fd.dim, sorted(fd.vertex_indices)))
        return tuple(out)

    @functools.cached_property
    def _face_by_facets(self) -> dict[frozenset[int], FaceDescriptor]:
        return {fd.active_facets: fd for fd in self.faces}

    @functools.cached_property
    def _face_by_vertices(self) -> dict[frozenset[int], FaceDescriptor]:
        return {fd.vertex_indices: fd for fd in self.faces}

    def faces_of_dim(self, k: int) -> list[FaceDescriptor]:
        return [fd for fd in self.faces if fd.dim == k]

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces_of_dim(k)) for k in range(self.dim))

    def face_with_vertices(self, vertex_indices: Iterable[int]) -> FaceDescriptor:
        return self._face_by_vertices[frozenset(vertex_indices)]

    # -- lattice points ----------------------------------------------------------

    @functools.cached_property
    def _points_and_masks(self) -> tuple[np.ndarray, list[frozenset[int]]]:
        pts, vals = _enumerate_box(self.vertices, self._facets)
        masks = [frozenset(np.flatnonzero(row == 0).tolist()) for row in vals]
        return pts, masks

    @functools.cached_property
    def classified_points(self) -> tuple[ClassifiedPoint, ...]:
        pts, masks = self._points_and_masks
        out = []
        for p, m in zip(pts, masks):
            k = self.dim if not m else self._face_by_facets[m].dim
            out.append(ClassifiedPoint(tuple(int(x) for x in p), k))
        return tuple(out)

    @functools.cached_property
    def _interior_counts(self) -> dict[frozenset[int], int]:
        counts: dict[frozenset[int], int] = {}
        for m in self._points_and_masks[1]:
            counts[m] = counts.get(m, 0) + 1
        return counts

    @property
    def n_lattice_points(self) -> int:
        return len(self._points_and_masks[1])

    def interior_point_count(self, face: FaceDescriptor | None = None) -> int:
        """Lattice points in the relative interior of ``face`` (of P itself if None)."""
        key = frozenset() if face is None else face.active_facets
        return self._interior_counts.get(key, 0)


def _is_vertex(p, facets, d) -> bool:
    normals = [f.normal for f in facets if f.evaluate(p) == 0]
    return len(normals) >= d and rank(normals) == d


def _facets_of(pts: list[tuple[int, ...]], d: int) -> tuple[FacetInequality, ...]:
    P = np.array(pts, dtype=object)
    bound = max(1, max(abs(int(x)) for p in pts for x in p))
    # Hadamard-style bound on the minors and on the evaluations.
    safe = (2 * bound) ** (d - 1) * math.factorial(d) * bound * d < _INT64_SAFE
    dtype = np.int64 if safe else object
    P = P.astype(dtype)
    n = len(pts)
    if d == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        return tuple(sorted([FacetInequality((1,), lo), FacetInequality((-1,), -hi)], key=lambda f: f.normal))
    found: dict[tuple[int, ...], int] = {}
    for chunk in _chunks(itertools.combinations(range(n), d), 20000):
        idx = np.array(chunk, dtype=np.int64)
        base = P[idx[:, 0]]
        diffs = P[idx[:, 1:]] - base[:, None, :]
        normals = _primitive_rows(_hyperplane_normals(diffs))
        if len(normals) == 0:
            continue
        normals = np.unique(normals, axis=0) if dtype is np.int64 else _unique_object_rows(normals)
        vals = P @ normals.T
        lo = vals.min(axis=0)
        hi = vals.max(axis=0)
        for j in range(normals.shape[0]):
            nrm = tuple(int(x) for x in normals[j])
            # A side is a facet iff the points attaining the extreme value
            # span a hyperplane.
            for sign, extreme in ((1, lo[j]), (-1, hi[j])):
                cnt = int(np.count_nonzero(vals[:, j] == extreme))
                if cnt < d:
                    continue
                key = nrm if sign == 1 else tuple(-x for x in nrm)
                off = int(extreme) * sign
                if key not in found:
                    on = [pts[i] for i in np.flatnonzero(vals[:, j] == extreme)]
                    if rank([[a - b for a, b in zip(q, on[0])] for q in on[1:]]) == d - 1:
                        found[key] = off
    facets = [FacetInequality(k, v) for k, v in found.items()]
    facets.sort(key=lambda f: f.normal)
    return tuple(facets)


def _unique_object_rows(a: np.ndarray) -> np.ndarray:
    rows = sorted({tuple(int(x) for x in r) for r in a})
    return np.array(rows, dtype=object).reshape(len(rows), a.shape[1])


def _chunks(it, size):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def _enumerate_box(vertices, facets) -> tuple[np.ndarray, np.ndarray]:
    """Lattice points of the polytope in lexicographic order, with facet slacks."""
    V = np.array(vertices, dtype=np.int64)
    A = np.array([f.normal for f in facets], dtype=np.int64)
    b = np.array([f.offset for f in facets], dtype=np.int64)
    lo = V.min(axis=0)
    hi = V.max(axis=0)
    d = V.shape[1]
    pts_out = []
    vals_out = []
    if d == 1:
        grid = np.arange(lo[0], hi[0] + 1, dtype=np.int64)[:, None]
        vals = grid @ A.T - b
        keep = (vals >= 0).all(axis=1)
        return grid[keep], vals[keep]
    rest = [np.arange(lo[i], hi[i] + 1, dtype=np.int64) for i in range(1, d)]
    tail = np.stack(np.meshgrid(*rest, indexing="ij"), axis=-1).reshape(-1, d - 1)
    tail_vals = tail @ A[:, 1:].T
    for x0 in range(int(lo[0]), int(hi[0]) + 1):
        vals = tail_vals + x0 * A[:, 0] - b
        keep = (vals >= 0).all(axis=1)
        if keep.any():
            sel = tail[keep]
            pts_out.append(np.hstack([np.full((len(sel), 1), x0, dtype=np.int64), sel]))
            vals_out.append(vals[keep])
    if not pts_out:
        return np.zeros((0, d), dtype=np.int64), np.zeros((0, len(facets)), dtype=np.int64)
    return np.vstack(pts_out), np.vstack(vals_out)


# -- module-level operations -------------------------------------------------------


def facet_representation(P: LatticePolytope) -> list[FacetInequality]:
    return list(P.facets)


def is_reflexive(P: LatticePolytope) -> bool:
    return P.is_reflexive


def polar_dual(P: LatticePolytope) -> LatticePolytope:
    """{y : <x, y> >= -1 for all x in P}, required to be a lattice polytope."""
    offsets = [f.offset for f in P.facets]
    if any(c >= 0 for c in offsets):
        raise ReflexivityError("origin is not in the interior of the polytope")
    verts = []
    for f in P.facets:
        c = -f.offset
        if any(x % c for x in f.normal):
            raise ReflexivityError(
                f"polar dual has the non-integral vertex {tuple(x / c for x in f.normal)}"
            )
        verts.append(tuple(x // c for x in f.normal))
    return LatticePolytope(verts)


def enumerate_lattice_points(P: LatticePolytope) -> list[ClassifiedPoint]:
    return list(P.classified_points)


def face_lattice(P: LatticePolytope) -> list[FaceDescriptor]:
    return list(P.faces)


def interior_point_count(P: LatticePolytope, face: FaceDescriptor) -> int:
    return P.interior_point_count(face)


def dual_face(P: LatticePolytope, Pdual: LatticePolytope, face: FaceDescriptor) -> FaceDescriptor:
    """The face of ``Pdual`` paired with ``face`` of a reflexive ``P``.

    Its vertices are the facet normals of P over the facets containing
    ``face``.
    """
    index = {v: i for i, v in enumerate(Pdual.vertices)}
    try:
        verts = frozenset(index[P.facets[j].normal] for j in face.active_facets)
    except KeyError:
        raise ReflexivityError("second polytope is not the polar dual of the first") from None
    return Pdual.face_with_vertices(verts)
