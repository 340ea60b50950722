"""Small reflexive polytopes built from simplices, polygons and products."""

from __future__ import annotations

import itertools
from typing import Sequence

from .polytope import LatticePolytope, polar_dual


def standard_simplex(d: int) -> LatticePolytope:
    """conv{e_1, ..., e_d, -e_1 - ... - e_d}, the fan polytope of P^d."""
    verts = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    verts.append(tuple(-1 for _ in range(d)))
    return LatticePolytope(verts)


def segment() -> LatticePolytope:
    return LatticePolytope([(-1,), (1,)])


def product(*polys: LatticePolytope) -> LatticePolytope:
    """Cartesian product; reflexive when every factor is."""
    verts = [sum(combo, ()) for combo in itertools.product(*(p.vertices for p in polys))]
    return LatticePolytope(verts)


def free_sum(*polys: LatticePolytope) -> LatticePolytope:
    """Convex hull of the factors placed in complementary coordinates."""
    dims = [p.dim for p in polys]
    total = sum(dims)
    verts = []
    offset = 0
    for p, d in zip(polys, dims):
        for v in p.vertices:
            row = [0] * total
            row[offset:offset + d] = v
            verts.append(tuple(row))
        offset += d
    return LatticePolytope(verts)


def reflexive_polygons() -> list[LatticePolytope]:
    """Reflexive polygons, deduplicated by vertex list (not up to GL(2, Z)).

    Every lattice polygon whose only interior lattice point is the origin is
    reflexive, which holds for any polygon with vertices in {-1, 0, 1}^2
    containing the origin in its interior.  The big triangle
    conv{(-1,-1), (2,-1), (-1,2)} is added explicitly.
    """
    box = [p for p in itertools.product((-1, 0, 1), repeat=2) if p != (0, 0)]
    found: dict[tuple, LatticePolytope] = {}
    for k in range(3, len(box) + 1):
        for subset in itertools.combinations(box, k):
            try:
                P = LatticePolytope(subset)
            except ValueError:
                continue
            if P.vertices in found or not all(f.offset < 0 for f in P.facets):
                continue
            if P.is_reflexive:
                found[P.vertices] = P
    big = LatticePolytope([(-1, -1), (2, -1), (-1, 2)])
    found[big.vertices] = big
    return [found[k] for k in sorted(found)]


def _canonical_subset(polys: Sequence[LatticePolytope], n: int) -> list[LatticePolytope]:
    seen = {}
    for p in polys:
        seen.setdefault(p.vertices, p)
    return [seen[k] for k in sorted(seen)][:n]


def product_corpus_4d(n: int = 20) -> list[LatticePolytope]:
    """At least ``n`` distinct reflexive 4-polytopes from products of polygons and segments."""
    polys = reflexive_polygons()
    picks = polys[:: max(1, len(polys) // 6)][:6]
    seg = segment()
    out = [product(seg, seg, seg, seg), product(standard_simplex(3), seg)]
    out += [product(a, b) for a, b in itertools.combinations_with_replacement(picks, 2)]
    out += [product(a, seg, seg) for a in picks]
    out += [free_sum(a, seg, seg) for a in picks]
    out.append(product(polar_dual(standard_simplex(2)), standard_simplex(2)))
    result = _canonical_subset(out, len(out))
    if len(result) < n:
        raise RuntimeError(f"only {len(result)} product polytopes generated")
    return result


def reflexive_3d_corpus() -> list[LatticePolytope]:
    """Simplices, prisms over polygons and their duals in dimension 3."""
    out = [standard_simplex(3), polar_dual(standard_simplex(3)), product(segment(), segment(), segment())]
    for poly in reflexive_polygons():
        prism = product(poly, segment())
        out.append(prism)
        out.append(polar_dual(prism))
    return _canonical_subset(out, len(out))
