import itertools
from math import comb

import pytest

from torsionscan.corpus import product, reflexive_3d_corpus, segment, standard_simplex
from torsionscan.errors import DimensionError, ReflexivityError
from torsionscan.polytope import (
    LatticePolytope,
    dual_face,
    enumerate_lattice_points,
    face_lattice,
    facet_representation,
    interior_point_count,
    is_reflexive,
    polar_dual,
)

from conftest import leibniz_det

SQUARE = LatticePolytope([(1, 1), (1, -1), (-1, 1), (-1, -1)])
DIAMOND = LatticePolytope([(1, 0), (-1, 0), (0, 1), (0, -1)])


def test_square_facets():
    facets = facet_representation(SQUARE)
    assert [(f.normal, f.offset) for f in facets] == [
        ((-1, 0), -1), ((0, -1), -1), ((0, 1), -1), ((1, 0), -1)
    ]


def test_simplex_facets_exhaustive(quintic_dual):
    facets = facet_representation(quintic_dual)
    assert len(facets) == 5
    assert all(f.offset == -1 for f in facets)
    # oracle: each 4-subset of the 5 vertices spans a hyperplane with the
    # remaining vertex strictly on one side
    verts = quintic_dual.vertices
    for subset in itertools.combinations(range(5), 4):
        (other,) = set(range(5)) - set(subset)
        base = verts[subset[0]]
        rows = [[a - b for a, b in zip(verts[i], base)] for i in subset[1:]]
        rows.append([a - b for a, b in zip(verts[other], base)])
        assert leibniz_det(rows) != 0
    for f in facets:
        assert sum(1 for v in verts if f.evaluate(v) == 0) == 4


def test_degenerate_input():
    with pytest.raises(DimensionError):
        LatticePolytope([(0, 0), (1, 1), (2, 2)])


def test_redundant_points_dropped():
    P = LatticePolytope([(1, 1), (1, -1), (-1, 1), (-1, -1), (0, 0), (1, 0), (1, 1)])
    assert P == SQUARE
    assert P.dropped_points == 2


def test_square_dual_is_diamond():
    assert polar_dual(SQUARE) == DIAMOND
    assert polar_dual(DIAMOND) == SQUARE


def test_polar_dual_requires_interior_origin():
    with pytest.raises(ReflexivityError):
        polar_dual(LatticePolytope([(0, 0), (1, 0), (0, 1)]))


def test_polar_dual_non_integral():
    with pytest.raises(ReflexivityError, match="non-integral"):
        polar_dual(LatticePolytope([(2, 0), (0, 1), (-1, -1)]))


def test_is_reflexive_examples():
    assert is_reflexive(LatticePolytope([(1, 0), (0, 1), (-1, -1)]))
    assert not is_reflexive(LatticePolytope([(2, 0), (0, 1), (-1, -1)]))


def test_square_points():
    pts = enumerate_lattice_points(SQUARE)
    assert len(pts) == 9
    dims = sorted(p.minimal_face_dim for p in pts)
    assert dims == [0] * 4 + [1] * 4 + [2]
    assert [p.point for p in pts] == sorted(p.point for p in pts)
    origin = next(p for p in pts if p.point == (0, 0))
    assert origin.minimal_face_dim == 2


def test_face_lattices():
    assert SQUARE.f_vector == (4, 4)
    simplex = standard_simplex(4)
    assert simplex.f_vector == tuple(comb(5, k + 1) for k in range(4))


def test_interior_counts_square():
    for f in SQUARE.faces_of_dim(0):
        assert interior_point_count(SQUARE, f) == 1
    bottom = SQUARE.face_with_vertices(
        [SQUARE.vertices.index((-1, -1)), SQUARE.vertices.index((1, -1))]
    )
    assert bottom.dim == 1
    assert interior_point_count(SQUARE, bottom) == 1


def test_pair_counts_row1(pairs):
    p = pairs[0]
    assert p.dstar.n_lattice_points == 6
    assert p.delta.n_lattice_points == 26
    assert p.dstar.n_vertices == 5


def test_pair_counts_row14(pairs):
    p = pairs[13]
    assert p.delta.n_lattice_points == 41
    assert p.dstar.n_lattice_points == 9


def corpus():
    polys = [SQUARE, DIAMOND, standard_simplex(4), product(segment(), segment(), segment())]
    polys += reflexive_3d_corpus()[:12]
    return polys


@pytest.mark.parametrize("P", corpus(), ids=lambda P: f"{P.dim}d-{P.n_vertices}v")
def test_reflexive_properties(P):
    assert P.is_reflexive
    assert polar_dual(polar_dual(P)) == P
    interior = [c for c in P.classified_points if c.minimal_face_dim == P.dim]
    assert [c.point for c in interior] == [(0,) * P.dim]
    # points partition by minimal face
    assert P.n_lattice_points == 1 + sum(P.interior_point_count(f) for f in P.faces)
    # Euler relation for the boundary sphere
    assert sum((-1) ** k * f for k, f in enumerate(P.f_vector)) == 1 - (-1) ** P.dim
    # face duality
    Q = polar_dual(P)
    assert P.f_vector == tuple(reversed(Q.f_vector))
    vertex_idx = {v: i for i, v in enumerate(P.vertices)}
    for c in P.classified_points:
        if c.point in vertex_idx:
            assert c.minimal_face_dim == 0


@pytest.mark.parametrize("P", corpus()[:6], ids=lambda P: f"{P.dim}d-{P.n_vertices}v")
def test_dual_face_links(P):
    Q = polar_dual(P)
    for f in face_lattice(P):
        g = dual_face(P, Q, f)
        assert g.dim == P.dim - 1 - f.dim
        for i in f.vertex_indices:
            for j in g.vertex_indices:
                x, y = P.vertices[i], Q.vertices[j]
                assert sum(a * b for a, b in zip(x, y)) == -1


def test_table_polytopes_reflexive(pairs):
    for p in pairs:
        assert p.delta.is_reflexive and p.dstar.is_reflexive
        assert polar_dual(p.delta) == p.dstar
        assert polar_dual(p.dstar) == p.delta


def test_large_coordinates_fall_back_to_exact():
    big = 10**7
    P = LatticePolytope([(big, 0, 0), (0, big, 0), (0, 0, big), (-big, -big, -big)])
    assert len(P.facets) == 4
    assert not P.is_reflexive


def test_pickle_roundtrip(pairs):
    import pickle

    P = pairs[0].delta
    assert pickle.loads(pickle.dumps(P)) == P
