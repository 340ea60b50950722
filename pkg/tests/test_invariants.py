from math import comb

import pytest

from torsionscan.corpus import product, reflexive_polygons, segment, standard_simplex
from torsionscan.errors import ReflexivityError, UnsupportedDimensionError
from torsionscan.invariants import (
    analyze,
    brauer_group,
    codim_filtered_span,
    demeyer_ford_brauer,
    fundamental_group,
    fundamental_group_via_exterior,
    stringy_hodge,
)
from torsionscan.lattice import (
    FiniteAbelianGroup,
    IntegerMatrix,
    SublatticeSpan,
    contains,
    invariant_factor_chain,
    quotient_group,
    smith_normal_form,
)
from torsionscan.polytope import LatticePolytope, dual_face, polar_dual

Z2, Z3, Z5 = (FiniteAbelianGroup((p,)) for p in (2, 3, 5))
TRIVIAL = FiniteAbelianGroup()


def test_codim_span_row1(pairs):
    dstar = pairs[0].dstar
    span = codim_filtered_span(dstar, 1)
    assert sorted(span.generators) == sorted(dstar.vertices)
    assert quotient_group(span).order == 5


def test_codim_filters_nested(pairs, products4):
    for P in [p.dstar for p in pairs] + [p.delta for p in pairs] + products4[:5]:
        n1 = codim_filtered_span(P, 1)
        n2 = codim_filtered_span(P, 2)
        assert set(n2.generators) <= set(n1.generators)
        assert (0, 0, 0, 0) not in n1.generators
        assert quotient_group(n2).order % quotient_group(n1).order == 0


def test_codim_span_needs_reflexive():
    with pytest.raises(ReflexivityError):
        codim_filtered_span(LatticePolytope([(2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                                             (0, 0, 0, 1), (-1, -1, -1, -1)]), 1)


def test_fundamental_group_rows(pairs):
    assert fundamental_group(pairs[0].dstar) == Z5
    assert fundamental_group(pairs[13].dstar) == Z2


def test_quintic_trivial(quintic, quintic_dual):
    # oracle: the vertex matrix of P^4's fan already has unit SNF
    A = IntegerMatrix.from_columns(quintic_dual.vertices, 4)
    assert smith_normal_form(A).diagonal == (1, 1, 1, 1)
    assert fundamental_group(quintic_dual) == TRIVIAL
    assert fundamental_group_via_exterior(quintic_dual) == TRIVIAL
    assert brauer_group(quintic_dual) == TRIVIAL


def test_three_dimensional_trivial():
    for poly in reflexive_polygons()[:8]:
        P = product(poly, segment())
        assert fundamental_group(P) == TRIVIAL
        assert fundamental_group(polar_dual(P)) == TRIVIAL


def test_dimension_guards(quintic_dual):
    square = LatticePolytope([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    with pytest.raises(UnsupportedDimensionError):
        fundamental_group(square)
    with pytest.raises(UnsupportedDimensionError):
        brauer_group(standard_simplex(3))
    with pytest.raises(UnsupportedDimensionError):
        brauer_group(standard_simplex(5))
    with pytest.raises(UnsupportedDimensionError):
        analyze(standard_simplex(3))


def test_stringy_fundamental_group_five_dim():
    assert fundamental_group(standard_simplex(5)) == TRIVIAL


def test_brauer_row1_both_sides(pairs):
    p = pairs[0]
    assert brauer_group(p.dstar) == TRIVIAL
    assert brauer_group(p.delta) == Z5


def test_exterior_route_agrees(pairs):
    for p in pairs:
        for P in (p.dstar, p.delta):
            assert fundamental_group_via_exterior(P) == fundamental_group(P)


def test_demeyer_ford():
    e = [tuple(int(i == j) for j in range(4)) for i in range(4)]
    assert demeyer_ford_brauer(SublatticeSpan(4, e + [(-1, -1, -1, -1)])) == TRIVIAL
    rays = SublatticeSpan(4, [(1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 5, 0), (0, 1, 0, 5)])
    assert invariant_factor_chain(rays) == (1, 1, 5, 5)
    assert demeyer_ford_brauer(rays) == Z5
    # c = (1, 2, 2): only the pair (2, 3) survives
    rays3 = SublatticeSpan(3, [(1, 0, 0), (1, 2, 0), (1, 0, 2)])
    assert invariant_factor_chain(rays3) == (1, 2, 2)
    assert demeyer_ford_brauer(rays3) == Z2
    with pytest.raises(ValueError, match="primitive"):
        demeyer_ford_brauer(SublatticeSpan(2, [(2, 0), (0, 1)]))


def test_hodge_rows(pairs):
    assert stringy_hodge(pairs[0].delta, pairs[0].dstar) == (1, 21)
    assert stringy_hodge(pairs[15].delta, pairs[15].dstar) == (5, 29)


def test_hodge_quintic(quintic, quintic_dual):
    # independent count: lattice points of the 5-fold dilated simplex
    assert quintic.n_lattice_points == comb(9, 4) == 126
    assert stringy_hodge(quintic, quintic_dual) == (1, 101)


def test_row1_facet_interiors(pairs):
    # 26 points of Delta_1, minus 5, minus facet interiors, plus codim-2 products = 21
    delta, dstar = pairs[0].delta, pairs[0].dstar
    facet_sum = sum(delta.interior_point_count(f) for f in delta.faces_of_dim(3))
    codim2 = sum(
        delta.interior_point_count(f) * dstar.interior_point_count(dual_face(delta, dstar, f))
        for f in delta.faces_of_dim(2)
    )
    assert delta.n_lattice_points - 5 - facet_sum + codim2 == 21


def test_analyze_row1(pairs):
    r = analyze(pairs[0].delta)
    assert r.pi1 == Z5 and r.brauer == TRIVIAL
    assert (r.h11, r.h21, r.chi) == (1, 21, -40)
    assert r.counts == (26, 5, 6, 5)
    assert r.A == Z5 and r.B == TRIVIAL
    assert r.tors_even_order == r.tors_odd_order == 5


def test_analyze_row1_mirror(pairs):
    r = analyze(pairs[0].dstar)
    assert r.pi1 == TRIVIAL and r.brauer == Z5
    assert (r.h11, r.h21, r.chi) == (21, 1, 40)


def test_analyze_row9(pairs):
    r = analyze(pairs[8].delta)
    assert r.pi1.order == 2
    assert (r.h11, r.h21, r.chi) == (4, 28, -48)


def test_mirror_hodge_flip(pairs, products4):
    for P in [p.delta for p in pairs[:4]] + products4[:6]:
        a, b = analyze(P), analyze(polar_dual(P))
        assert (a.h11, a.h21) == (b.h21, b.h11)
        assert a.chi == 2 * (a.h11 - a.h21)


def test_structure_c1_c2(pairs, products4):
    for P in [p.dstar for p in pairs] + [p.delta for p in pairs] + products4:
        chain = invariant_factor_chain(codim_filtered_span(P, 2))
        assert chain[:2] == (1, 1)
        assert brauer_group(P) == FiniteAbelianGroup.from_cyclic_orders([chain[2]])


def test_2v_rule_spans(pairs):
    # Rows 4, 9, 15, 16 need 2v; all other rows are generated by vertices.
    for p in pairs:
        span = codim_filtered_span(p.dstar, 1)
        by_vertices = SublatticeSpan(4, p.dstar.vertices)
        if p.label in (4, 9, 15, 16):
            assert not all(contains(by_vertices, g) for g in span.generators)
        else:
            assert all(contains(by_vertices, g) for g in span.generators)
