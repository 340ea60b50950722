"""Torsion invariants of Calabi-Yau hypersurfaces from reflexive polytopes.

Conventions: ``Delta`` lives in M and is the Newton polytope of the
hypersurface, ``Dstar`` is its polar dual in N whose boundary points give
the rays of a crepant resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InternalConsistencyError, UnsupportedDimensionError
from .lattice import (
    FiniteAbelianGroup,
    SublatticeSpan,
    exterior_square_from_chain,
    invariant_factor_chain,
    kernel_basis,
    maximal_minors,
    quotient_group,
    wedge_square_quotient,
)
from .polytope import LatticePolytope, dual_face, polar_dual

K_THEORY_NOTE = "tors K0/K1 orders only; the extension class is undetermined"
STRINGY_NOTE = "stringy fundamental group candidate"


def codim_filtered_span(Dstar: LatticePolytope, k: int) -> SublatticeSpan:
    """Span of the lattice points of ``Dstar`` on faces of codimension > k.

    k = 1 gives N' (fundamental group), k = 2 gives N'' (Brauer group).
    """
    Dstar.require_reflexive()
    d = Dstar.dim
    if not 1 <= k < d:
        raise ValueError(f"codimension filter k={k} out of range for d={d}")
    gens = [c.point for c in Dstar.classified_points if c.minimal_face_dim <= d - k - 1]
    return SublatticeSpan(d, tuple(gens))


def fundamental_group(Dstar: LatticePolytope) -> FiniteAbelianGroup:
    """N / N' for the resolved hypersurface in the toric variety of ``Dstar``'s fan.

    For d >= 5 the result is only a candidate stringy fundamental group.
    """
    if Dstar.dim < 3:
        raise UnsupportedDimensionError("fundamental group needs d >= 3")
    g = quotient_group(codim_filtered_span(Dstar, 1))
    if Dstar.dim == 4 and not g.is_cyclic:
        raise InternalConsistencyError(f"non-cyclic fundamental group {g} in dimension 4")
    return g


def fundamental_group_via_exterior(Dstar: LatticePolytope) -> FiniteAbelianGroup:
    """Torsion of the cokernel of the sum of Lambda^{d-1} M_v -> Lambda^{d-1} M.

    M_v is the annihilator of v in M; each summand is rank one and its image
    is the wedge of a kernel basis, expressed through (d-1)-minors.
    """
    if Dstar.dim < 3:
        raise UnsupportedDimensionError("fundamental group needs d >= 3")
    d = Dstar.dim
    images = []
    for v in codim_filtered_span(Dstar, 1).generators:
        basis = kernel_basis(v)
        images.append(maximal_minors(basis, d))
    return quotient_group(SublatticeSpan(d, tuple(images))).torsion


def _require_brauer_dim(Dstar: LatticePolytope):
    if Dstar.dim < 4:
        raise UnsupportedDimensionError("Brauer group formula needs d >= 4")
    if Dstar.dim > 4:
        raise UnsupportedDimensionError(
            "Brauer group is only computed for d = 4; the cyclicity statements are not extrapolated"
        )


def brauer_group(Dstar: LatticePolytope) -> FiniteAbelianGroup:
    """Hom(Lambda^2 N / (N ^ N''), Q/Z), reported as the isomorphic group."""
    _require_brauer_dim(Dstar)
    span = codim_filtered_span(Dstar, 2)
    g = wedge_square_quotient(Dstar.dim, span).dual()
    chain = invariant_factor_chain(span)
    if chain[0] != 1 or chain[1] != 1:
        raise InternalConsistencyError(f"N/N'' has chain {chain}, expected c1 = c2 = 1")
    expected = FiniteAbelianGroup.from_cyclic_orders([chain[2]])
    if g != expected or not g.is_cyclic:
        raise InternalConsistencyError(f"Brauer group {g} differs from Z/c3 = {expected}")
    return g


def demeyer_ford_brauer(rays: SublatticeSpan) -> FiniteAbelianGroup:
    """Brauer group of a smooth toric variety from its rays: sum_{i<j} Z/c_i."""
    if rays.ambient_rank < 2:
        raise ValueError("ambient rank must be at least 2")
    for r in rays.generators:
        if gcd(*r) != 1:
            raise ValueError(f"ray {r} is not primitive")
    return exterior_square_from_chain(invariant_factor_chain(rays))


def _hodge_side(P: LatticePolytope, Pdual: LatticePolytope) -> int:
    d = P.dim
    total = P.n_lattice_points - (d + 1)
    total -= sum(P.interior_point_count(f) for f in P.faces_of_dim(d - 1))
    total += sum(
        P.interior_point_count(f) * Pdual.interior_point_count(dual_face(P, Pdual, f))
        for f in P.faces_of_dim(d - 2)
    )
    return total


def stringy_hodge(Delta: LatticePolytope, Dstar: LatticePolytope) -> tuple[int, int]:
    """(h11, h21) of the crepant resolution of the hypersurface for Delta."""
    if Delta.dim != 4 or Dstar.dim != 4:
        raise UnsupportedDimensionError("Hodge numbers are computed for d = 4 only")
    Delta.require_reflexive()
    Dstar.require_reflexive()
    return _hodge_side(Dstar, Delta), _hodge_side(Delta, Dstar)


@dataclass(frozen=True)
class TorsionReport:
    pi1: FiniteAbelianGroup
    brauer: FiniteAbelianGroup
    A: FiniteAbelianGroup
    B: FiniteAbelianGroup
    h11: int
    h21: int
    chi: int
    counts: tuple[int, int, int, int]
    tors_even_order: int
    tors_odd_order: int
    notes: tuple[str, ...] = field(default=(K_THEORY_NOTE,))

    def __post_init__(self):
        if self.chi != 2 * (self.h11 - self.h21):
            raise InternalConsistencyError("chi != 2 (h11 - h21)")
        if self.A != self.pi1.dual():
            raise InternalConsistencyError("A(X) differs from the dual of pi1")
        if not self.tors_even_order == self.tors_odd_order == self.A.order * self.B.order:
            raise InternalConsistencyError("torsion orders disagree with |A| |B|")


def analyze(Delta: LatticePolytope) -> TorsionReport:
    """Assemble every invariant of the hypersurface with Newton polytope ``Delta``."""
    if Delta.dim != 4:
        raise UnsupportedDimensionError(f"analyze needs d = 4, got d = {Delta.dim}")
    Delta.require_reflexive()
    Dstar = polar_dual(Delta)
    pi1 = fundamental_group(Dstar)
    br = brauer_group(Dstar)
    h11, h21 = stringy_hodge(Delta, Dstar)
    A, B = pi1.dual(), br
    tors = A.order * B.order
    return TorsionReport(
        pi1=pi1,
        brauer=br,
        A=A,
        B=B,
        h11=h11,
        h21=h21,
        chi=2 * (h11 - h21),
        counts=(Delta.n_lattice_points, Delta.n_vertices, Dstar.n_lattice_points, Dstar.n_vertices),
        tors_even_order=tors,
        tors_odd_order=tors,
    )
