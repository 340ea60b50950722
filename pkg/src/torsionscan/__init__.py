"""Torsion in the cohomology of toric Calabi-Yau hypersurfaces."""

from .dataset import (
    MirrorPair,
    RelationSpec,
    build_from_relations,
    scan,
    table16,
    verify_comb_dual,
    verify_tor_dual,
)
from .invariants import (
    TorsionReport,
    analyze,
    brauer_group,
    codim_filtered_span,
    demeyer_ford_brauer,
    fundamental_group,
    fundamental_group_via_exterior,
    stringy_hodge,
)
from .lattice import (
    FiniteAbelianGroup,
    IntegerMatrix,
    SmithDecomposition,
    SublatticeSpan,
    lattice_basis,
    quotient_group,
    smith_normal_form,
    wedge_square_quotient,
)
from .polytope import LatticePolytope, is_reflexive, polar_dual

__version__ = "0.1.0"
