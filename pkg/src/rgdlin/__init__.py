"""Root intervals, root bases and linearity witnesses for RGD systems of rank-3 Coxeter type."""
from __future__ import annotations

__version__ = "0.1.0"

from .qfield import INF, ONE, SQRT2, SQRT3, SQRT6, ZERO, FieldElem, cos_value, field_arith, field_sign
from .coxeter import CoxeterMatrix, CoxeterSystem, Element, Gallery, descent_set, minimal_gallery, reduce_word, system_for
from .roots import (
    Root,
    find_chamber,
    is_positive,
    is_prenilpotent,
    parse_root,
    phi_w,
    reflection_order,
    root_from_expr,
    roots_up_to_depth,
    simple_root,
)
from .bases import RootBasis, basis_act, canonical_basis, check_axioms, gcm_basis, phi, phi_inv, sample_basis
from .intervals import (
    algebraic_interval,
    cone_membership,
    divergence_scan,
    geometric_interval,
    rank2_interval,
)
from .witness import (
    PairExclusion,
    RelationTable,
    SupportExclusion,
    blueprint_444,
    blueprint_universal,
    check_nc,
    check_not_linear,
    trivial_table,
    verify_certificate,
)
