"""Finite closure systems: implicational bases, ordered direct bases, closure algorithms."""
from .bases import (
    DCycleError,
    OrderedSequence,
    RankTable,
    SearchCapExceeded,
    aggregate,
    binary_first,
    build_d_basis,
    build_d_plus,
    build_dg_canonical,
    build_e_basis,
    build_sigma_delta,
    d_cycles,
    d_ranks,
    extract_d_basis,
    find_ordered_direct_ordering,
    is_ordered_direct,
    optimize_binary,
    order_is_valid_d,
    ordered_direct_witness,
    redundant_implications,
    unit_expansion,
)
from .closure import (
    ForwardChainingState,
    WildState,
    folklore_closure,
    forward_chaining_closure,
    ordered_iteration,
    wild_closure,
)
from .core import (
    AGGREGATED,
    UNIT,
    Basis,
    ClosureResult,
    ClosureSystem,
    Implication,
    NotReduced,
    Universe,
    UniverseTooLarge,
    basis_size,
    consequence_holds,
    definite_completion,
    phi_closure,
    respects,
    system_from_basis,
    system_from_generators,
)
from .reduction import ReductionMap, is_reduced, is_standard, reduce_system, standardize_system
from .structure import (
    CoverTable,
    build_cover_table,
    class_minimum,
    covers_of,
    element_poset,
    extreme_points,
    is_convex_geometry,
    is_quasi_closed,
    ll_refines,
    minimal_covers,
)

__version__ = "0.1.0"
