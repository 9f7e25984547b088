"""Classical and quantum symmetry structures of finite multigraphs."""

from .multigraph import (
    Edge,
    Multigraph,
    MultigraphError,
    NotUndirectedError,
    ValidationReport,
    adjacency_matrix,
    canonical_edge_representation,
    path_classes,
    underlying_undirected_multigraph,
    underlying_weighted_graph,
    undirected_edge_classes,
    uniform_decompose,
    validate,
)
from .classical import (
    AutomorphismGroup,
    MultigraphAutomorphism,
    SizeGuardError,
    brute_force_oracle,
    compose,
    enumerate_automorphisms,
    enumerate_vertex_symmetries,
    identity_automorphism,
    invert,
    order_formula,
)
from .ncpoly import (
    GQ,
    Relation,
    Sym,
    eval_boolean_commutative,
    eval_matrix,
    substitute,
)
from .presentations import (
    Presentation,
    PresentationError,
    bimodule_relations,
    coproduct_table,
    derived_vertex_relations,
    emit_presentation,
    resolve_kind,
)
from .abelianization import (
    ClassicalPoint,
    classical_points,
    match_against_aut,
    point_to_automorphism,
)
from .matrixreps import (
    MagicUnitaryRep,
    block_invariance_check,
    build_wreath_rep,
    default_wreath_rep,
    derived_vertex_matrix,
    example_square_witness,
    rep_from_automorphism,
    st_form_check,
    verify_rep,
)
from .cstar import (
    CKFamily,
    CyclicGraphError,
    build_ck_family,
    coaction_matrices,
    verify_ck_coaction,
    verify_correspondence_covariance,
)

__version__ = "0.1.0"
