"""Exact controllability analysis of discrete-time switched linear control systems.

A switched linear control system x_k = A_{i_k} x_{k-1} + B_{i_k} u_k picks
both the mode i_k and the input u_k at each step.  This package decides
controllability exactly (rational arithmetic throughout), computes the
reachable space as the fixed point of a subspace recursion, finds shortest
controllable switching sequences by breadth-first search over a canonical
subspace automaton, generates extremal families attaining the known
worst-case lengths, and certifies lower bounds with coordinate weight
functions.
"""

from .linalg import (
    Matrix,
    Rational,
    ShapeError,
    Subspace,
    apply_map,
    column_space,
    contains,
    equals,
    is_invertible,
    rref,
    subspace_sum,
)
from .model import (
    Mode,
    ModeSequence,
    SwitchedSystem,
    SystemFormatError,
    RegularizationError,
    ValidityReport,
    feedback_regularize,
    format_sequence,
    load_system,
    make_system,
    parse_sequence,
    save_system,
    validate,
)
from .reachability import (
    SingularModeError,
    TermBudgetError,
    VChain,
    concat_identity_check,
    evolution_matrix,
    ge_characterization,
    is_controllable,
    reachable_set,
    reachable_space_of_sequence,
    v_chain,
)
from .search import (
    SearchResult,
    SearchStatus,
    StateBudgetError,
    SubspaceAutomaton,
    build_automaton,
    export_dot,
    greedy_controllable_sequence,
    shortest_controllable_sequences,
    sound_depth_cap,
)
from .extremal import (
    CertificateError,
    CertificateReport,
    canonical_weights,
    cyclic_matrix,
    expected_length,
    family_a,
    family_a_length,
    family_degenerate,
    family_degenerate_length,
    family_degenerate_rank,
    family_degenerate_rank_length,
    family_rank,
    family_rank_length,
    generate_family,
    verify_weight_certificate,
)
from .reduction import (
    BlockTransform,
    ReducedSystem,
    ReductionError,
    find_block_transform,
    find_common_transform,
    reduce_rank_system,
)
from .bounds import (
    BoundExperimentConfig,
    BoundReport,
    run_bound_experiment,
    sample_system,
)

__version__ = "0.1.0"

__all__ = [
    "Matrix",
    "Rational",
    "ShapeError",
    "Subspace",
    "apply_map",
    "column_space",
    "contains",
    "equals",
    "is_invertible",
    "rref",
    "subspace_sum",
    "Mode",
    "ModeSequence",
    "SwitchedSystem",
    "SystemFormatError",
    "RegularizationError",
    "ValidityReport",
    "feedback_regularize",
    "format_sequence",
    "load_system",
    "make_system",
    "parse_sequence",
    "save_system",
    "validate",
    "SingularModeError",
    "TermBudgetError",
    "VChain",
    "concat_identity_check",
    "evolution_matrix",
    "ge_characterization",
    "is_controllable",
    "reachable_set",
    "reachable_space_of_sequence",
    "v_chain",
    "SearchResult",
    "SearchStatus",
    "StateBudgetError",
    "SubspaceAutomaton",
    "build_automaton",
    "export_dot",
    "greedy_controllable_sequence",
    "shortest_controllable_sequences",
    "sound_depth_cap",
    "CertificateError",
    "CertificateReport",
    "canonical_weights",
    "cyclic_matrix",
    "expected_length",
    "family_a",
    "family_a_length",
    "family_degenerate",
    "family_degenerate_length",
    "family_degenerate_rank",
    "family_degenerate_rank_length",
    "family_rank",
    "family_rank_length",
    "generate_family",
    "verify_weight_certificate",
    "BlockTransform",
    "ReducedSystem",
    "ReductionError",
    "find_block_transform",
    "find_common_transform",
    "reduce_rank_system",
    "BoundExperimentConfig",
    "BoundReport",
    "run_bound_experiment",
    "sample_system",
]
