"""Union-free codes with fast decoding for non-adaptive group testing."""

from .core import (
    CodeMatrix,
    ConstructionError,
    InputError,
    Outcome,
    ResourceCapError,
    boolean_sum,
    covers,
    outcome_for_set,
    weight,
)
from .verify import (
    PropertyReport,
    check_structure_props,
    cover_cap_ok,
    integer_root,
    is_disjunctive,
    is_list_decoding,
    is_ssm,
    is_uffd,
    is_union_free,
)
from .decode import (
    DecodeResult,
    TrialSummary,
    brute_uf_decode,
    comp_decode,
    dd_decode,
    decode,
    simulate_trials,
    uffd_decode,
)
from .ensembles import EnsembleSpec, construct, purify, purify_disjunctive, random_matrix, remove_bad_columns
from .bounds import (
    AlphaPoint,
    BoundResult,
    Grid,
    asymptotic_check,
    beta,
    bound,
    bound_disjunctive,
    bound_eq,
    bound_le,
    entropy,
    exponent_A,
    f_bin_h,
    g_list,
    g_pair,
    invert_q,
    rate_r1,
    rate_r2,
    weight_dist,
)
from .tables import compute_tables, emit_tables

__version__ = "0.1.0"
