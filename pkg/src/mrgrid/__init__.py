"""Maximally recoverable grid codes at desk scale.

Construct (m, n, h) grid codes over small finite fields, verify maximal
recoverability by independent routes, decode erasures, apply constructive
reductions, and search exhaustively for minimum field sizes.
"""

from .errors import CapExceededError, InconsistentWordError, NotCorrectableError
from .field import FieldElement, FieldSpec, make_field, moore_matrix
from .gridcode import (
    GridCode,
    build_parity_matrix,
    cycle_sum,
    cycle_sum_raw,
    from_json_dict,
    load_code,
    restrict,
    save_code,
    to_json_dict,
)
from .gridgraph import (
    CycleRep,
    Pattern,
    circuit_rank,
    cycle_union_size,
    enumerate_spanning_trees,
    fundamental_cycle,
    is_regular,
    random_spanning_tree,
    spanning_tree_count,
)
from .linalg import MatrixGF
from .constructions import (
    BchSpec,
    GammaLabeling,
    ap3_free_set,
    bch_columns,
    bootstrap_h1,
    construct_ap3,
    construct_bch_simple,
    construct_bch_zero,
    construct_binary,
    gabidulin_lift,
)
from .verifier import (
    FailureWitness,
    MrReport,
    SearchOutcome,
    check_cycle_family,
    is_mr_cycle_criterion,
    is_mr_cycle_space,
    is_mr_rank_oracle,
    min_field_size_search,
    recheck_witness,
    verify_mr,
)
from .reductions import ProjectionMap, projection_with_kernel, reduce_box, reduce_monotone
from .decoder import Codeword, PartialWord, erase, random_codeword, recover

__version__ = "0.1.0"
