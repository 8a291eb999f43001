"""Exact tools for 2x2x2 correlation boxes and the dimension of their hidden-variable models."""

from .boxes import (
    Box222,
    DetStrategy,
    LroRelabeling,
    SingleTable,
    STRATEGIES,
    bb84_box,
    box_from_json,
    correlator,
    deterministic_box,
    example2_box,
    is_no_signalling,
    lro_apply,
    make_box,
    marginal_alice,
    marginal_bob,
    maximally_mixed_box,
    mix,
    pr_box,
    product_box,
)
from .decomposition import (
    AliceAssignment,
    DimensionReport,
    Grouping,
    LhvLhsModel,
    bb84_four_model,
    dlhv_feasible,
    dlhvlhs_feasible,
    example2_three_model,
    example2_two_model,
    is_super_unsteerable,
    is_superlocal,
    merge_equal_bob_tables,
    min_dim_lhv,
    min_dim_lhvlhs,
    verify_model,
)
from .inequalities import chsh_max, chsh_value, is_bell_local_lp, is_unsteerable_mub, steering_functional
from .quantum import born_box, erasure_povms, erasure_state, example2_state, qubit_pair, werner_state
from .realizability import is_mub_realizable, mub_disc, reconstruct_pure_state
from .solver import Certificate, disc_feasibility, lp_feasible_exact, solve_linear_exact

__version__ = "0.1.0"
