"""Weighted automata over the rationals: evaluation, equivalence,
minimization, learning and conformance testing."""

from .learning import (
    WfaTable,
    exact_wfa_equivalence,
    run_wfa_id,
    run_wfa_lstar,
    wfa_access_and_separators,
    wfa_testing_eq_oracle,
    wfa_w_method,
)
from .linalg import RowBasis, in_span, rank, solve_coords
from .wfa import (
    Wfa,
    direct_sum,
    parse_wfa,
    random_wfa,
    reverse,
    scale_output,
    serialize_wfa,
    wfa_equiv,
    wfa_eval,
    wfa_minimize,
    zero_wfa,
)
