"""Active automata learning, minimization and conformance testing for DFAs
and rational weighted automata."""

from .conformance import TestSuite, Verdict, hsi_suite, run_suite, testing_eq_oracle, w_method_suite
from .dfa import (
    Dfa,
    canonical,
    complement,
    dfa_equiv,
    dfa_isomorphic,
    eval_dfa,
    parse_dfa,
    random_dfa,
    serialize_dfa,
)
from .errors import (
    AutomataError,
    BoundViolated,
    FormatError,
    InputError,
    InvariantViolation,
    LearningError,
    OracleError,
    PreconditionError,
    SetupError,
    TransportError,
)
from .learners import LearnerConfig, LearnResult, exact_equivalence, learn, run_az, run_dual_id, run_id, run_kv, run_lstar
from .minimization import minimize, moore_merge, reachable_part, splitting_tree, splitting_tree_minimize
from .oracle import DfaOracle, FunctionOracle, MembershipOracle, ProcessOracle, QueryLog, TcpOracle, WfaOracle
from .table import Hypothesis, ObservationTable
from .tree import ClassificationTree, ClosednessDefect, ConsistencyDefect
from .words import format_word, parse_word

__version__ = "0.1.0"
