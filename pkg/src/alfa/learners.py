"""DFA learners built from observation tables and classification trees.

All learners take a membership oracle (see :mod:`alfa.oracle`); ``run_lstar``
and ``run_kv`` also take an equivalence oracle, any callable mapping a
hypothesis DFA to ``None`` or a counterexample word.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .dfa import Dfa, dfa_equiv
from .errors import InputError, InvariantViolation, LearningError, PreconditionError
from .oracle import QueryLog
from .table import ObservationTable
from .tree import ClassificationTree
from .words import Word, format_word, prefixes, words_up_to

ALGORITHMS = ("lstar", "kv", "id", "az", "dual-id")
DEFAULT_MAX_ROUNDS = 1000

EquivalenceOracle = Callable[[Dfa], Optional[Word]]


@dataclass
class LearnerConfig:
    algorithm: str
    bound: int | None = None
    given_S: Sequence[Word] | None = None
    given_E: Sequence[Word] | None = None
    max_equivalence_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InputError(f"unknown algorithm {self.algorithm!r}")
        if self.bound is not None and self.bound < 1:
            raise InputError("bound must be a positive integer")
        if self.max_equivalence_rounds < 1:
            raise InputError("max_equivalence_rounds must be positive")
        if self.algorithm == "az" and self.bound is None:
            raise InputError("az needs a state bound n")
        if self.algorithm == "id" and not self.given_S:
            raise InputError("id needs a given set S")
        if self.algorithm == "dual-id" and not self.given_E:
            raise InputError("dual-id needs a given set E")


@dataclass
class LearnResult:
    hypothesis: object
    log: QueryLog
    rounds: int = 0
    trace: list = field(default_factory=list)
    # per-round size after counterexample processing (progress check)
    sizes: list = field(default_factory=list)
    # (wire queries, |S ∪ S·A|) for each consistency fix of a tree learner
    split_costs: list = field(default_factory=list)
    structure: object = None


def exact_equivalence(target: Dfa) -> EquivalenceOracle:
    """White-box equivalence oracle returning shortest counterexamples."""

    def eq(hypothesis: Dfa):
        return dfa_equiv(hypothesis, target)

    return eq


def run_id(mq, given_S: Sequence[Word], trace: bool = False) -> LearnResult:
    table = ObservationTable(mq.alphabet, S=[tuple(s) for s in given_S])
    log = [] if trace else None
    with mq.in_phase("fill"):
        table.fill(mq)
    with mq.in_phase("fix"):
        table.fix(mq, closedness=False, trace=log)
    t = table.closedness_defect()
    if t is not None:
        raise LearningError(
            f"given S does not reach every state: row {table.row(t)} of "
            f"{format_word(t)!r} is not the row of any word in S"
        )
    return LearnResult(table.hypothesis(), mq.log, 0, [] if log is None else log, structure=table)


def run_dual_id(mq, given_E: Sequence[Word], trace: bool = False) -> LearnResult:
    table = ObservationTable(mq.alphabet, E=[tuple(e) for e in given_E])
    log = [] if trace else None
    with mq.in_phase("fill"):
        table.fill(mq)
    with mq.in_phase("fix"):
        table.fix(mq, consistency=False, trace=log)
    v = table.consistency_defect()
    if v is None:
        v = _extension_consistency_defect(table, mq)
    if v is not None:
        raise LearningError(
            f"given E does not separate all states: suffix {format_word(v)!r} "
            "distinguishes two words with equal rows"
        )
    return LearnResult(table.hypothesis(), mq.log, 0, [] if log is None else log, structure=table)


def _extension_consistency_defect(table: ObservationTable, mq) -> Word | None:
    """Consistency check widened to pairs (s, t) with t in S·A.

    When E separates all states, equal rows mean equal states, so
    row(s·a) = row(t·a) must hold for these pairs as well.
    """
    by_row = {}
    for s in table.S:
        by_row.setdefault(table.row(s), s)
    with mq.in_phase("fix"):
        for t in table.extensions():
            s = by_row[table.row(t)]
            if s == t:
                continue
            for a in table.alphabet:
                for e in table.E:
                    if table.cells[(s + (a,), e)] != mq.query(t + (a,) + e):
                        return (a,) + e
    return None


def run_az(mq, n: int, trace: bool = False) -> LearnResult:
    if n < 1:
        raise InputError("az needs n >= 1")
    words = words_up_to(mq.alphabet, n - 1)
    table = ObservationTable(mq.alphabet, S=words, E=words)
    with mq.in_phase("fill"):
        table.fill(mq)
    try:
        hyp = table.hypothesis()
    except PreconditionError as exc:
        raise InvariantViolation(f"table over A^<={n - 1} has a defect ({exc}); is n too small?") from exc
    return LearnResult(hyp, mq.log, 0, [table.dump()] if trace else [], structure=table)


def _round_cap(max_rounds):
    raise LearningError(
        f"no convergence after {max_rounds} equivalence queries; is the equivalence oracle faulty?"
    )


def run_lstar(mq, eq: EquivalenceOracle, max_rounds: int = DEFAULT_MAX_ROUNDS, trace: bool = False) -> LearnResult:
    table = ObservationTable(mq.alphabet)
    log = [] if trace else None
    result = LearnResult(None, mq.log, 0, [] if log is None else log, structure=table)
    with mq.in_phase("fill"):
        table.fill(mq)
    previous = 0
    while True:
        with mq.in_phase("fix"):
            table.fix(mq, trace=log)
        size = table.distinct_rows()
        if size <= previous:
            raise InvariantViolation(
                f"distinct rows did not grow after a counterexample ({previous} -> {size})"
            )
        result.sizes.append(size)
        previous = size
        hyp = table.hypothesis()
        if result.rounds >= max_rounds:
            _round_cap(max_rounds)
        result.rounds += 1
        mq.log.equivalence_rounds += 1
        z = eq(hyp.dfa)
        if z is None:
            result.hypothesis = hyp
            if log is not None:
                log.append(table.dump())
            return result
        if log is not None:
            log.append(f"counterexample: {format_word(z)}")
        with mq.in_phase("fill"):
            table.add_prefixes(prefixes(tuple(z)))
            table.fill(mq)


def run_kv(mq, eq: EquivalenceOracle, max_rounds: int = DEFAULT_MAX_ROUNDS, trace: bool = False) -> LearnResult:
    tree = ClassificationTree(mq.alphabet, mq)
    log = [] if trace else None
    result = LearnResult(None, mq.log, 0, [] if log is None else log, structure=tree)

    def on_split(t, cost):
        result.split_costs.append((cost, len(set(t.S) | {s + (a,) for s in t.S for a in t.alphabet})))

    previous = 0
    while True:
        with mq.in_phase("fix"):
            tree.fix(trace=log, on_split=on_split)
        size = tree.nonempty_leaves()
        if size <= previous:
            raise InvariantViolation(
                f"nonempty leaves did not grow after a counterexample ({previous} -> {size})"
            )
        result.sizes.append(size)
        previous = size
        hyp = tree.hypothesis()
        if result.rounds >= max_rounds:
            _round_cap(max_rounds)
        result.rounds += 1
        mq.log.equivalence_rounds += 1
        z = eq(hyp.dfa)
        if z is None:
            result.hypothesis = hyp
            if log is not None:
                log.append(tree.dump())
            return result
        if log is not None:
            log.append(f"counterexample: {format_word(z)}")
        with mq.in_phase("fill"):
            for p in prefixes(tuple(z)):
                tree.add_to_s(p)


def learn(config: LearnerConfig, mq, eq: EquivalenceOracle | None = None, trace: bool = False) -> LearnResult:
    algo = config.algorithm
    if algo == "id":
        return run_id(mq, config.given_S, trace)
    if algo == "dual-id":
        return run_dual_id(mq, config.given_E, trace)
    if algo == "az":
        return run_az(mq, config.bound, trace)
    if eq is None:
        raise InputError(f"{algo} needs an equivalence oracle")
    runner = run_lstar if algo == "lstar" else run_kv
    return runner(mq, eq, config.max_equivalence_rounds, trace)
