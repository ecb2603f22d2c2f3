"""Observation tables, learners and test suites for weighted automata.

Closedness is a span check on rows.  Consistency is enforced by closing the
transposed table (rows ``rev(E)``, columns ``rev(S)``, language reversed):
its rows are the columns of the original top matrix, and its one-symbol
extension ``(e, a)`` is the column ``L(s·a·e)`` over ``s`` in S.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..conformance import TestSuite, _ordered
from ..errors import BoundViolated, InvariantViolation, LearningError, PreconditionError
from ..learners import DEFAULT_MAX_ROUNDS, LearnResult, _round_cap
from ..words import EMPTY, Word, concat_sets, format_word, prefixes, words_up_to
from .linalg import RowBasis, rank
from .wfa import Wfa, backward_basis, forward_basis, wfa_equiv, wfa_minimize, zero_wfa


@dataclass
class WfaTable:
    alphabet: tuple
    S: list = field(default_factory=lambda: [EMPTY])
    E: list = field(default_factory=lambda: [EMPTY])
    values: dict = field(default_factory=dict)  # full word -> value

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        S, E = list(self.S), list(self.E)
        self.S, self.E = [], []
        self.add_prefixes([EMPTY] + S)
        self.add_suffixes([EMPTY] + E)

    def add_prefixes(self, words):
        added = [w for w in dict.fromkeys(map(tuple, words)) if w not in self.S]
        self.S.extend(added)
        return added

    def add_suffixes(self, words):
        added = [w for w in dict.fromkeys(map(tuple, words)) if w not in self.E]
        self.E.extend(added)
        return added

    def fill(self, oracle) -> int:
        filled = 0
        values = self.values
        rows = list(self.S) + [s + (a,) for s in self.S for a in self.alphabet]
        for u in rows:
            for e in self.E:
                w = u + e
                if w not in values:
                    values[w] = oracle.query(w)
                    filled += 1
        return filled

    def value(self, w: Word):
        try:
            return self.values[w]
        except KeyError:
            raise PreconditionError(f"value of {format_word(w)!r} not filled") from None

    def row(self, u: Word) -> tuple:
        return tuple(self.value(u + e) for e in self.E)

    @property
    def top(self) -> list:
        return [self.row(s) for s in self.S]

    def bottom(self, a: str) -> list:
        return [self.row(s + (a,)) for s in self.S]

    def init_row(self) -> tuple:
        return tuple(self.value(e) for e in self.E)

    def out_column(self) -> tuple:
        return tuple(self.value(s) for s in self.S)

    def rank(self) -> int:
        return rank(self.top)

    def _row_basis(self) -> RowBasis:
        basis = RowBasis(len(self.E))
        for r in self.top:
            basis.add(r)
        return basis

    def closedness_defect(self):
        """First ``(s, a)`` whose row lies outside the span of the S rows."""
        basis = self._row_basis()
        for s in self.S:
            for a in self.alphabet:
                if not basis.contains(self.row(s + (a,))):
                    return s, a
        return None

    def transpose_init_defect(self) -> bool:
        """True when the transposed table is not init-closed, i.e. the
        output column is outside the column span of the top matrix."""
        return not self._column_basis().contains(self.out_column())

    def _column_basis(self) -> RowBasis:
        basis = RowBasis(len(self.S))
        for e in self.E:
            basis.add(tuple(self.value(s + e) for s in self.S))
        return basis

    def transpose_closedness_defect(self):
        """First ``(e, a)`` (E order, then alphabet) such that the column
        ``L(s·a·e)`` is outside the column span of the top matrix."""
        basis = self._column_basis()
        for e in self.E:
            for a in self.alphabet:
                column = tuple(self.value(s + (a,) + e) for s in self.S)
                if not basis.contains(column):
                    return e, a
        return None

    def consistency_defect(self) -> Word | None:
        """Suffix to add to E, or None when the transpose is closed."""
        d = self.transpose_closedness_defect()
        if d is None:
            if self.transpose_init_defect():
                return EMPTY  # unreachable while EMPTY is in E
            return None
        e, a = d
        return (a,) + e

    def fix(self, oracle, closedness=True, consistency=True, trace=None) -> int:
        fixes = 0
        self.fill(oracle)
        while True:
            if closedness:
                d = self.closedness_defect()
                if d is not None:
                    s, a = d
                    self.add_prefixes([s + (a,)])
                    if trace is not None:
                        trace.append(f"closedness defect: add {format_word(s + (a,))} to S")
                    self.fill(oracle)
                    fixes += 1
                    continue
            if consistency:
                v = self.consistency_defect()
                if v is not None:
                    self.add_suffixes([v])
                    if trace is not None:
                        trace.append(f"transpose closedness defect: add {format_word(v)} to E")
                    self.fill(oracle)
                    fixes += 1
                    continue
            return fixes

    def hypothesis(self) -> Wfa:
        d = self.closedness_defect()
        if d is not None:
            raise PreconditionError(f"table not closed at {format_word(d[0] + (d[1],))!r}", d)
        v = self.consistency_defect()
        if v is not None:
            raise PreconditionError(f"table not consistent: suffix {format_word(v)!r} missing from E", v)
        basis = RowBasis(len(self.E))
        reps = [s for s in self.S if basis.add(self.row(s))]
        if not reps:
            return zero_wfa(self.alphabet)
        init = basis.coords(self.init_row())
        trans = {a: [basis.coords(self.row(b + (a,))) for b in reps] for a in self.alphabet}
        out = [self.value(b) for b in reps]
        return Wfa(self.alphabet, init, trans, out)

    def dump(self) -> str:
        from .wfa import format_rational

        lines = ["\t" + "\t".join(format_word(e) for e in self.E)]
        labels = list(self.S) + [s + (a,) for s in self.S for a in self.alphabet if s + (a,) not in self.S]
        for u in labels:
            cells = [format_rational(self.values[u + e]) if u + e in self.values else "?" for e in self.E]
            lines.append(format_word(u) + "\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"


def exact_wfa_equivalence(target: Wfa):
    def eq(hypothesis: Wfa):
        found = wfa_equiv(hypothesis, target)
        return None if found is None else found[0]

    return eq


def run_wfa_lstar(mq, eq, max_rounds: int = DEFAULT_MAX_ROUNDS, trace: bool = False) -> LearnResult:
    table = WfaTable(mq.alphabet)
    log = [] if trace else None
    result = LearnResult(None, mq.log, 0, [] if log is None else log, structure=table)
    with mq.in_phase("fill"):
        table.fill(mq)
    previous = -1
    while True:
        with mq.in_phase("fix"):
            table.fix(mq, trace=log)
        r = table.rank()
        if r <= previous:
            raise InvariantViolation(f"rank did not grow after a counterexample ({previous} -> {r})")
        result.sizes.append(r)
        previous = r
        hyp = table.hypothesis()
        if result.rounds >= max_rounds:
            _round_cap(max_rounds)
        result.rounds += 1
        mq.log.equivalence_rounds += 1
        z = eq(hyp)
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


def run_wfa_id(mq, given_S, trace: bool = False) -> LearnResult:
    table = WfaTable(mq.alphabet, S=[tuple(s) for s in given_S])
    log = [] if trace else None
    with mq.in_phase("fill"):
        table.fill(mq)
    with mq.in_phase("fix"):
        table.fix(mq, closedness=False, trace=log)
    d = table.closedness_defect()
    if d is not None:
        s, a = d
        raise LearningError(
            f"given S does not span the reachable space: row of {format_word(s + (a,))!r} "
            "is not a combination of rows of S"
        )
    return LearnResult(table.hypothesis(), mq.log, 0, [] if log is None else log, structure=table)


def wfa_access_and_separators(u: Wfa) -> tuple[Wfa, list, list]:
    """Minimize ``u`` and return it with spanning access words and
    separating suffixes (each list starts with the empty word)."""
    m = wfa_minimize(u)
    S, _ = forward_basis(m)
    E, _ = backward_basis(m)
    S = list(dict.fromkeys([EMPTY] + S))
    E = list(dict.fromkeys([EMPTY] + E))
    return m, S, E


def wfa_w_method(u: Wfa, n: int) -> TestSuite:
    m, S, E = wfa_access_and_separators(u)
    if n < m.dim:
        raise BoundViolated(f"bound {n} is below the minimal dimension {m.dim}")
    s_prime = concat_sets(S, words_up_to(u.alphabet, n - m.dim))
    s_prime_a = concat_sets(s_prime, [(a,) for a in u.alphabet])
    words = concat_sets(s_prime, E) | set(E) | concat_sets(s_prime_a, E) | s_prime
    return TestSuite(_ordered(words, u.alphabet), "w-method", n, m.dim, tuple(S), tuple(E))


def wfa_testing_eq_oracle(n: int, black):
    from ..conformance import run_suite

    def eq(hypothesis: Wfa):
        dim = wfa_minimize(hypothesis).dim
        if dim > n:
            raise BoundViolated(f"hypothesis has dimension {dim}, more than the promised bound {n}")
        return run_suite(wfa_w_method(hypothesis, n), hypothesis, black).counterexample

    return eq

