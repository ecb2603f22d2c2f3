"""Observation tables over a bit-valued membership oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .dfa import Dfa
from .errors import PreconditionError
from .words import EMPTY, Word, format_word


@dataclass(frozen=True)
class Hypothesis:
    """A DFA extracted from a table or tree, with the word representing
    each state (and, for tables, the state's row)."""

    dfa: Dfa
    representatives: tuple
    rows: tuple | None = None

    @property
    def size(self) -> int:
        return self.dfa.size


@dataclass
class ObservationTable:
    alphabet: tuple
    S: list = field(default_factory=lambda: [EMPTY])
    E: list = field(default_factory=lambda: [EMPTY])
    cells: dict = field(default_factory=dict)

    def __post_init__(self):
        self.alphabet = tuple(self.alphabet)
        S, E = list(self.S), list(self.E)
        self.S, self.E = [], []
        self._in_S, self._in_E = set(), set()
        self.add_prefixes([EMPTY] + S)
        self.add_suffixes([EMPTY] + E)

    def add_prefixes(self, words: Iterable[Word]) -> list:
        added = []
        for w in words:
            w = tuple(w)
            if w not in self._in_S:
                self._in_S.add(w)
                self.S.append(w)
                added.append(w)
        return added

    def add_suffixes(self, words: Iterable[Word]) -> list:
        added = []
        for w in words:
            w = tuple(w)
            if w not in self._in_E:
                self._in_E.add(w)
                self.E.append(w)
                added.append(w)
        return added

    def extensions(self) -> list:
        """S·A in S order, then alphabet order."""
        return [s + (a,) for s in self.S for a in self.alphabet]

    def row_labels(self) -> list:
        seen = set(self._in_S)
        labels = list(self.S)
        for t in self.extensions():
            if t not in seen:
                seen.add(t)
                labels.append(t)
        return labels

    def fill(self, oracle) -> int:
        """Query every missing cell; returns how many cells were filled."""
        filled = 0
        cells = self.cells
        for u in self.row_labels():
            for e in self.E:
                if (u, e) not in cells:
                    cells[(u, e)] = oracle.query(u + e)
                    filled += 1
        return filled

    def row(self, u: Word) -> tuple:
        try:
            return tuple(self.cells[(u, e)] for e in self.E)
        except KeyError:
            raise PreconditionError(f"row {format_word(u)!r} is not filled") from None

    def distinct_rows(self) -> int:
        return len({self.row(s) for s in self.S})

    def closedness_defect(self) -> Word | None:
        rows = {self.row(s) for s in self.S}
        for t in self.extensions():
            if self.row(t) not in rows:
                return t
        return None

    def consistency_defect(self) -> Word | None:
        """Suffix ``a·e`` separating two equal rows of S, or None.

        Output consistency is automatic since the empty word stays in E.
        """
        groups: dict = {}
        for s in self.S:
            groups.setdefault(self.row(s), []).append(s)
        # equal successor rows are transitive, so comparing every member with
        # the first one of its group finds the same first defect as all pairs
        for first, *rest in groups.values():
            for s in rest:
                for a in self.alphabet:
                    r1, r2 = self.row(first + (a,)), self.row(s + (a,))
                    if r1 != r2:
                        e = next(e for e, x, y in zip(self.E, r1, r2) if x != y)
                        return (a,) + e
        return None

    def fix(self, oracle, closedness=True, consistency=True, trace=None) -> int:
        """Repair defects until the table is closed and consistent.

        Returns the number of fixes applied.  With one of the flags off the
        corresponding defect kind is left alone (ID and its dual).
        """
        fixes = 0
        self.fill(oracle)
        while True:
            if closedness:
                t = self.closedness_defect()
                if t is not None:
                    self.add_prefixes([t])
                    if trace is not None:
                        trace.append(f"closedness defect: add {format_word(t)} to S")
                    self.fill(oracle)
                    fixes += 1
                    continue
            if consistency:
                v = self.consistency_defect()
                if v is not None:
                    self.add_suffixes([v])
                    if trace is not None:
                        trace.append(f"consistency defect: add {format_word(v)} to E")
                    self.fill(oracle)
                    fixes += 1
                    continue
            return fixes

    def hypothesis(self) -> Hypothesis:
        if EMPTY not in self._in_S or EMPTY not in self._in_E:
            raise PreconditionError("the empty word must be in both S and E")
        t = self.closedness_defect()
        if t is not None:
            raise PreconditionError(f"table not closed: row of {format_word(t)!r} missing from S", t)
        v = self.consistency_defect()
        if v is not None:
            raise PreconditionError(f"table not consistent: suffix {format_word(v)!r} separates equal rows", v)

        state_of: dict = {}
        reps = []
        for s in self.S:
            r = self.row(s)
            if r not in state_of:
                state_of[r] = len(reps)
                reps.append(s)
        eps_col = self.E.index(EMPTY)
        rows = [self.row(s) for s in reps]
        delta = [[state_of[self.row(s + (a,))] for a in self.alphabet] for s in reps]
        accepting = {i for i, r in enumerate(rows) if r[eps_col]}
        dfa = Dfa(self.alphabet, state_of[self.row(EMPTY)], accepting, delta)
        return Hypothesis(dfa, tuple(reps), tuple(rows))

    def dump(self) -> str:
        """TSV rendering: header of E, one line per row label."""
        lines = ["\t" + "\t".join(format_word(e) for e in self.E)]
        for u in self.row_labels():
            cells = [str(int(self.cells[(u, e)])) if (u, e) in self.cells else "?" for e in self.E]
            lines.append(format_word(u) + "\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"
