"""Complete deterministic finite automata.

States are dense integers ``0..n-1``.  Transitions are stored as a tuple of
rows, ``delta[q][i]`` being the successor of ``q`` on ``alphabet[i]``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import FormatError, InputError
from .words import EPS_TOKEN, Word, check_alphabet


@dataclass(frozen=True)
class Dfa:
    alphabet: tuple[str, ...]
    initial: int
    accepting: frozenset
    delta: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        n = len(self.delta)
        if n == 0:
            raise InputError("a DFA needs at least one state")
        if not 0 <= self.initial < n:
            raise InputError(f"initial state {self.initial} out of range")
        for q in self.accepting:
            if not 0 <= q < n:
                raise InputError(f"accepting state {q} out of range")
        k = len(self.alphabet)
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise InputError(f"state {q} has {len(row)} transitions, expected {k}")
            for p in row:
                if not 0 <= p < n:
                    raise InputError(f"transition target {p} out of range")
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.alphabet)})

    @property
    def size(self) -> int:
        return len(self.delta)

    def symbol_index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise InputError(f"unknown symbol {symbol!r}") from None

    def step(self, state: int, symbol: str) -> int:
        return self.delta[state][self.symbol_index(symbol)]

    def run(self, word: Sequence[str], start: int | None = None) -> int:
        q = self.initial if start is None else start
        for a in word:
            q = self.delta[q][self.symbol_index(a)]
        return q

    def accepts(self, word: Sequence[str], start: int | None = None) -> bool:
        return self.run(word, start) in self.accepting

    def __call__(self, word: Sequence[str]) -> int:
        return int(self.accepts(word))


def eval_dfa(d: Dfa, word: Sequence[str]) -> int:
    return d(word)


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.initial, set(range(d.size)) - d.accepting, d.delta)


def _check_same_alphabet(u: Dfa, v: Dfa) -> None:
    if u.alphabet != v.alphabet:
        raise InputError(f"alphabet mismatch: {u.alphabet} vs {v.alphabet}")


def dfa_equiv(u: Dfa, v: Dfa) -> Word | None:
    """Return None if ``u`` and ``v`` accept the same language, else the
    length-lexicographically least word accepted by exactly one of them."""
    _check_same_alphabet(u, v)
    start = (u.initial, v.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        p, q = pair
        if (p in u.accepting) != (q in v.accepting):
            word = []
            while parent[pair] is not None:
                pair, i = parent[pair]
                word.append(u.alphabet[i])
            return tuple(reversed(word))
        for i in range(len(u.alphabet)):
            nxt = (u.delta[p][i], v.delta[q][i])
            if nxt not in parent:
                parent[nxt] = (pair, i)
                queue.append(nxt)
    return None


def canonical(d: Dfa) -> Dfa:
    """Relabel the reachable part of ``d`` in BFS order from the initial state."""
    order = [d.initial]
    ids = {d.initial: 0}
    i = 0
    while i < len(order):
        for p in d.delta[order[i]]:
            if p not in ids:
                ids[p] = len(order)
                order.append(p)
        i += 1
    delta = [tuple(ids[p] for p in d.delta[q]) for q in order]
    accepting = {ids[q] for q in order if q in d.accepting}
    return Dfa(d.alphabet, 0, accepting, delta)


def dfa_isomorphic(u: Dfa, v: Dfa) -> bool:
    _check_same_alphabet(u, v)
    return canonical(u) == canonical(v)


def random_dfa(seed, n: int, alphabet: Sequence[str]) -> Dfa:
    if n < 1:
        raise InputError("random_dfa needs at least one state")
    alphabet = check_alphabet(alphabet)
    rng = random.Random(seed)
    delta = []
    accepting = set()
    for q in range(n):
        delta.append(tuple(rng.randrange(n) for _ in alphabet))
        if rng.random() < 0.5:
            accepting.add(q)
    return Dfa(alphabet, 0, accepting, delta)


def state_name(q: int) -> str:
    return f"q{q}"


def serialize_dfa(d: Dfa) -> str:
    lines = [
        "dfa",
        "alphabet: " + " ".join(d.alphabet),
        "states: " + " ".join(state_name(q) for q in range(d.size)),
        "initial: " + state_name(d.initial),
        "accepting: " + " ".join(state_name(q) for q in sorted(d.accepting)),
    ]
    for q in range(d.size):
        for i, a in enumerate(d.alphabet):
            lines.append(f"{state_name(q)} {a} -> {state_name(d.delta[q][i])}")
    return "\n".join(lines) + "\n"


def _header(line: str, key: str, lineno: int) -> list[str]:
    prefix = key + ":"
    if not line.startswith(prefix):
        raise FormatError(f"expected '{prefix}' line", lineno)
    return line[len(prefix):].split()


def parse_dfa(text: str) -> Dfa:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] != "dfa":
        raise FormatError("first line must be 'dfa'", lines[0][0] if lines else 1)
    if len(lines) < 5:
        raise FormatError("truncated DFA header", lines[-1][0])

    lineno, line = lines[1]
    symbols = _header(line, "alphabet", lineno)
    if EPS_TOKEN in symbols:
        raise FormatError("token 'eps' is reserved and cannot be an alphabet symbol", lineno)
    try:
        alphabet = check_alphabet(symbols)
    except InputError as exc:
        raise FormatError(str(exc), lineno) from None

    lineno, line = lines[2]
    names = _header(line, "states", lineno)
    if not names:
        raise FormatError("no states declared", lineno)
    if len(set(names)) != len(names):
        raise FormatError("duplicate state names", lineno)
    ids = {name: i for i, name in enumerate(names)}

    def state(name, at):
        if name not in ids:
            raise FormatError(f"unknown state {name!r}", at)
        return ids[name]

    lineno, line = lines[3]
    init = _header(line, "initial", lineno)
    if len(init) != 1:
        raise FormatError("exactly one initial state required", lineno)
    initial = state(init[0], lineno)

    lineno, line = lines[4]
    accepting = {state(name, lineno) for name in _header(line, "accepting", lineno)}

    table: dict[tuple[int, str], int] = {}
    for lineno, line in lines[5:]:
        parts = line.split()
        if len(parts) != 4 or parts[2] != "->":
            raise FormatError(f"bad transition line {line!r}", lineno)
        src, sym, _, dst = parts
        q = state(src, lineno)
        if sym not in alphabet:
            raise FormatError(f"unknown symbol {sym!r}", lineno)
        if (q, sym) in table:
            raise FormatError(f"duplicate transition for ({src}, {sym})", lineno)
        table[(q, sym)] = state(dst, lineno)

    last = lines[-1][0]
    delta = []
    for q, name in enumerate(names):
        row = []
        for a in alphabet:
            if (q, a) not in table:
                raise FormatError(f"missing transition for ({name}, {a})", last)
            row.append(table[(q, a)])
        delta.append(row)
    return Dfa(alphabet, initial, accepting, delta)
