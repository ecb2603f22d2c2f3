"""Linear weighted automata over the rationals.

The value of a word ``a1..ak`` is ``init · M[a1] · ... · M[ak] · out``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import FormatError, InputError
from ..words import EMPTY, EPS_TOKEN, check_alphabet
from .linalg import RowBasis, dot, mat_vec, transpose, vec, vec_mat


@dataclass(frozen=True)
class Wfa:
    alphabet: tuple
    init: tuple
    trans: dict  # symbol -> tuple of row tuples (dim x dim)
    out: tuple

    def __post_init__(self):
        alphabet = check_alphabet(self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        init, out = vec(self.init), vec(self.out)
        dim = len(init)
        if len(out) != dim:
            raise InputError(f"output vector has length {len(out)}, expected {dim}")
        trans = {}
        for a in alphabet:
            if a not in self.trans:
                raise InputError(f"missing matrix for symbol {a!r}")
            m = tuple(vec(row) for row in self.trans[a])
            if len(m) != dim or any(len(row) != dim for row in m):
                raise InputError(f"matrix for {a!r} is not {dim}x{dim}")
            trans[a] = m
        extra = set(self.trans) - set(alphabet)
        if extra:
            raise InputError(f"matrices for unknown symbols {sorted(extra)}")
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "out", out)
        object.__setattr__(self, "trans", trans)

    def __hash__(self):
        return hash((self.alphabet, self.init, self.out, tuple(self.trans[a] for a in self.alphabet)))

    @property
    def dim(self) -> int:
        return len(self.init)

    def forward(self, word: Sequence[str], start=None) -> tuple:
        x = self.init if start is None else start
        for a in word:
            try:
                x = vec_mat(x, self.trans[a])
            except KeyError:
                raise InputError(f"unknown symbol {a!r}") from None
        return x

    def backward(self, word: Sequence[str]) -> tuple:
        y = self.out
        for a in reversed(word):
            try:
                y = mat_vec(self.trans[a], y)
            except KeyError:
                raise InputError(f"unknown symbol {a!r}") from None
        return y

    def __call__(self, word: Sequence[str]) -> Fraction:
        return dot(self.forward(word), self.out)


def wfa_eval(w: Wfa, word: Sequence[str]) -> Fraction:
    return w(word)


def zero_wfa(alphabet, dim: int = 0) -> Wfa:
    z = (Fraction(0),) * dim
    return Wfa(alphabet, z, {a: (z,) * dim for a in alphabet}, z)


def scale_output(w: Wfa, factor) -> Wfa:
    return Wfa(w.alphabet, w.init, w.trans, tuple(Fraction(factor) * x for x in w.out))


def direct_sum(u: Wfa, v: Wfa, sign=1) -> Wfa:
    """Block-diagonal sum; with ``sign=-1`` it computes ``u - v``."""
    if u.alphabet != v.alphabet:
        raise InputError("alphabet mismatch")
    du, dv = u.dim, v.dim
    zero = Fraction(0)
    trans = {}
    for a in u.alphabet:
        rows = [row + (zero,) * dv for row in u.trans[a]]
        rows += [(zero,) * du + row for row in v.trans[a]]
        trans[a] = rows
    return Wfa(u.alphabet, u.init + v.init, trans, u.out + tuple(sign * x for x in v.out))


def wfa_equiv(u: Wfa, v: Wfa):
    """None if ``u`` and ``v`` assign equal values to every word, else
    ``(word, u(word), v(word))`` for a differing word."""
    if u.alphabet != v.alphabet:
        raise InputError(f"alphabet mismatch: {u.alphabet} vs {v.alphabet}")
    diff = direct_sum(u, v, sign=-1)
    if diff.dim == 0:
        return None
    basis = RowBasis(diff.dim)
    queue = deque([(EMPTY, diff.init)])
    while queue:
        word, x = queue.popleft()
        if dot(x, diff.out) != 0:
            return word, u(word), v(word)
        if not basis.add(x):
            continue
        for a in u.alphabet:
            queue.append((word + (a,), vec_mat(x, diff.trans[a])))
    return None


def forward_basis(w: Wfa) -> tuple[list, list]:
    """Access words and vectors spanning the reachable space, found
    breadth-first with span pruning."""
    basis = RowBasis(w.dim)
    words = []
    queue = deque([(EMPTY, w.init)])
    while queue:
        word, x = queue.popleft()
        if not basis.add(x):
            continue
        words.append(word)
        for a in w.alphabet:
            queue.append((word + (a,), vec_mat(x, w.trans[a])))
    return words, basis.rows


def backward_basis(w: Wfa) -> tuple[list, list]:
    """Suffix words ``e`` whose vectors ``M[e] · out`` span the observable
    space."""
    basis = RowBasis(w.dim)
    words = []
    queue = deque([(EMPTY, w.out)])
    while queue:
        word, y = queue.popleft()
        if not basis.add(y):
            continue
        words.append(word)
        for a in w.alphabet:
            queue.append(((a,) + word, mat_vec(w.trans[a], y)))
    return words, basis.rows


def _restrict_forward(w: Wfa) -> Wfa:
    _, rows = forward_basis(w)
    basis = RowBasis(w.dim)
    for r in rows:
        basis.add(r)
    k = len(rows)
    init = basis.coords(w.init) if k else ()
    trans = {a: tuple(basis.coords(vec_mat(r, w.trans[a])) for r in rows) for a in w.alphabet}
    out = tuple(dot(r, w.out) for r in rows)
    if not k:
        return zero_wfa(w.alphabet)
    return Wfa(w.alphabet, init, trans, out)


def reverse(w: Wfa) -> Wfa:
    """WFA for the reversed language: swap init/out, transpose matrices."""
    return Wfa(w.alphabet, w.out, {a: transpose(w.trans[a], w.dim) for a in w.alphabet}, w.init)


def wfa_minimize(w: Wfa) -> Wfa:
    """Forward reduction followed by backward reduction (the latter done as
    a forward reduction of the reversed automaton)."""
    reach = _restrict_forward(w)
    return reverse(_restrict_forward(reverse(reach)))


def random_wfa(seed, dim: int, alphabet, entries=(-1, 0, 1)) -> Wfa:
    rng = random.Random(seed)
    alphabet = check_alphabet(alphabet)

    def pick():
        return Fraction(rng.choice(entries))

    init = [pick() for _ in range(dim)]
    trans = {a: [[pick() for _ in range(dim)] for _ in range(dim)] for a in alphabet}
    out = [pick() for _ in range(dim)]
    return Wfa(alphabet, init, trans, out)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def serialize_wfa(w: Wfa) -> str:
    def row(v):
        return " ".join(format_rational(x) for x in v)

    lines = ["wfa", "alphabet: " + " ".join(w.alphabet), f"dim: {w.dim}",
             "init: " + row(w.init), "out: " + row(w.out)]
    for a in w.alphabet:
        lines.append(f"{a}: " + " / ".join(row(r) for r in w.trans[a]))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _parse_row(text, dim, lineno):
    parts = text.split()
    if len(parts) != dim:
        raise FormatError(f"expected {dim} entries, got {len(parts)}", lineno)
    try:
        return tuple(Fraction(p) for p in parts)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad rational in {text!r}", lineno) from None


def parse_wfa(text: str) -> Wfa:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines or lines[0][1] != "wfa":
        raise FormatError("first line must be 'wfa'", lines[0][0] if lines else 1)
    fields = {}
    for lineno, line in lines[1:]:
        key, sep, rest = line.partition(":")
        if not sep:
            raise FormatError(f"expected 'key: value', got {line!r}", lineno)
        key = key.strip()
        if key in fields:
            raise FormatError(f"duplicate entry {key!r}", lineno)
        fields[key] = (lineno, rest.strip())
    for key in ("alphabet", "dim", "init", "out"):
        if key not in fields:
            raise FormatError(f"missing '{key}:' line", lines[-1][0])
    lineno, rest = fields.pop("alphabet")
    symbols = rest.split()
    if EPS_TOKEN in symbols:
        raise FormatError("token 'eps' is reserved and cannot be an alphabet symbol", lineno)
    try:
        alphabet = check_alphabet(symbols)
    except InputError as exc:
        raise FormatError(str(exc), lineno) from None
    lineno, rest = fields.pop("dim")
    if not rest.isdigit():
        raise FormatError(f"bad dimension {rest!r}", lineno)
    dim = int(rest)
    lineno, rest = fields.pop("init")
    init = _parse_row(rest, dim, lineno)
    lineno, rest = fields.pop("out")
    out = _parse_row(rest, dim, lineno)
    trans = {}
    for a in alphabet:
        if a not in fields:
            raise FormatError(f"missing matrix for symbol {a!r}", lines[-1][0])
        lineno, rest = fields.pop(a)
        rows = [r for r in rest.split("/")] if dim else []
        if dim and len(rows) != dim:
            raise FormatError(f"matrix for {a!r} needs {dim} rows", lineno)
        trans[a] = tuple(_parse_row(r, dim, lineno) for r in rows)
    if fields:
        key, (lineno, _) = next(iter(fields.items()))
        raise FormatError(f"unexpected entry {key!r}", lineno)
    return Wfa(alphabet, init, trans, out)
