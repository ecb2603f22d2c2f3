"""Alphabets and words.

A word is a tuple of symbol tokens; the empty tuple is the empty word.  On
disk and on the wire a word is its tokens joined by single spaces, and the
empty word is the literal ``eps``.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import InputError

Word = tuple  # tuple[str, ...]

EPS_TOKEN = "eps"
EMPTY: Word = ()


def check_alphabet(symbols: Iterable[str]) -> tuple[str, ...]:
    symbols = tuple(symbols)
    if not symbols:
        raise InputError("alphabet must be non-empty")
    if len(set(symbols)) != len(symbols):
        raise InputError(f"duplicate symbols in alphabet {list(symbols)}")
    for sym in symbols:
        if not isinstance(sym, str) or not sym or any(c.isspace() for c in sym):
            raise InputError(f"invalid symbol token {sym!r}")
        if sym == EPS_TOKEN:
            raise InputError("token 'eps' is reserved for the empty word")
    return symbols


def format_word(word: Sequence[str]) -> str:
    return " ".join(word) if word else EPS_TOKEN


def parse_word(text: str, alphabet: Sequence[str] | None = None) -> Word:
    tokens = text.split()
    if tokens == [EPS_TOKEN]:
        return EMPTY
    if not tokens:
        raise InputError("empty line is not a word; use 'eps'")
    if EPS_TOKEN in tokens:
        raise InputError(f"'eps' may only appear alone: {text!r}")
    if alphabet is not None:
        for tok in tokens:
            if tok not in alphabet:
                raise InputError(f"unknown symbol {tok!r} in word {text!r}")
    return tuple(tokens)


def prefixes(word: Word) -> list[Word]:
    """All prefixes of ``word``, shortest first, including the empty word."""
    return [word[:i] for i in range(len(word) + 1)]


def words_up_to(alphabet: Sequence[str], length: int) -> list[Word]:
    """A^{<=length} in length-lexicographic order."""
    out = []
    for k in range(length + 1):
        out.extend(itertools.product(alphabet, repeat=k))
    return out


def sort_key(alphabet: Sequence[str]):
    index = {a: i for i, a in enumerate(alphabet)}

    def key(word: Word):
        return (len(word), tuple(index[a] for a in word))

    return key


def concat_sets(left: Iterable[Word], right: Iterable[Word]) -> set[Word]:
    right = list(right)
    return {u + v for u in left for v in right}


def read_word_list(text: str, alphabet: Sequence[str] | None = None) -> list[Word]:
    """Parse one word per line, skipping blanks and ``#`` comments."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_word(line, alphabet))
    return out


def write_word_list(words: Iterable[Word]) -> str:
    return "".join(format_word(w) + "\n" for w in words)
