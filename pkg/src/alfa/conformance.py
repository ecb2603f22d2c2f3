"""Conformance test generation (W-method, HSI) and execution."""

from __future__ import annotations

import contextlib
from dataclasses import dataclass

from .dfa import Dfa
from .errors import BoundViolated, InputError, OracleError
from .minimization import minimize, moore_merge, reachable_part, splitting_tree
from .words import EMPTY, Word, concat_sets, sort_key, words_up_to


@dataclass(frozen=True)
class TestSuite:
    __test__ = False  # not a pytest class

    words: tuple
    method: str
    bound: int
    states: int
    access: tuple
    separators: tuple

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


@dataclass
class Verdict:
    passed: bool
    counterexample: Word | None = None
    queries: int = 0


def _ordered(words, alphabet) -> tuple:
    return tuple(sorted(set(words), key=sort_key(alphabet)))


def _prepare(u: Dfa, n: int):
    m = minimize(u)
    if n < m.size:
        raise BoundViolated(f"bound {n} is below the minimal size {m.size} of the known machine")
    reach, access = reachable_part(m)
    explore = words_up_to(u.alphabet, n - reach.size)
    s_prime = concat_sets(access.words, explore)
    return reach, access, s_prime


def w_method_suite(u: Dfa, n: int) -> TestSuite:
    reach, access, s_prime = _prepare(u, n)
    E = moore_merge(reach)[1].words
    A = [(a,) for a in u.alphabet]
    s_prime_a = concat_sets(s_prime, A)
    words = concat_sets(s_prime, E) | set(E) | concat_sets(s_prime_a, E) | s_prime
    return TestSuite(_ordered(words, u.alphabet), "w-method", n, reach.size, access.words, tuple(E))


def hsi_suite(u: Dfa, n: int) -> TestSuite:
    """Per-state identifiers: the splitting-tree discriminators on the
    state's path, plus the empty word."""
    reach, access, s_prime = _prepare(u, n)
    tree = splitting_tree(reach)
    ident = {q: [EMPTY] + tree.identifiers(q) for q in range(reach.size)}
    covered = s_prime | concat_sets(s_prime, [(a,) for a in u.alphabet])
    words = set()
    for s in covered:
        q = reach.run(s)
        words.update(s + h for h in ident[q])
    labels = tuple(dict.fromkeys([EMPTY] + tree.labels()))
    return TestSuite(_ordered(words, u.alphabet), "hsi", n, reach.size, access.words, labels)


def run_suite(suite, known, black) -> Verdict:
    """Query ``black`` on each word in order; the first disagreement with
    ``known`` is the counterexample."""
    if tuple(known.alphabet) != tuple(black.alphabet):
        raise InputError("known machine and black box use different alphabets")
    verdict = Verdict(True)
    phase = black.in_phase("test") if hasattr(black, "in_phase") else contextlib.nullcontext()
    with phase:
        for w in suite:
            try:
                answer = black(w)
            except OracleError as exc:
                raise type(exc)(f"{exc} (after {verdict.queries} of {len(suite)} test words)") from exc
            verdict.queries += 1
            if answer != known(w):
                verdict.passed = False
                verdict.counterexample = tuple(w)
                break
    return verdict


def testing_eq_oracle(n: int, black, method: str = "w"):
    """Equivalence oracle answering by running a W-method (or HSI) suite
    for each hypothesis against ``black``."""
    build = w_method_suite if method == "w" else hsi_suite

    def eq(hypothesis: Dfa):
        size = minimize(hypothesis).size
        if size > n:
            raise BoundViolated(
                f"hypothesis has {size} states, more than the promised bound {n}"
            )
        return run_suite(build(hypothesis, n), hypothesis, black).counterexample

    return eq
