import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alfa.dfa import Dfa, dfa_equiv, dfa_isomorphic, random_dfa
from alfa.minimization import (
    minimize,
    moore_merge,
    quotient,
    reachable_part,
    splitting_tree,
    splitting_tree_minimize,
)
from alfa.words import EMPTY, words_up_to

from conftest import AB


def nerode_quotient(d: Dfa) -> Dfa:
    """Brute-force reference: states of the reachable part merged when they
    agree on every word of length at most n - 2 (inequivalent states of an
    n-state DFA always differ on such a word)."""
    reach = set()
    frontier = [d.initial]
    while frontier:
        q = frontier.pop()
        if q not in reach:
            reach.add(q)
            frontier.extend(d.delta[q])
    tests = words_up_to(d.alphabet, max(d.size - 2, 0))
    signature = {q: tuple(d.run(w, q) in d.accepting for w in tests) for q in reach}
    order = sorted(reach)
    ids = {}
    for q in order:
        ids.setdefault(signature[q], len(ids))
    reps = {ids[signature[q]]: q for q in reversed(order)}
    delta = [[ids[signature[p]] for p in d.delta[reps[i]]] for i in range(len(ids))]
    accepting = {ids[signature[q]] for q in order if q in d.accepting}
    return Dfa(d.alphabet, ids[signature[d.initial]], accepting, delta)


def test_reachable_part_examples(d1):
    reach, access = reachable_part(d1)
    assert dfa_isomorphic(reach, d1)
    assert access.access == {0: EMPTY, 1: ("a",)}

    extra = Dfa(AB, 0, {0, 2}, [[1, 0], [0, 1], [2, 2]])
    reach, access = reachable_part(extra)
    assert reach.size == 2 and dfa_isomorphic(reach, d1)

    one = Dfa(AB, 0, set(), [[0, 0]])
    reach, access = reachable_part(one)
    assert reach.size == 1 and access.words == (EMPTY,)


def test_reachable_part_renumbers_in_bfs_order():
    d = Dfa(AB, 2, {0}, [[0, 0], [1, 1], [1, 0]])
    reach, access = reachable_part(d)
    assert access.words == (EMPTY, ("a",), ("b",))
    for q, w in enumerate(access.words):
        assert reach.run(w) == q


def test_moore_merge_examples(d1, d2):
    m, seps = moore_merge(d2)
    assert m.size == 2 and seps.words == (EMPTY,)
    assert dfa_equiv(m, d2) is None

    m, seps = moore_merge(d1)
    assert dfa_isomorphic(m, d1) and seps.words == (EMPTY,)

    everything = Dfa(AB, 0, {0, 1, 2, 3}, [[1, 2], [3, 0], [2, 2], [0, 1]])
    m, seps = moore_merge(everything)
    assert m.size == 1 and seps.words == (EMPTY,)


def test_moore_merge_needs_longer_suffix(second_is_a):
    m, seps = moore_merge(second_is_a)
    assert m.size == 4
    assert len(seps.words) > 1 and seps.words[0] == EMPTY


def test_splitting_tree_examples(d2):
    tree = splitting_tree(d2)
    assert tree.root.label == EMPTY
    left, right = tree.root.left, tree.root.right
    assert left.is_leaf and right.is_leaf
    assert sorted(left.members) == [1, 2] and right.members == [0]
    m, _ = splitting_tree_minimize(d2)
    assert m.size == 2
    assert tree.dump().splitlines()[0] == "? eps"

    everything = Dfa(AB, 0, {0, 1, 2}, [[1, 2], [2, 0], [0, 1]])
    tree = splitting_tree(everything)
    assert tree.root.is_leaf and tree.labels() == []


def test_minimize_examples(d1, d2):
    assert minimize(d2).size == 2
    assert dfa_isomorphic(minimize(d1), d1)


def test_quotient_numbers_blocks_by_least_state(d2):
    q = quotient(d2, ["x", "y", "y"])
    assert q.size == 2 and q.initial == 0 and q.accepting == frozenset({1})
    assert q.delta == ((1,), (1,))


def _random(seed, max_n=10):
    rng = random.Random(seed)
    return random_dfa(seed, rng.randint(1, max_n), "abc"[: rng.randint(1, 3)])


@pytest.mark.parametrize("seed", range(60))
def test_minimize_matches_brute_force(seed):
    d = _random(seed)
    m = minimize(d)
    assert dfa_isomorphic(m, nerode_quotient(d))
    assert dfa_equiv(m, d) is None
    assert dfa_isomorphic(minimize(m), m)


@pytest.mark.parametrize("seed", range(60))
def test_splitting_tree_agrees_with_moore(seed):
    reach, _ = reachable_part(_random(seed))
    merged, _ = moore_merge(reach)
    split, tree = splitting_tree_minimize(reach)
    assert dfa_isomorphic(merged, split)
    # every pair of states in different leaves is separated by the LCA label
    leaves = tree.leaves()
    for x, y in itertools.combinations([l for l in leaves if l.members], 2):
        p, q = x.members[0], y.members[0]
        seen = set()
        node = x
        while node is not None:
            seen.add(node.id)
            node = node.parent
        node = y
        while node.id not in seen:
            node = node.parent
        v = node.label
        assert (reach.run(v, p) in reach.accepting) != (reach.run(v, q) in reach.accepting)


@pytest.mark.parametrize("seed", range(40))
def test_sets_are_sound(seed):
    d = _random(seed)
    reach, access = reachable_part(d)
    assert [reach.run(w) for w in access.words] == list(range(reach.size))
    merged, seps = moore_merge(reach)
    # separators distinguish exactly the Nerode classes
    sig = {}
    for q in range(reach.size):
        sig.setdefault(tuple(reach.run(e, q) in reach.accepting for e in seps.words), []).append(q)
    assert len(sig) == merged.size


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 8))
def test_minimize_is_idempotent_and_language_preserving(seed, n):
    d = random_dfa(seed, n, AB)
    m = minimize(d)
    assert m.size <= d.size
    assert dfa_equiv(m, d) is None
    assert dfa_isomorphic(minimize(m), m)
