import itertools
import random

import pytest

from alfa.dfa import Dfa, dfa_equiv, random_dfa
from alfa.errors import BoundViolated, InputError, TransportError
from alfa.learners import run_lstar
from alfa.minimization import minimize
from alfa.oracle import DfaOracle, FunctionOracle, MembershipOracle
from alfa.conformance import hsi_suite, run_suite, w_method_suite
from alfa.conformance import testing_eq_oracle as eq_oracle
from alfa.dfa import dfa_isomorphic
from alfa.words import EMPTY

from conftest import AB

E, A, B = EMPTY, ("a",), ("b",)
D1_SUITE = (E, A, B, ("a", "a"), ("a", "b"))


def test_w_method_examples(d1, empty_lang):
    suite = w_method_suite(d1, 2)
    assert suite.words == D1_SUITE
    assert suite.access == (E, A) and suite.separators == (E,)
    assert w_method_suite(empty_lang, 1).words == (E, A, B)


def test_w_method_bound_three(d1):
    suite = w_method_suite(d1, 3)
    assert set(D1_SUITE) < set(suite.words)
    assert max(map(len, suite.words)) == 3
    assert suite.words == tuple(sorted(suite.words, key=lambda w: (len(w), w)))


def test_bound_below_minimal_size(d1):
    with pytest.raises(BoundViolated):
        w_method_suite(d1, 1)
    with pytest.raises(InputError):
        hsi_suite(d1, 1)


def test_hsi_examples(d1, empty_lang):
    assert hsi_suite(d1, 2).words == D1_SUITE
    assert hsi_suite(empty_lang, 1).words == (E, A, B)


@pytest.mark.parametrize("seed", range(40))
def test_hsi_no_larger_than_w(seed):
    rng = random.Random(seed)
    u = minimize(random_dfa(seed, rng.randint(1, 6), AB))
    n = u.size + rng.randint(0, 1)
    assert len(hsi_suite(u, n)) <= len(w_method_suite(u, n))


def test_run_suite_examples(d1, all_lang):
    suite = w_method_suite(d1, 2)
    v = run_suite(suite, d1, DfaOracle(d1))
    assert v.passed and v.counterexample is None and v.queries == len(suite)

    v = run_suite(suite, d1, DfaOracle(all_lang))
    assert not v.passed and v.counterexample == A and v.queries == 2

    v = run_suite((), d1, DfaOracle(all_lang))
    assert v.passed and v.queries == 0


def test_run_suite_logs_test_phase(d1):
    black = DfaOracle(d1)
    run_suite(w_method_suite(d1, 2), d1, black)
    assert black.log.phases["test"] == 5


def test_run_suite_reports_partial_progress(d1):
    class Flaky(MembershipOracle):
        def _ask(self, word):
            if len(word) == 2:
                raise TransportError("connection dropped")
            return d1(word)

    with pytest.raises(TransportError, match="after 3 of 5"):
        run_suite(w_method_suite(d1, 2), d1, Flaky(AB))


def test_testing_eq_oracle_examples(d1, empty_lang):
    eq = eq_oracle(2, DfaOracle(d1))
    assert eq(d1) is None
    assert eq(empty_lang) == E
    with pytest.raises(BoundViolated):
        eq_oracle(1, DfaOracle(d1))(d1)


def test_lstar_with_testing_oracle(second_is_a):
    black = DfaOracle(second_is_a)
    result = run_lstar(DfaOracle(second_is_a), eq_oracle(4, black))
    assert dfa_isomorphic(result.hypothesis.dfa, second_is_a)


def test_hsi_oracle(d1):
    eq = eq_oracle(2, FunctionOracle(lambda w: int(w.count("a") % 2 == 0), AB), method="hsi")
    assert eq(d1) is None


def _all_dfas(max_states):
    for n in range(1, max_states + 1):
        for acc in itertools.product((0, 1), repeat=n):
            for trans in itertools.product(range(n), repeat=2 * n):
                delta = [trans[2 * q: 2 * q + 2] for q in range(n)]
                yield Dfa(AB, 0, {q for q in range(n) if acc[q]}, delta)


def test_w_method_complete_on_two_state_machines():
    machines = {}
    for d in _all_dfas(2):
        machines.setdefault(minimize(d), d)
    assert len(machines) > 4
    for u, v in itertools.product(list(machines.values()), repeat=2):
        verdict = run_suite(w_method_suite(u, 2), u, DfaOracle(v))
        assert verdict.passed == (dfa_equiv(u, v) is None)
