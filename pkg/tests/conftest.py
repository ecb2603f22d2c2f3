import sys
from fractions import Fraction

import pytest

from alfa.dfa import Dfa
from alfa.weighted.wfa import Wfa

AB = ("a", "b")


def make_d1():
    """Even number of a's over {a, b}; state 0 = even (accepting)."""
    return Dfa(AB, 0, {0}, [[1, 0], [0, 1]])


def make_d2():
    """q0 -> q1 -> q2 (self-loop) over {a}, accepting {q1, q2}."""
    return Dfa(("a",), 0, {1, 2}, [[1], [2], [2]])


def make_second_is_a():
    """|w| >= 2 and the second symbol is a."""
    # 0 start, 1 read one symbol, 2 accept sink, 3 reject sink
    return Dfa(AB, 0, {2}, [[1, 1], [2, 3], [2, 2], [3, 3]])


def make_ends_in_b():
    return Dfa(AB, 0, {1}, [[0, 1], [0, 1]])


def make_empty():
    return Dfa(AB, 0, set(), [[0, 0]])


def make_all():
    return Dfa(AB, 0, {0}, [[0, 0]])


def make_w1():
    """Counts occurrences of a."""
    return Wfa(AB, (1, 0), {"a": ((1, 1), (0, 1)), "b": ((1, 0), (0, 1))}, (0, 1))


@pytest.fixture
def d1():
    return make_d1()


@pytest.fixture
def d2():
    return make_d2()


@pytest.fixture
def second_is_a():
    return make_second_is_a()


@pytest.fixture
def ends_in_b():
    return make_ends_in_b()


@pytest.fixture
def empty_lang():
    return make_empty()


@pytest.fixture
def all_lang():
    return make_all()


@pytest.fixture
def w1():
    return make_w1()


@pytest.fixture
def python():
    return sys.executable


F = Fraction


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
