"""Classification (discrimination) trees over a bit-valued membership oracle.

Internal nodes carry a discriminator word ``v``; a word ``u`` sifts to the
left child when ``L(u·v) = 1`` and to the right child otherwise.  Leaves hold
the prefixes of S that sift into them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from .dfa import Dfa
from .errors import PreconditionError
from .table import Hypothesis
from .words import EMPTY, Word, format_word


class Node:
    """Tree node; a leaf when ``label`` is None."""

    _ids = count()

    def __init__(self, members=None, parent=None):
        self.id = next(Node._ids)
        self.label = None
        self.left = None
        self.right = None
        self.parent = parent
        self.members = list(members or [])

    @property
    def is_leaf(self) -> bool:
        return self.label is None

    def depth(self) -> int:
        d, node = 0, self
        while node.parent is not None:
            d, node = d + 1, node.parent
        return d

    def path_labels(self) -> list:
        labels, node = [], self
        while node.parent is not None:
            node = node.parent
            labels.append(node.label)
        return labels[::-1]

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            yield from self.left.leaves()
            yield from self.right.leaves()


def lowest_common_ancestor(x: Node, y: Node) -> Node:
    ancestors = set()
    node = x
    while node is not None:
        ancestors.add(node.id)
        node = node.parent
    node = y
    while node.id not in ancestors:
        node = node.parent
    return node


def render_tree(root: Node, fmt=format_word, member_fmt=None) -> str:
    member_fmt = member_fmt or fmt
    lines = []

    def walk(node, indent):
        pad = "  " * indent
        if node.is_leaf:
            lines.append(pad + "[" + ", ".join(member_fmt(m) for m in node.members) + "]")
        else:
            lines.append(pad + "? " + fmt(node.label))
            walk(node.left, indent + 1)
            walk(node.right, indent + 1)

    walk(root, 0)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ClosednessDefect:
    word: Word


@dataclass(frozen=True)
class ConsistencyDefect:
    s1: Word
    s2: Word
    v: Word


class ClassificationTree:
    """A classification tree on S, kept in sync with its membership oracle.

    Sift results are memoised per word; a split only re-sifts the words that
    had reached the split leaf, so only those issue new queries.
    """

    def __init__(self, alphabet, oracle):
        self.alphabet = tuple(alphabet)
        self.oracle = oracle
        self.root = Node([EMPTY])
        self.S = [EMPTY]
        self._in_S = {EMPTY}
        self._sifted = {EMPTY: self.root}

    # sifting

    def _descend(self, node: Node, word: Word) -> Node:
        while not node.is_leaf:
            node = node.left if self.oracle.query(word + node.label) else node.right
        return node

    def sift(self, word: Word) -> Node:
        word = tuple(word)
        leaf = self._sifted.get(word)
        if leaf is None:
            leaf = self._descend(self.root, word)
        elif not leaf.is_leaf:
            leaf = self._descend(leaf, word)
        self._sifted[word] = leaf
        return leaf

    def leaf_of(self, s: Word) -> Node:
        """Leaf holding the S member ``s``."""
        return self.sift(s)

    # structure updates

    def add_to_s(self, word: Word) -> bool:
        word = tuple(word)
        if word in self._in_S:
            return False
        leaf = self.sift(word)
        leaf.members.append(word)
        self.S.append(word)
        self._in_S.add(word)
        return True

    def split(self, leaf: Node, v: Word) -> Node:
        """Replace ``leaf`` with an internal node discriminating on ``v``."""
        if not leaf.is_leaf:
            raise PreconditionError("can only split a leaf")
        v = tuple(v)
        members = leaf.members
        parked = [w for w, node in self._sifted.items() if node is leaf]
        answers = {w: self.oracle.query(w + v) for w in parked}
        if len(parked) >= 2 and len(set(answers.values())) < 2:
            raise PreconditionError(
                f"word {format_word(v)!r} does not split leaf {[format_word(s) for s in members]}"
            )
        leaf.label = v
        leaf.left = Node([s for s in members if answers[s]], leaf)
        leaf.right = Node([s for s in members if not answers[s]], leaf)
        leaf.members = []
        for w in parked:
            self._sifted[w] = leaf.left if answers[w] else leaf.right
        return leaf

    # defects

    def defects(self):
        """First defect in the order init-closedness, delta-closedness,
        out-consistency, delta-consistency; None when there is none."""
        if not self.sift(EMPTY).members:
            return ClosednessDefect(EMPTY)
        ext = [s + (a,) for s in self.S for a in self.alphabet]
        for t in ext:
            if not self.sift(t).members:
                return ClosednessDefect(t)

        # out-consistency: words sharing a leaf must agree on acceptance; a
        # leaf below an empty-word discriminator satisfies this already
        for leaf in self.root.leaves():
            if not leaf.members or EMPTY in leaf.path_labels():
                continue
            s1 = leaf.members[0]
            out = self.oracle.query(s1)
            for s2 in leaf.members[1:]:
                if self.oracle.query(s2) != out:
                    return ConsistencyDefect(s1, s2, EMPTY)
        for t in ext:
            leaf = self._sifted[t]
            if EMPTY in leaf.path_labels():
                continue
            s1 = leaf.members[0]
            if self.oracle.query(t) != self.oracle.query(s1):
                return ConsistencyDefect(s1, t, EMPTY)

        for leaf in self.root.leaves():
            members = leaf.members
            for i, s1 in enumerate(members):
                for s2 in members[i + 1:]:
                    for a in self.alphabet:
                        x, y = self.sift(s1 + (a,)), self.sift(s2 + (a,))
                        if x is not y:
                            u = lowest_common_ancestor(x, y).label
                            return ConsistencyDefect(s1, s2, (a,) + u)
        return None

    def fix(self, trace=None, on_split=None) -> int:
        fixes = 0
        while (defect := self.defects()) is not None:
            if isinstance(defect, ClosednessDefect):
                self.add_to_s(defect.word)
                if trace is not None:
                    trace.append(f"closedness defect: add {format_word(defect.word)} to S")
            else:
                leaf = self.sift(defect.s1)
                before = self.oracle.log.wire_queries
                self.split(leaf, defect.v)
                if on_split is not None:
                    on_split(self, self.oracle.log.wire_queries - before)
                if trace is not None:
                    trace.append(
                        f"consistency defect ({format_word(defect.s1)}, {format_word(defect.s2)}): "
                        f"split on {format_word(defect.v)}"
                    )
            fixes += 1
        return fixes

    def hypothesis(self) -> Hypothesis:
        defect = self.defects()
        if defect is not None:
            raise PreconditionError(f"tree has a defect: {defect}", defect)
        leaves = [leaf for leaf in self.root.leaves() if leaf.members]
        # states ordered by their representative's position in S
        position = {s: i for i, s in enumerate(self.S)}
        leaves.sort(key=lambda leaf: min(position[s] for s in leaf.members))
        state = {leaf.id: i for i, leaf in enumerate(leaves)}
        reps = [min(leaf.members, key=position.__getitem__) for leaf in leaves]
        delta = [[state[self.sift(s + (a,)).id] for a in self.alphabet] for s in reps]
        accepting = {i for i, s in enumerate(reps) if self.oracle.query(s)}
        dfa = Dfa(self.alphabet, state[self.sift(EMPTY).id], accepting, delta)
        return Hypothesis(dfa, tuple(reps))

    def nonempty_leaves(self) -> int:
        return sum(1 for leaf in self.root.leaves() if leaf.members)

    def dump(self) -> str:
        return render_tree(self.root)
