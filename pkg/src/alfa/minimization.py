"""DFA minimization in two phases plus the splitting-tree variant.

``reachable_part`` grows a set of access words until it is closed under
transitions; ``moore_merge`` grows a set of separating suffixes until the
induced state signatures are consistent, then takes the quotient.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .dfa import Dfa
from .tree import Node, lowest_common_ancestor, render_tree
from .words import EMPTY, Word


@dataclass(frozen=True)
class AccessSet:
    access: dict  # state id (in the returned DFA) -> shortest access word
    words: tuple  # the same words in BFS order; words[q] reaches state q


@dataclass(frozen=True)
class SeparatorSet:
    words: tuple


def reachable_part(d: Dfa) -> tuple[Dfa, AccessSet]:
    """Restrict ``d`` to its reachable states, renumbered in BFS order."""
    access = {d.initial: EMPTY}
    order = [d.initial]
    queue = deque(order)
    while queue:
        q = queue.popleft()
        for i, a in enumerate(d.alphabet):
            p = d.delta[q][i]
            if p not in access:
                access[p] = access[q] + (a,)
                order.append(p)
                queue.append(p)
    ids = {q: i for i, q in enumerate(order)}
    delta = [[ids[p] for p in d.delta[q]] for q in order]
    accepting = {ids[q] for q in order if q in d.accepting}
    words = tuple(access[q] for q in order)
    return Dfa(d.alphabet, 0, accepting, delta), AccessSet(dict(enumerate(words)), words)


def _columns(d: Dfa):
    """Lazy table ``col[e][q]`` = 1 iff state q accepts suffix e."""
    cols = {EMPTY: tuple(int(q in d.accepting) for q in range(d.size))}

    def col(e: Word):
        if e not in cols:
            tail = col(e[1:])
            i = d.symbol_index(e[0])
            cols[e] = tuple(tail[d.delta[q][i]] for q in range(d.size))
        return cols[e]

    return col


def quotient(d: Dfa, block_of: list) -> Dfa:
    """Merge states with equal ``block_of`` keys; blocks are numbered by
    their least state id."""
    ids: dict = {}
    reps = []
    for q in range(d.size):
        if block_of[q] not in ids:
            ids[block_of[q]] = len(reps)
            reps.append(q)
    delta = [[ids[block_of[p]] for p in d.delta[q]] for q in reps]
    accepting = {ids[block_of[q]] for q in reps if q in d.accepting}
    return Dfa(d.alphabet, ids[block_of[d.initial]], accepting, delta)


def moore_merge(d: Dfa) -> tuple[Dfa, SeparatorSet]:
    col = _columns(d)
    E = [EMPTY]
    n = d.size
    while True:
        sig = [tuple(col(e)[q] for e in E) for q in range(n)]
        defect = None
        for q1 in range(n):
            for q2 in range(q1 + 1, n):
                if sig[q1] != sig[q2]:
                    continue
                for i, a in enumerate(d.alphabet):
                    p1, p2 = d.delta[q1][i], d.delta[q2][i]
                    for e in E:
                        if col(e)[p1] != col(e)[p2]:
                            defect = (a,) + e
                            break
                    if defect:
                        break
                if defect:
                    break
            if defect:
                break
        if defect is None:
            return quotient(d, sig), SeparatorSet(tuple(E))
        E.append(defect)


class SplittingTree:
    """Splitting tree over the states of a DFA."""

    def __init__(self, root: Node, dfa: Dfa):
        self.root = root
        self.dfa = dfa
        self.leaf_of = {q: leaf for leaf in root.leaves() for q in leaf.members}

    def leaves(self):
        return list(self.root.leaves())

    def identifiers(self, q: int) -> list:
        """Discriminators on the root-to-leaf path of state ``q``."""
        return self.leaf_of[q].path_labels()

    def labels(self) -> list:
        out = []

        def walk(node):
            if not node.is_leaf:
                out.append(node.label)
                walk(node.left)
                walk(node.right)

        walk(self.root)
        return out

    def dump(self) -> str:
        return render_tree(self.root, member_fmt=lambda q: f"q{q}")


def splitting_tree(d: Dfa) -> SplittingTree:
    col = _columns(d)
    root = Node(list(range(d.size)))
    leaf_of = {q: root for q in range(d.size)}

    def split(leaf: Node, v: Word):
        accept = col(v)
        leaf.label = v
        leaf.left = Node([q for q in leaf.members if accept[q]], leaf)
        leaf.right = Node([q for q in leaf.members if not accept[q]], leaf)
        for child in (leaf.left, leaf.right):
            for q in child.members:
                leaf_of[q] = child
        leaf.members = []

    if len({q in d.accepting for q in range(d.size)}) > 1:
        split(root, EMPTY)

    changed = True
    while changed:
        changed = False
        for leaf in list(root.leaves()):
            for i, a in enumerate(d.alphabet):
                # resolve every inconsistency on ``a`` inside this block at once
                pending = [leaf]
                while pending:
                    block = pending.pop()
                    if len(block.members) < 2:
                        continue
                    targets = [leaf_of[d.delta[q][i]] for q in block.members]
                    first = targets[0]
                    other = next((t for t in targets if t is not first), None)
                    if other is None:
                        continue
                    u = lowest_common_ancestor(first, other).label
                    split(block, (a,) + u)
                    pending.extend([block.left, block.right])
                    changed = True
            # the leaf may have become internal; later symbols act on its leaves
    return SplittingTree(root, d)


def splitting_tree_minimize(d: Dfa) -> tuple[Dfa, SplittingTree]:
    tree = splitting_tree(d)
    block_of = [tree.leaf_of[q].id for q in range(d.size)]
    return quotient(d, block_of), tree


def minimize(d: Dfa) -> Dfa:
    reach, _ = reachable_part(d)
    merged, _ = moore_merge(reach)
    return merged

