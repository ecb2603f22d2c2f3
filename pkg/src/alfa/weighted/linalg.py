"""Exact linear algebra over the rationals.

Vectors are tuples of :class:`fractions.Fraction`; matrices are sequences of
row vectors.  Everything here is row-oriented: ``solve_coords(rows, t)``
finds ``l`` with ``l · rows = t``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import InputError

Vector = tuple


def vec(values) -> Vector:
    return tuple(Fraction(x) for x in values)


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def vec_mat(x: Sequence, m: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    if len(x) != len(m):
        raise InputError(f"dimension mismatch: vector of {len(x)} times matrix of {len(m)} rows")
    if not m:
        return ()
    cols = len(m[0])
    out = [Fraction(0)] * cols
    for xi, row in zip(x, m):
        if xi:
            for j in range(cols):
                out[j] += xi * row[j]
    return tuple(out)


def mat_vec(m: Sequence[Sequence], y: Sequence) -> Vector:
    """Matrix times column vector."""
    return tuple(dot(row, y) for row in m)


def transpose(m: Sequence[Sequence], cols: int | None = None) -> list:
    if not m:
        return [() for _ in range(cols or 0)]
    return [tuple(row[j] for row in m) for j in range(len(m[0]))]


class RowBasis:
    """Incrementally maintained row space with coordinate tracking.

    Each stored echelon row remembers how it is expressed in terms of the
    rows passed to :meth:`add`, so membership tests also yield coordinates.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: list[Vector] = []  # original rows accepted into the basis
        self._echelon: list[tuple[int, list, list]] = []  # (pivot, reduced row, combination)

    def __len__(self):
        return len(self.rows)

    def _reduce(self, target):
        if len(target) != self.width:
            raise InputError(f"vector of length {len(target)}, expected {self.width}")
        r = [Fraction(x) for x in target]
        combo = [Fraction(0)] * len(self.rows)
        for pivot, erow, ecombo in self._echelon:
            f = r[pivot]
            if f:
                for j in range(pivot, self.width):
                    if erow[j]:
                        r[j] -= f * erow[j]
                for k, c in enumerate(ecombo):
                    if c:
                        combo[k] += f * c
        return r, combo

    def coords(self, target) -> Vector | None:
        """``l`` with ``l · rows = target``, or None when outside the span."""
        r, combo = self._reduce(target)
        if any(r):
            return None
        return tuple(combo)

    def contains(self, target) -> bool:
        return self.coords(target) is not None

    def add(self, row) -> bool:
        """Add ``row`` if independent; returns whether it was added."""
        r, combo = self._reduce(row)
        pivot = next((j for j, x in enumerate(r) if x), None)
        if pivot is None:
            return False
        self.rows.append(tuple(Fraction(x) for x in row))
        for entry in self._echelon:
            entry[2].append(Fraction(0))
        # r = row - sum(combo_i * rows_i); normalise so r[pivot] = 1
        inv = 1 / r[pivot]
        erow = [x * inv for x in r]
        ecombo = [-c * inv for c in combo] + [inv]
        # keep echelon rows fully reduced on the new pivot
        for idx, (p, other, ocombo) in enumerate(self._echelon):
            f = other[pivot]
            if f:
                for j in range(self.width):
                    other[j] -= f * erow[j]
                for j in range(len(ocombo)):
                    ocombo[j] -= f * ecombo[j]
        self._echelon.append((pivot, erow, ecombo))
        self._echelon.sort(key=lambda e: e[0])
        return True


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    basis = RowBasis(len(rows[0]))
    for row in rows:
        basis.add(row)
    return len(basis)


def solve_coords(rows: Sequence[Sequence], target: Sequence) -> Vector | None:
    """Coefficients ``l`` with ``l · rows = target`` (one per row of
    ``rows``), or None when ``target`` is outside the row span."""
    width = len(target)
    for row in rows:
        if len(row) != width:
            raise InputError(f"row of length {len(row)} against target of length {width}")
    basis = RowBasis(width)
    chosen = [i for i, row in enumerate(rows) if basis.add(row)]
    coords = basis.coords(target)
    if coords is None:
        return None
    full = [Fraction(0)] * len(rows)
    for i, c in zip(chosen, coords):
        full[i] = c
    return tuple(full)


def in_span(rows: Sequence[Sequence], target: Sequence) -> bool:
    return solve_coords(rows, target) is not None
