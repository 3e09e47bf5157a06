"""Exact Gaussian elimination over the rationals.

Matrices are plain lists of rows of :class:`fractions.Fraction`.  Everything
here is small (a few dozen columns at most), so no attempt is made at
fraction-free or sparse elimination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.

    Returns the nonzero rows of the reduced matrix and the list of pivot
    columns (one per returned row, increasing).
    """
    m = to_matrix(rows)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def kernel(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of the right null space {x : A x = 0}, as a list of vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def transpose(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def solve_in_span(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coordinates of ``v`` in the span of ``basis`` (independent vectors), or None."""
    n = len(basis)
    if n == 0:
        return [] if all(x == 0 for x in v) else None
    # columns are basis vectors, augmented by v
    aug = [[basis[j][i] for j in range(n)] + [v[i]] for i in range(len(v))]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    coords = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        coords[pc] = row[n]
    return coords
