"""Exact linear algebra over Fraction matrices.

Small dense problems only (the geometry runs in ambient dimension <= 3);
clarity and exactness over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from mvworkbench import kernels
from mvworkbench.rationals import clear_denominators

Matrix = list[list[Fraction]]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = mat(rows)
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant via integer Bareiss after clearing row denominators."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    cleared = []
    scale = Fraction(1)
    for row in rows:
        ints = clear_denominators([Fraction(x) for x in row])
        frow = [Fraction(x) for x in row]
        # recover the factor this row was multiplied by
        k = None
        for a, b in zip(ints, frow):
            if b != 0:
                k = Fraction(a) / b
                break
        if k is None:
            return Fraction(0)
        scale *= k
        cleared.append(ints)
    return Fraction(kernels.bareiss_det(cleared)) / scale


def solve(a_rows: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve A x = b exactly; None when inconsistent or underdetermined."""
    m = mat(a_rows)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    aug = [row + [Fraction(v)] for row, v in zip(m, [Fraction(x) for x in b])]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    # consistency of remaining rows
    for r in range(len(pivots), nrows):
        if red[r][ncols] != 0:
            return None
    return x


def nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right nullspace."""
    m = mat(rows)
    if not m:
        return []
    ncols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of a point set (0 for a single point)."""
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    diffs = [[c - b for c, b in zip(p, base)] for p in pts[1:]]
    return rank(diffs) if diffs else 0


def affinely_independent(points: Sequence[Sequence]) -> bool:
    return affine_rank(points) == len(points) - 1
