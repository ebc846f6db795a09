"""Exact linear algebra against brute-force oracles."""

import itertools
from fractions import Fraction

from mvworkbench.linalg import (
    affine_rank,
    affinely_independent,
    det,
    nullspace,
    rank,
    rref,
    solve,
)

F = Fraction


def permutation_det(rows):
    """Leibniz expansion, the independent oracle for small matrices."""
    n = len(rows)
    total = F(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = F(1)
        for i in range(n):
            prod *= F(rows[i][perm[i]])
        total += sign * prod
    return total


def test_det_matches_permutation_oracle(rng):
    for _ in range(60):
        n = rng.randint(1, 4)
        rows = [[F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        assert det(rows) == permutation_det(rows)


def test_det_known_values():
    assert det([[F(2)]]) == 2
    assert det([[1, 2], [3, 4]]) == -2
    assert det([[0, 1], [1, 0]]) == -1


def test_rref_reproduces_rank_and_pivots():
    m = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    reduced, pivots = rref(m)
    assert rank(m) == len(pivots) == 2
    for r, piv in enumerate(pivots):
        assert reduced[r][piv] == 1
        for other in range(len(reduced)):
            if other != r:
                assert reduced[other][piv] == 0


def test_solve_recovers_solution(rng):
    for _ in range(40):
        n = rng.randint(1, 4)
        a = [[F(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)]
        x = [F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
        b = [sum(a[i][j] * x[j] for j in range(n)) for i in range(n)]
        got = solve(a, b)
        if det(a) != 0:
            assert got == x
        else:
            # singular systems may be inconsistent or underdetermined; any
            # returned vector must still satisfy the equations
            if got is not None:
                for i in range(n):
                    assert sum(a[i][j] * got[j] for j in range(n)) == b[i]


def test_solve_inconsistent_returns_none():
    assert solve([[1, 1], [1, 1]], [0, 1]) is None


def test_nullspace_vectors_annihilate(rng):
    for _ in range(30):
        rows = [[F(rng.randint(-4, 4)) for _ in range(4)] for _ in range(rng.randint(1, 3))]
        basis = nullspace(rows)
        assert len(basis) == 4 - rank(rows)
        for v in basis:
            for row in rows:
                assert sum(r * c for r, c in zip(row, v)) == 0


def test_affine_rank_and_independence():
    collinear = [(0, 0), (F(1, 2), F(1, 2)), (1, 1)]
    assert affine_rank(collinear) == 1
    assert not affinely_independent(collinear)
    tri = [(0, 0), (1, 0), (0, 1)]
    assert affine_rank(tri) == 2
    assert affinely_independent(tri)
    assert affinely_independent([(F(1, 3), F(2, 3))])
