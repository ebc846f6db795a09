"""Simplices, complexes, hyperplane splitting, and common refinement.

The refinement invariants mirror how the calculus uses this module: every
refined cell must live inside one cell of each input, total volume must be
conserved, and two complexes covering the cube must classify random points
the same way before and after refinement.
"""

from fractions import Fraction

import pytest

from mvworkbench.simplicial import (
    Complex,
    Simplex,
    canonical_form,
    check_complex,
    common_refinement,
    form_at,
    hyperplane_through,
    integer_form,
    kuhn_complex,
    split_complex_by_hyperplane,
)
from mvworkbench.polytopes import Polytope

F = Fraction


def random_cube_point(rng, n, d=16):
    return tuple(F(rng.randint(0, d), d) for _ in range(n))


def test_simplex_volume_oracle():
    assert Simplex([(0, 0), (1, 0), (0, 1)]).volume() == F(1, 2)
    assert Simplex([(0,), (F(1, 3),)]).volume() == F(1, 3)
    assert Simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]).volume() == F(1, 6)


def test_simplex_rejects_dependent_vertices():
    with pytest.raises(Exception):
        Simplex([(0, 0), (F(1, 2), F(1, 2)), (1, 1)]).check_independent()


def test_simplex_contains():
    t = Simplex([(0, 0), (1, 0), (0, 1)])
    assert t.contains((F(1, 4), F(1, 4)))
    assert t.contains((0, 0))
    assert not t.contains((F(3, 4), F(3, 4)))


def test_kuhn_complex_tiles_the_cube(rng):
    for n in (1, 2, 3):
        cx = kuhn_complex(n)
        import math

        assert len(cx.cells) == math.factorial(n)
        assert cx.total_volume() == 1
        check_complex(cx, expect_volume=F(1))
        # interior points land in at least one cell
        for _ in range(50):
            p = random_cube_point(rng, n)
            assert any(c.contains(p) for c in cx.cells)


def test_hyperplane_through_and_forms():
    form = hyperplane_through([(F(0), F(0)), (F(1, 2), F(1, 2))])
    assert form is not None
    assert form_at(form, (F(1, 4), F(1, 4))) == 0
    assert form_at(form, (F(1), F(0))) != 0
    # full-dimensional point sets span no hyperplane
    assert hyperplane_through([(F(0), F(0)), (F(1), F(0)), (F(0), F(1))]) is None
    assert canonical_form(integer_form((2, -4), 6)) == canonical_form(
        integer_form((1, -2), 3)
    )


def test_split_conserves_volume(rng):
    for n in (1, 2, 3):
        cx = kuhn_complex(n)
        for _ in range(8):
            normal = tuple(rng.randint(-3, 3) for _ in range(n))
            if all(c == 0 for c in normal):
                continue
            offset = F(rng.randint(-2, 4), 4)
            split = split_complex_by_hyperplane(cx, normal, offset)
            assert split.total_volume() == 1
            check_complex(split, expect_volume=F(1))
            # each split cell sits on one side of the cutting plane
            for cell in split.cells:
                signs = {
                    1 if form_at((normal, offset), v) > 0
                    else (-1 if form_at((normal, offset), v) < 0 else 0)
                    for v in cell.vertices
                }
                assert not ({1, -1} <= signs)


def test_common_refinement_invariants(rng):
    a = kuhn_complex(2)
    b = split_complex_by_hyperplane(a, (1, -1), F(0))
    b = split_complex_by_hyperplane(b, (2, 1), F(1))
    ref, provenance = common_refinement(a, b)
    assert ref.total_volume() == 1
    check_complex(ref, expect_volume=F(1))
    assert len(provenance) == len(ref.cells)
    hulls_a = [Polytope.from_points(c.vertices) for c in a.cells]
    hulls_b = [Polytope.from_points(c.vertices) for c in b.cells]
    for cell, (ia, ib) in zip(ref.cells, provenance):
        hull = Polytope.from_points(cell.vertices)
        assert hulls_a[ia].contains_polytope(hull)
        assert hulls_b[ib].contains_polytope(hull)
    # coverage: every random point is still covered after refinement
    for _ in range(200):
        p = random_cube_point(rng, 2)
        assert any(c.contains(p) for c in ref.cells)


def test_common_refinement_self_is_identity():
    cx = kuhn_complex(2)
    ref, provenance = common_refinement(cx, cx)
    assert ref == cx
    assert provenance == [(i, i) for i in range(len(cx.cells))]


def test_refinement_is_symmetric_on_coverage(rng):
    a = split_complex_by_hyperplane(kuhn_complex(2), (1, -2), F(0))
    b = split_complex_by_hyperplane(kuhn_complex(2), (3, 1), F(2))
    ab, _ = common_refinement(a, b)
    ba, _ = common_refinement(b, a)
    assert ab.total_volume() == ba.total_volume() == 1
    for _ in range(200):
        p = random_cube_point(rng, 2)
        in_ab = any(c.contains(p) for c in ab.cells)
        in_ba = any(c.contains(p) for c in ba.cells)
        assert in_ab == in_ba


def test_complex_canonical_order_is_deterministic():
    cells = [
        Simplex([(0, 0), (1, 0), (0, 1)]),
        Simplex([(1, 0), (0, 1), (1, 1)]),
    ]
    c1 = Complex(2, cells)
    c2 = Complex(2, list(reversed(cells)))
    assert c1 == c2
    assert [c.vertices for c in c1.cells] == [c.vertices for c in c2.cells]


def test_check_complex_rejects_improper_overlap():
    # two triangles overlapping in a 2-dimensional region, not a common face
    bad = Complex(
        2,
        [
            Simplex([(0, 0), (1, 0), (0, 1)]),
            Simplex([(0, 0), (1, 0), (F(1, 2), F(1, 2))]),
        ],
    )
    with pytest.raises(Exception):
        check_complex(bad)
