"""Rational polytopes: V/H agreement, intersection, clipping, nearest points."""

from fractions import Fraction

import pytest

from mvworkbench.polytopes import Polytope, segment_polytope_intersection, unit_cube
from mvworkbench.rationals import norm_sq, sub

F = Fraction


def hrep_contains(poly, p):
    """Membership straight from the halfspace data, independent of contains()."""
    for normal, offset in poly.eqs:
        if sum(a * b for a, b in zip(normal, p)) != offset:
            return False
    for normal, offset in poly.ineqs:
        if sum(a * b for a, b in zip(normal, p)) < offset:
            return False
    return True


def vrep_contains(poly, p):
    """Membership via an exact convex-combination feasibility check."""
    from mvworkbench.linalg import solve

    verts = poly.vertices
    if len(verts) == 1:
        return tuple(p) == verts[0]
    # brute force over small vertex subsets: p is in the hull iff it is a
    # convex combination of some affinely independent subset (Caratheodory)
    import itertools

    n = len(p)
    for r in range(1, min(len(verts), n + 1) + 1):
        for subset in itertools.combinations(verts, r):
            rows = [[F(v[j]) for v in subset] for j in range(n)]
            rows.append([F(1)] * r)
            rhs = list(p) + [F(1)]
            sol = solve(rows, rhs)
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


def random_point(rng, n, d=12):
    return tuple(F(rng.randint(0, d), d) for _ in range(n))


def test_from_points_dedupes_and_keeps_extremes():
    p = Polytope.from_points([(0, 0), (1, 0), (0, 1), (0, 0), (F(1, 4), F(1, 4))])
    assert sorted(p.vertices) == [(0, 0), (0, 1), (1, 0)]
    assert p.dim == 2


def test_h_and_v_representations_agree(rng):
    triangle = Polytope.from_points([(0, 0), (1, 0), (F(1, 2), 1)])
    segment = Polytope.from_points([(0, 0), (F(1, 2), F(1, 2))])
    point = Polytope.from_points([(F(1, 3), F(2, 3))])
    for poly in (triangle, segment, point, unit_cube(2)):
        for _ in range(250):
            p = random_point(rng, 2)
            assert poly.contains(p) == hrep_contains(poly, p) == vrep_contains(poly, p)


def test_contains_polytope():
    outer = unit_cube(2)
    inner = Polytope.from_points([(F(1, 4), F(1, 4)), (F(1, 2), F(3, 4))])
    assert outer.contains_polytope(inner)
    assert not inner.contains_polytope(outer)


def test_is_point():
    assert Polytope.from_points([(F(1, 2),)]).is_point()
    assert not unit_cube(1).is_point()


def test_intersect_triangle_with_halfplane_strip():
    tri = Polytope.from_points([(0, 0), (1, 0), (0, 1)])
    strip = Polytope.from_points([(F(1, 2), 0), (1, 0), (1, 1), (F(1, 2), 1)])
    both = tri.intersect(strip)
    assert both is not None
    assert sorted(both.vertices) == [(F(1, 2), 0), (F(1, 2), F(1, 2)), (1, 0)]
    far = Polytope.from_points([(F(3, 4), F(3, 4)), (1, 1)])
    assert tri.intersect(far) is None


def test_intersect_commutes(rng):
    for _ in range(30):
        a = Polytope.from_points([random_point(rng, 2, 6) for _ in range(3)])
        b = Polytope.from_points([random_point(rng, 2, 6) for _ in range(3)])
        ab, ba = a.intersect(b), b.intersect(a)
        if ab is None:
            assert ba is None
        else:
            assert ab == ba


def test_clip_segment_endpoints():
    tri = Polytope.from_points([(0, 0), (1, 0), (0, 1)])
    a, b = (F(-1, 2), F(1, 4)), (F(3, 2), F(1, 4))
    # the line y = 1/4 enters through x = 0 and leaves through x + y = 1
    assert tri.clip_segment(a, b) == ((F(0), F(1, 4)), (F(3, 4), F(1, 4)))
    # a touch at a single vertex collapses to a one-point result
    assert tri.clip_segment((1, 0), (2, 0)) == ((F(1), F(0)),)


def test_clip_segment_misses():
    tri = Polytope.from_points([(0, 0), (1, 0), (0, 1)])
    assert tri.clip_segment((F(2), F(2)), (F(3), F(3))) == ()


def test_segment_polytope_intersection_point_touch():
    tri = Polytope.from_points([(0, 0), (1, 0), (0, 1)])
    hit = segment_polytope_intersection((1, 1), (F(1, 2), F(1, 2)), tri)
    assert hit is not None


def test_unit_cube():
    c = unit_cube(3)
    assert len(c.vertices) == 8
    assert c.contains((F(1, 3), F(1, 2), F(1)))
    assert not c.contains((F(1, 3), F(1, 2), F(3, 2)))


def test_nearest_point_properties(rng):
    tri = Polytope.from_points([(F(1, 4), F(1, 4)), (F(3, 4), F(1, 4)), (F(1, 2), F(3, 4))])
    for _ in range(40):
        x = random_point(rng, 2)
        near = tri.nearest_point(x)
        assert tri.contains(near)
        d = norm_sq(sub(near, x))
        # no vertex and no sampled interior point does better
        for v in tri.vertices:
            assert norm_sq(sub(v, x)) >= d
        for _ in range(20):
            y = random_point(rng, 2)
            if tri.contains(y):
                assert norm_sq(sub(y, x)) >= d
        if tri.contains(x):
            assert near == x


def test_faces_of_triangle():
    tri = Polytope.from_points([(0, 0), (1, 0), (0, 1)])
    faces = tri.faces()
    edges = {tuple(sorted(f)) for f in faces if len(f) == 2}
    assert ((0, 0), (0, 1)) in edges
    assert ((0, 0), (1, 0)) in edges
    assert ((0, 1), (1, 0)) in edges


def test_degenerate_inputs():
    with pytest.raises(Exception):
        Polytope.from_points([])
