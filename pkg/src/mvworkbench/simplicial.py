"""Rational simplices, simplicial complexes, splitting and refinement.

Conventions used throughout:

* an affine form is a pair (normal, offset) of integers with value
  <normal, x> - offset; "the >= side" means form value >= 0;
* simplex vertices are stored lexicographically sorted, so equality is
  structural and orderings are deterministic;
* splitting is done by iterated stellar subdivision of crossing edges,
  always splitting the lexicographically smallest crossing edge of a cell
  first. Cut points on shared faces agree between neighbours (the loci are
  restrictions of globally continuous functions), and the lex rule makes the
  induced face subdivisions identical, so complexes stay properly simplicial.

No floating point anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Callable, Iterable, Sequence

from mvworkbench import kernels
from mvworkbench.linalg import affine_rank, nullspace, solve
from mvworkbench.rationals import (
    Point,
    dot,
    primitive_vector,
    scale_point,
    sub,
)

Form = tuple[tuple[int, ...], int]


def form_at(form: Form, p: Sequence[Fraction]) -> Fraction:
    normal, offset = form
    return dot([Fraction(c) for c in normal], p) - offset


def form_sign_scaled(form: Form, nums: Sequence[int], den: int) -> int:
    v = kernels.form_value_scaled(form[0], form[1], nums, den)
    return (v > 0) - (v < 0)


def integer_form(normal: Sequence, offset) -> Form:
    """Primitive integer form from rational data; orientation preserved."""
    ints = primitive_vector(tuple(Fraction(c) for c in normal) + (Fraction(offset),))
    return ints[:-1], ints[-1]


def canonical_form(form: Form) -> Form:
    """Primitive representative with lexicographically positive normal."""
    normal, offset = form
    vec = primitive_vector(tuple(normal) + (offset,))
    normal, offset = vec[:-1], vec[-1]
    for c in normal:
        if c != 0:
            if c < 0:
                normal = tuple(-x for x in normal)
                offset = -offset
            break
    return normal, offset


def hyperplane_through(points: Sequence[Point]) -> Form | None:
    """Integer form vanishing on the affine span of n points in n-space.

    Returns None when the points do not span a hyperplane.
    """
    base = points[0]
    diffs = [list(sub(p, base)) for p in points[1:]]
    if not diffs:
        diffs = [[Fraction(0)] * len(base)]
    ns = nullspace(diffs)
    if len(ns) != 1:
        return None
    normal = primitive_vector(ns[0])
    offset_q = dot([Fraction(c) for c in normal], base)
    # normal is integer and points rational; clear the offset denominator
    if offset_q.denominator != 1:
        d = offset_q.denominator
        normal = tuple(c * d for c in normal)
        offset = offset_q.numerator
    else:
        offset = offset_q.numerator
    return canonical_form((normal, offset))


_FACET_MEMO: dict[tuple, tuple] = {}


class Simplex:
    """A k-simplex in [0,1]^n with rational vertices, stored sorted."""

    __slots__ = ("vertices", "ambient", "_facets", "_bbox")

    def __init__(self, vertices: Iterable[Sequence]):
        verts = tuple(sorted(tuple(Fraction(c) for c in v) for v in vertices))
        if not verts:
            raise ValueError("simplex needs at least one vertex")
        self.vertices: tuple[Point, ...] = verts
        self.ambient = len(verts[0])
        if len(set(verts)) != len(verts):
            raise ValueError("repeated vertex in simplex")
        self._facets: tuple[Form, ...] | None = None
        self._bbox: tuple[tuple[Fraction, Fraction], ...] | None = None

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def __eq__(self, other) -> bool:
        return isinstance(other, Simplex) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Simplex({list(self.vertices)!r})"

    def check_independent(self) -> None:
        if affine_rank(self.vertices) != self.dim:
            raise ValueError("affinely dependent simplex vertices")

    @property
    def bbox(self):
        if self._bbox is None:
            cols = list(zip(*self.vertices))
            self._bbox = tuple((min(col), max(col)) for col in cols)
        return self._bbox

    def bbox_overlaps(self, other: "Simplex") -> bool:
        return all(
            lo <= ohi and olo <= hi
            for (lo, hi), (olo, ohi) in zip(self.bbox, other.bbox)
        )

    @property
    def facet_forms(self) -> tuple[Form, ...]:
        """Inward-oriented facet forms; only defined for full-dimensional cells."""
        if self._facets is None:
            if self.dim != self.ambient:
                raise ValueError("facet forms need a full-dimensional simplex")
            cached = _FACET_MEMO.get(self.vertices)
            if cached is not None:
                self._facets = cached
                return cached
            forms = []
            for i, v in enumerate(self.vertices):
                others = self.vertices[:i] + self.vertices[i + 1 :]
                form = hyperplane_through(others)
                if form is None:
                    raise ValueError("degenerate simplex")
                if form_at(form, v) < 0:
                    form = (tuple(-c for c in form[0]), -form[1])
                forms.append(form)
            self._facets = tuple(forms)
            if len(_FACET_MEMO) < 1 << 16:
                _FACET_MEMO[self.vertices] = self._facets
        return self._facets

    def contains_scaled(self, nums: Sequence[int], den: int) -> bool:
        return kernels.point_in_cell_scaled(self.facet_forms, nums, den)

    def contains(self, p: Sequence[Fraction]) -> bool:
        nums, den = scale_point([Fraction(c) for c in p])
        return self.contains_scaled(nums, den)

    def barycenter(self) -> Point:
        k = len(self.vertices)
        return tuple(sum(col, start=Fraction(0)) / k for col in zip(*self.vertices))

    def volume(self) -> Fraction:
        """Euclidean volume (full-dimensional cells only)."""
        base = self.vertices[0]
        rows = [list(sub(v, base)) for v in self.vertices[1:]]
        from mvworkbench.linalg import det

        d = det(rows)
        fact = 1
        for i in range(2, self.dim + 1):
            fact *= i
        return abs(d) / fact

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))]


class Complex:
    """A finite simplicial complex of full-dimensional cells covering a region."""

    __slots__ = ("ambient", "cells")

    def __init__(self, ambient: int, cells: Iterable[Simplex]):
        self.ambient = ambient
        self.cells: tuple[Simplex, ...] = tuple(
            sorted(cells, key=lambda s: s.vertices)
        )
        for c in self.cells:
            if c.ambient != ambient:
                raise ValueError("mixed ambient dimensions in complex")

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Complex)
            and self.ambient == other.ambient
            and self.cells == other.cells
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.cells))

    def __repr__(self) -> str:
        return f"Complex(n={self.ambient}, cells={len(self.cells)})"

    def vertices(self) -> list[Point]:
        seen: set[Point] = set()
        for c in self.cells:
            seen.update(c.vertices)
        return sorted(seen)

    def total_volume(self) -> Fraction:
        return sum((c.volume() for c in self.cells), start=Fraction(0))


def kuhn_complex(n: int) -> Complex:
    """The permutation triangulation of the unit cube, n! cells."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    cells = []
    for perm in permutations(range(n)):
        verts = [tuple(Fraction(0) for _ in range(n))]
        cur = list(verts[0])
        for axis in perm:
            cur[axis] += 1
            verts.append(tuple(Fraction(c) for c in cur))
        cells.append(Simplex(verts))
    return Complex(n, cells)


def _edge_cut(form: Form, a: Point, b: Point) -> Point:
    va = form_at(form, a)
    vb = form_at(form, b)
    t = va / (va - vb)
    return tuple(x + t * (y - x) for x, y in zip(a, b))


def split_items_by_forms(
    items: Sequence[tuple[Simplex, Form, object]],
) -> list[tuple[Simplex, object, int]]:
    """Split each (cell, form, payload) along its form's zero locus.

    The forms must be restrictions of one globally continuous piecewise-linear
    function (a single global hyperplane qualifies). Returns (cell, payload,
    side) triples where side is +1 on the >= part and -1 on the <= part; cells
    contained in the locus land on the +1 side.
    """
    out: list[tuple[Simplex, object, int]] = []
    work = [(s, f, p) for (s, f, p) in items]
    while work:
        simp, form, payload = work.pop()
        signs = {}
        for v in simp.vertices:
            val = form_at(form, v)
            signs[v] = (val > 0) - (val < 0)
        crossing = [
            (a, b)
            for (a, b) in simp.edges()
            if signs[a] * signs[b] < 0
        ]
        if not crossing:
            neg = any(s < 0 for s in signs.values())
            out.append((simp, payload, -1 if neg else 1))
            continue
        a, b = min(crossing)
        w = _edge_cut(form, a, b)
        rest = [v for v in simp.vertices if v != a and v != b]
        work.append((Simplex(rest + [a, w]), form, payload))
        work.append((Simplex(rest + [b, w]), form, payload))
    out.sort(key=lambda item: (item[0].vertices, item[2]))
    return out


def split_complex_by_hyperplane(
    complex_: Complex, normal: Sequence[Fraction], offset: Fraction
) -> Complex:
    """Refine a complex so every cell lies on one closed side of a hyperplane.

    Degenerate inputs (zero normal) are rejected; a hyperplane missing the
    region leaves the complex unchanged up to cell identity.
    """
    if all(c == 0 for c in normal):
        raise ValueError("hyperplane normal must be nonzero")
    ints = primitive_vector(tuple(normal) + (Fraction(offset),))
    form: Form = (ints[:-1], ints[-1])
    items = [(cell, form, idx) for idx, cell in enumerate(complex_.cells)]
    pieces = split_items_by_forms(items)
    return Complex(complex_.ambient, [s for s, _, _ in pieces])


def _facet_separated(a: Simplex, b: Simplex) -> bool:
    """True when a facet hyperplane of a keeps all of b on the outside.

    Cheap interior-disjointness prefilter: the intersection then lies inside
    the hyperplane and cannot be full-dimensional.
    """
    for form in a.facet_forms:
        if all(form_at(form, v) <= 0 for v in b.vertices):
            return True
    return False


def _simplex_intersection_vertices(a: Simplex, b: Simplex) -> list[Point]:
    """All vertices of the convex polytope a&b (ambient dimension <= 3)."""
    n = a.ambient
    pts: set[Point] = set()
    fa, fb = a.facet_forms, b.facet_forms
    for v in a.vertices:
        if b.contains(v):
            pts.add(v)
    for v in b.vertices:
        if a.contains(v):
            pts.add(v)
    if n >= 2:
        for edges_of, forms_of_other in ((a, fb), (b, fa)):
            for p, q in edges_of.edges():
                d = sub(q, p)
                for form in forms_of_other:
                    denom = dot([Fraction(c) for c in form[0]], d)
                    if denom == 0:
                        continue
                    t = (Fraction(form[1]) - dot([Fraction(c) for c in form[0]], p)) / denom
                    if 0 <= t <= 1:
                        w = tuple(x + t * dx for x, dx in zip(p, d))
                        if a.contains(w) and b.contains(w):
                            pts.add(w)
    return sorted(pts)


def _proper_faces(
    vert_ids: tuple[int, ...],
    dim: int,
    points: Sequence[Point],
    tight: Sequence[set[int]],
    nconstraints: int,
) -> list[tuple[int, ...]]:
    """Facets of the face spanned by vert_ids, via shared tight constraints."""
    found: dict[frozenset[int], tuple[int, ...]] = {}
    for c in range(nconstraints):
        sub_ids = tuple(v for v in vert_ids if c in tight[v])
        if len(sub_ids) < dim or len(sub_ids) == len(vert_ids):
            continue
        if affine_rank([points[v] for v in sub_ids]) == dim - 1:
            found.setdefault(frozenset(sub_ids), sub_ids)
    return sorted(found.values())


def _pull_triangulate(
    vert_ids: tuple[int, ...],
    dim: int,
    points: Sequence[Point],
    tight: Sequence[set[int]],
    nconstraints: int,
) -> list[tuple[int, ...]]:
    if len(vert_ids) == dim + 1:
        return [vert_ids]
    v0 = min(vert_ids, key=lambda i: points[i])
    out = []
    for facet in _proper_faces(vert_ids, dim, points, tight, nconstraints):
        if v0 in facet:
            continue
        for piece in _pull_triangulate(facet, dim - 1, points, tight, nconstraints):
            out.append((v0,) + piece)
    return out


def common_refinement(
    a: Complex, b: Complex
) -> tuple[Complex, list[tuple[int, int]]]:
    """Mutual refinement of two complexes covering the same region.

    Returns the refined complex plus, per refined cell, the indices of the
    containing cells of a and b. Pieces are triangulated by pulling from the
    lexicographically smallest vertex, which keeps shared faces consistent.
    """
    if a.ambient != b.ambient:
        raise ValueError("refinement needs matching ambient dimension")
    n = a.ambient
    if a.cells == b.cells:
        return a, [(i, i) for i in range(len(a.cells))]
    tagged: list[tuple[Simplex, tuple[int, int]]] = []
    for ia, ca in enumerate(a.cells):
        for ib, cb in enumerate(b.cells):
            if not ca.bbox_overlaps(cb):
                continue
            if ca == cb:
                tagged.append((ca, (ia, ib)))
                continue
            if _facet_separated(ca, cb) or _facet_separated(cb, ca):
                continue
            pts = _simplex_intersection_vertices(ca, cb)
            if len(pts) < n + 1 or affine_rank(pts) < n:
                continue
            constraints = list(ca.facet_forms) + list(cb.facet_forms)
            tight = [
                {ci for ci, f in enumerate(constraints) if form_at(f, p) == 0}
                for p in pts
            ]
            ids = tuple(range(len(pts)))
            for piece in _pull_triangulate(ids, n, pts, tight, len(constraints)):
                tagged.append((Simplex([pts[i] for i in piece]), (ia, ib)))
    tagged.sort(key=lambda item: item[0].vertices)
    refined = Complex(n, [s for s, _ in tagged])
    return refined, [prov for _, prov in tagged]


def check_complex(complex_: Complex, expect_volume: Fraction | None = None) -> None:
    """Validate the simplicial-complex property; raises AssertionError.

    Intended for tests: pairwise intersections must be common faces, cells must
    be affinely independent, and (optionally) volumes must add up.
    """
    cells = complex_.cells
    for c in cells:
        c.check_independent()
    for i in range(len(cells)):
        for j in range(i + 1, len(cells)):
            ca, cb = cells[i], cells[j]
            if not ca.bbox_overlaps(cb):
                continue
            shared = set(ca.vertices) & set(cb.vertices)
            pts = _simplex_intersection_vertices(ca, cb)
            if not pts:
                continue
            if shared:
                hull_ok = all(_in_convex_hull(p, sorted(shared)) for p in pts)
            else:
                hull_ok = False
            assert hull_ok, f"cells {i} and {j} overlap beyond a common face"
    if expect_volume is not None:
        assert complex_.total_volume() == expect_volume, "volume mismatch"


def _in_convex_hull(p: Point, hull_points: Sequence[Point]) -> bool:
    if not hull_points:
        return False
    k = len(hull_points)
    rows = [[Fraction(v[d]) for v in hull_points] for d in range(len(p))]
    rows.append([Fraction(1)] * k)
    rhs = list(p) + [Fraction(1)]
    # brute: try barycentric solutions on subsets forming affine bases
    from itertools import combinations

    for size in range(1, k + 1):
        for combo in combinations(range(k), size):
            sub_rows = [[rows[d][c] for c in combo] for d in range(len(rows))]
            sol = solve(sub_rows, rhs)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False
