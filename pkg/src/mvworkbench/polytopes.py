"""Rational convex polytopes in [0,1]^n, n <= 3.

Both representations are kept: true vertices, and integer constraint forms
split into equations (tight on the whole polytope) and inequalities. The
constraint forms use the same (normal, offset) convention as simplicial.py.

Scale limits follow the workbench contract: ambient dimension at most 3 and
at most 64 vertices, which keeps the brute-force facet enumeration exact and
cheap. No floating point.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from mvworkbench.linalg import affine_rank, nullspace, rank, rref, solve
from mvworkbench.rationals import Point, dot, norm_sq, sub
from mvworkbench.simplicial import Form, canonical_form, form_at, integer_form

MAX_VERTICES = 64
_clear_form = integer_form


class Polytope:
    __slots__ = ("ambient", "dim", "vertices", "eqs", "ineqs", "_faces")

    def __init__(self, ambient, dim, vertices, eqs, ineqs):
        self.ambient = ambient
        self.dim = dim
        self.vertices: tuple[Point, ...] = vertices
        self.eqs: tuple[Form, ...] = eqs
        self.ineqs: tuple[Form, ...] = ineqs
        self._faces = None

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "Polytope":
        pts = sorted({tuple(Fraction(c) for c in p) for p in points})
        if not pts:
            raise ValueError("polytope needs at least one point")
        if len(pts) > MAX_VERTICES:
            raise ValueError(f"too many points (> {MAX_VERTICES})")
        n = len(pts[0])
        base = pts[0]
        d = affine_rank(pts)

        # affine hull equations
        diffs = [list(sub(p, base)) for p in pts[1:]]
        eqs = []
        if d < n:
            for vec in nullspace(diffs if diffs else [[Fraction(0)] * n]):
                eqs.append(canonical_form(_clear_form(vec, dot(vec, base))))
        eqs_t = tuple(sorted(eqs))

        if d == 0:
            return cls(n, 0, (base,), eqs_t, ())

        # chart onto the hull: direction basis rows from the rref of diffs
        red, pivots = rref(diffs)
        basis = [red[i] for i in range(len(pivots))]
        amat = [[basis[k][row] for k in range(d)] for row in range(n)]
        charts = []
        for p in pts:
            t = solve(amat, list(sub(p, base)))
            if t is None:
                raise ValueError("point outside its own affine hull?")
            charts.append(tuple(t))

        # facets in chart coordinates by brute-force hyperplane enumeration
        chart_facets: dict[Form, set[int]] = {}
        if d == 1:
            order = sorted(range(len(pts)), key=lambda i: charts[i][0])
            lo, hi = order[0], order[-1]
            chart_facets[((1,), charts[lo][0])] = {
                i for i in range(len(pts)) if charts[i] == charts[lo]
            }
            chart_facets[((-1,), -charts[hi][0])] = {
                i for i in range(len(pts)) if charts[i] == charts[hi]
            }
            verts_idx = sorted({lo, hi}, key=lambda i: pts[i])
        else:
            for combo in combinations(range(len(pts)), d):
                cpts = [charts[i] for i in combo]
                cdiffs = [list(sub(c, cpts[0])) for c in cpts[1:]]
                ns = nullspace(cdiffs)
                if len(ns) != 1:
                    continue
                raw = _clear_form(ns[0], dot(ns[0], cpts[0]))
                oriented = _oriented_chart(raw, charts)
                if oriented is None:
                    continue
                tightset = {
                    i for i, c in enumerate(charts) if _chart_val(oriented, c) == 0
                }
                if affine_rank([charts[i] for i in tightset]) == d - 1:
                    chart_facets.setdefault(oriented, set()).update(tightset)
            vert_flags = []
            for i in range(len(pts)):
                normals = [f[0] for f, ts in chart_facets.items() if i in ts]
                vert_flags.append(normals and rank(normals) == d)
            verts_idx = [i for i, flag in enumerate(vert_flags) if flag]

        # lift chart facets to ambient forms
        gram = [
            [dot(basis[i], basis[j]) for j in range(d)] for i in range(d)
        ]
        ineqs = []
        for (mc, c), _ in sorted(chart_facets.items()):
            y = solve(gram, [Fraction(v) for v in mc])
            if y is None:
                raise ValueError("degenerate chart metric")
            m_amb = [
                sum((y[k] * basis[k][row] for k in range(d)), start=Fraction(0))
                for row in range(n)
            ]
            ineqs.append(_clear_form(m_amb, dot(m_amb, base) + c))
        verts = tuple(pts[i] for i in sorted(verts_idx, key=lambda i: pts[i]))
        return cls(n, d, verts, eqs_t, tuple(sorted(set(ineqs))))

    def __eq__(self, other) -> bool:
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Polytope(dim={self.dim}, vertices={list(self.vertices)!r})"

    def contains(self, p: Sequence[Fraction]) -> bool:
        pt = tuple(Fraction(c) for c in p)
        return all(form_at(f, pt) == 0 for f in self.eqs) and all(
            form_at(f, pt) >= 0 for f in self.ineqs
        )

    def contains_polytope(self, other: "Polytope") -> bool:
        return all(self.contains(v) for v in other.vertices)

    def is_point(self) -> bool:
        return self.dim == 0

    def intersect(self, other: "Polytope") -> "Polytope | None":
        """Exact intersection; None when empty."""
        if self.ambient != other.ambient:
            raise ValueError("ambient dimension mismatch")
        n = self.ambient
        forms = list(
            dict.fromkeys(
                list(self.eqs)
                + list(self.ineqs)
                + list(other.eqs)
                + list(other.ineqs)
            )
        )
        candidates: set[Point] = set()
        for v in self.vertices:
            if other.contains(v):
                candidates.add(v)
        for v in other.vertices:
            if self.contains(v):
                candidates.add(v)
        for combo in combinations(forms, n):
            rows = [[Fraction(c) for c in f[0]] for f in combo]
            rhs = [Fraction(f[1]) for f in combo]
            sol = solve(rows, rhs)
            if sol is None:
                continue
            p = tuple(sol)
            if self.contains(p) and other.contains(p):
                candidates.add(p)
        if not candidates:
            return None
        return Polytope.from_points(sorted(candidates))

    def clip_segment(self, a: Sequence[Fraction], b: Sequence[Fraction]):
        """Intersect the segment [a, b] with the polytope.

        Returns () when empty, (p,) for a point, (p, q) for a subsegment.
        """
        a = tuple(Fraction(c) for c in a)
        b = tuple(Fraction(c) for c in b)
        d = sub(b, a)
        lo, hi = Fraction(0), Fraction(1)
        for f in self.eqs + self.ineqs:
            is_eq = f in self.eqs
            va = form_at(f, a)
            slope = dot([Fraction(c) for c in f[0]], d)
            if slope == 0:
                if va < 0 or (is_eq and va != 0):
                    return ()
                continue
            t = -va / slope
            if is_eq:
                if t < lo or t > hi:
                    return ()
                lo = hi = t
            elif slope > 0:
                lo = max(lo, t)
            else:
                hi = min(hi, t)
            if lo > hi:
                return ()
        pa = tuple(x + lo * dx for x, dx in zip(a, d))
        pb = tuple(x + hi * dx for x, dx in zip(a, d))
        return (pa,) if pa == pb else (pa, pb)

    def faces(self) -> list[tuple[Point, ...]]:
        """All nonempty faces as sorted vertex tuples (includes the whole polytope)."""
        if self._faces is not None:
            return self._faces
        verts = self.vertices
        tight = [
            {f for f in self.ineqs if form_at(f, v) == 0} for v in verts
        ]
        seen: set[frozenset[int]] = set()
        out: list[tuple[Point, ...]] = []

        def visit(ids: frozenset[int]):
            if not ids or ids in seen:
                return
            seen.add(ids)
            out.append(tuple(verts[i] for i in sorted(ids)))
            face_pts = [verts[i] for i in ids]
            fdim = affine_rank(face_pts)
            if fdim == 0:
                return
            for f in self.ineqs:
                sub_ids = frozenset(i for i in ids if f in tight[i])
                if not sub_ids or sub_ids == ids:
                    continue
                if affine_rank([verts[i] for i in sub_ids]) == fdim - 1:
                    visit(sub_ids)

        visit(frozenset(range(len(verts))))
        self._faces = sorted(out, key=lambda fc: (len(fc), fc))
        return self._faces

    def nearest_point(self, x: Sequence[Fraction]) -> Point:
        """Euclidean projection of x onto the polytope, exact."""
        x = tuple(Fraction(c) for c in x)
        best: tuple[Fraction, Point] | None = None
        for face in self.faces():
            base = face[0]
            diffs = [list(sub(p, base)) for p in face[1:]]
            if diffs:
                red, pivots = rref(diffs)
                basis = [red[i] for i in range(len(pivots))]
            else:
                basis = []
            if basis:
                gram = [[dot(bi, bj) for bj in basis] for bi in basis]
                rhs = [dot(bi, sub(x, base)) for bi in basis]
                t = solve(gram, rhs)
                if t is None:
                    continue
                proj = tuple(
                    base[row]
                    + sum(
                        (t[k] * basis[k][row] for k in range(len(basis))),
                        start=Fraction(0),
                    )
                    for row in range(self.ambient)
                )
            else:
                proj = base
            if self.contains(proj):
                d2 = norm_sq(sub(proj, x))
                key = (d2, proj)
                if best is None or key < best:
                    best = key
        assert best is not None
        return best[1]


def _chart_val(form: Form, chart_point: tuple[Fraction, ...]) -> Fraction:
    return dot([Fraction(c) for c in form[0]], chart_point) - form[1]


def _oriented_chart(form: Form, charts: Sequence[tuple[Fraction, ...]]) -> Form | None:
    """Flip a chart hyperplane so every chart point is on the >= 0 side."""
    pos = neg = False
    for c in charts:
        v = _chart_val(form, c)
        if v > 0:
            pos = True
        elif v < 0:
            neg = True
        if pos and neg:
            return None
    if neg:
        return (tuple(-x for x in form[0]), -form[1])
    return form


def unit_cube(n: int) -> Polytope:
    corners = []
    for mask in range(1 << n):
        corners.append(tuple(Fraction((mask >> k) & 1) for k in range(n)))
    return Polytope.from_points(corners)


def segment_polytope_intersection(
    a: Sequence[Fraction], b: Sequence[Fraction], p: Polytope
):
    """Convenience wrapper; see Polytope.clip_segment."""
    return p.clip_segment(a, b)
