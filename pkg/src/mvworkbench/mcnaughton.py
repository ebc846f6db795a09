"""Exact calculus of McNaughton functions.

A McNaughton function is a continuous piecewise linear map [0,1]^n -> [0,1]
whose pieces have integer coefficients and integer constant terms. Here one
is represented as a full-dimensional simplicial complex covering the cube
plus one integer affine map per cell. All operations are closed over this
representation and exact; correctness-critical constructions (the zeroset
witness builders) verify their own output and fail loudly instead of
returning something unproven.

Splitting along the decision locus of a binary operation (say f+g = 1) uses
the shared stellar machinery from simplicial.py; the locus is the zero set of
one globally continuous function, which is exactly the face-compatibility
condition that machinery needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from mvworkbench import kernels
from mvworkbench.formulas import (
    ArityError,
    Const,
    Formula,
    Implies,
    Max,
    Min,
    Neg,
    OPlus,
    OTimes,
    Var,
    max_var,
)
from mvworkbench.linalg import affine_rank
from mvworkbench.polytopes import Polytope
from mvworkbench.rationals import (
    Point,
    Vector,
    dot,
    format_point,
    format_rational,
    in_unit_cube,
    scale_point,
    sub,
)
from mvworkbench.simplicial import (
    Complex,
    Form,
    Simplex,
    common_refinement,
    form_at,
    integer_form,
    kuhn_complex,
    split_complex_by_hyperplane,
    split_items_by_forms,
)


class CalculusError(ValueError):
    """Domain violations: arity mismatches, points outside the cube."""


class ConstructionError(RuntimeError):
    """A self-verifying constructor produced an object that failed its check."""


@dataclass(frozen=True, slots=True)
class AffineMap:
    """x |-> <coeffs, x> + const with integer data."""

    coeffs: tuple[int, ...]
    const: int

    def __post_init__(self):
        if not all(isinstance(c, int) for c in self.coeffs) or not isinstance(
            self.const, int
        ):
            raise CalculusError("affine map needs integer coefficients")

    def value_at(self, p: Sequence[Fraction]) -> Fraction:
        return dot([Fraction(c) for c in self.coeffs], p) + self.const

    def value_scaled(self, nums: Sequence[int], den: int) -> int:
        """Numerator of the value at nums/den, denominator den."""
        return kernels.eval_affine_scaled(self.coeffs, self.const, nums, den)

    def slope_along(self, u: Sequence[Fraction]) -> Fraction:
        return dot([Fraction(c) for c in self.coeffs], u)

    def __neg__(self) -> "AffineMap":
        return AffineMap(tuple(-c for c in self.coeffs), -self.const)

    def __add__(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            self.const + other.const,
        )

    def __sub__(self, other: "AffineMap") -> "AffineMap":
        return self + (-other)

    def scaled(self, k: int) -> "AffineMap":
        return AffineMap(tuple(k * c for c in self.coeffs), k * self.const)


def _const_map(n: int, value: int) -> AffineMap:
    return AffineMap((0,) * n, value)


class PLFunction:
    """Piecewise linear function over a simplicial complex covering [0,1]^n."""

    __slots__ = ("complex", "pieces", "arity", "_tables")

    def __init__(self, complex_: Complex, pieces: Sequence[AffineMap]):
        if len(complex_.cells) != len(pieces):
            raise CalculusError("one affine map per cell required")
        self.complex = complex_
        self.pieces: tuple[AffineMap, ...] = tuple(pieces)
        self.arity = complex_.ambient
        self._tables = None

    def __repr__(self) -> str:
        return f"PLFunction(arity={self.arity}, cells={len(self.pieces)})"

    def _facet_tables(self):
        if self._tables is None:
            self._tables = tuple(cell.facet_forms for cell in self.complex.cells)
        return self._tables

    def locate_scaled(self, nums: Sequence[int], den: int) -> int:
        idx = kernels.locate_cell_scaled(self._facet_tables(), nums, den)
        if idx < 0:
            raise CalculusError("point outside the unit cube")
        return idx

    def value(self, p: Sequence) -> Fraction:
        pt = tuple(Fraction(c) for c in p)
        if len(pt) != self.arity:
            raise CalculusError(f"arity {self.arity} function got point {pt}")
        nums, den = scale_point(pt)
        idx = self.locate_scaled(nums, den)
        return Fraction(self.pieces[idx].value_scaled(nums, den), den)

    def value_scaled(self, nums: Sequence[int], den: int) -> int:
        """Numerator of the value at nums/den (exact, integer arithmetic only)."""
        return self.pieces[self.locate_scaled(nums, den)].value_scaled(nums, den)

    def cells_containing(self, p: Sequence[Fraction]) -> list[int]:
        nums, den = scale_point([Fraction(c) for c in p])
        return [
            i
            for i, cell in enumerate(self.complex.cells)
            if cell.contains_scaled(nums, den)
        ]


def _build(n: int, cells_maps: Iterable[tuple[Simplex, AffineMap]]) -> PLFunction:
    """Assemble a PLFunction keeping cells and maps aligned under sorting."""
    pairs = sorted(cells_maps, key=lambda cm: cm[0].vertices)
    complex_ = Complex(n, [c for c, _ in pairs])
    return _weld(PLFunction(complex_, [m for _, m in pairs]))


def constant_function(n: int, value: int) -> PLFunction:
    if value not in (0, 1):
        raise CalculusError("constants are 0 or 1")
    return PLFunction(_base_complex(n), [_const_map(n, value)] * _base_cells(n))


def coordinate_function(n: int, i: int) -> PLFunction:
    """The i-th projection (1-based) as a PLFunction."""
    if not 1 <= i <= n:
        raise CalculusError(f"coordinate index {i} outside 1..{n}")
    coeffs = tuple(1 if k == i - 1 else 0 for k in range(n))
    m = AffineMap(coeffs, 0)
    return PLFunction(_base_complex(n), [m] * _base_cells(n))


def _base_complex(n: int) -> Complex:
    return kuhn_complex(n)


def _base_cells(n: int) -> int:
    count = 1
    for k in range(2, n + 1):
        count *= k
    return count


# --- welding (inverse of edge subdivision, used to control cell growth) ----


def _weld(f: PLFunction) -> PLFunction:
    """Merge neighbouring cells carrying the same map when the union is a cell.

    Cells A = conv(F + {p}) and B = conv(F + {q}) sharing facet F weld to
    conv(F - {w} + {p, q}) when some w in F lies strictly inside segment
    (p, q). The weld vertex w must not appear in any other cell, otherwise
    removing it would break face compatibility with the neighbours.
    """
    cells = list(f.complex.cells)
    maps = list(f.pieces)
    changed = True
    while changed:
        changed = False
        usage: dict[Point, list[int]] = {}
        for i, c in enumerate(cells):
            for v in c.vertices:
                usage.setdefault(v, []).append(i)
        for i in range(len(cells)):
            if changed:
                break
            for j in range(i + 1, len(cells)):
                if maps[i] != maps[j]:
                    continue
                a, b = cells[i], cells[j]
                shared = set(a.vertices) & set(b.vertices)
                if len(shared) != len(a.vertices) - 1:
                    continue
                (p,) = set(a.vertices) - shared
                (q,) = set(b.vertices) - shared
                w = _strictly_between(shared, p, q)
                if w is None or usage[w] != sorted([i, j]):
                    continue
                merged = Simplex((shared - {w}) | {p, q})
                if affine_rank(merged.vertices) != merged.dim:
                    continue
                cells[j] = merged
                maps[j] = maps[i]
                del cells[i]
                del maps[i]
                changed = True
                break
    if len(cells) == len(f.complex.cells):
        return f
    pairs = sorted(zip(cells, maps), key=lambda cm: cm[0].vertices)
    return PLFunction(
        Complex(f.arity, [c for c, _ in pairs]), [m for _, m in pairs]
    )


def _strictly_between(candidates: Iterable[Point], p: Point, q: Point) -> Point | None:
    d = sub(q, p)
    for w in candidates:
        dw = sub(w, p)
        # w = p + t d with 0 < t < 1?
        t = None
        ok = True
        for num, den in zip(dw, d):
            if den == 0:
                if num != 0:
                    ok = False
                    break
                continue
            r = num / den
            if t is None:
                t = r
            elif r != t:
                ok = False
                break
        if ok and t is not None and 0 < t < 1:
            return w
    return None


# --- pointwise operations ---------------------------------------------------


def _refined_pairs(
    f: PLFunction, g: PLFunction
) -> list[tuple[Simplex, AffineMap, AffineMap]]:
    if f.arity != g.arity:
        raise CalculusError("arity mismatch")
    refined, prov = common_refinement(f.complex, g.complex)
    return [
        (cell, f.pieces[ia], g.pieces[ib])
        for cell, (ia, ib) in zip(refined.cells, prov)
    ]


def _split_assign(n, triples, decision_form, assign) -> PLFunction:
    """Split cells along per-cell decision forms, then pick the side's map.

    decision_form maps (mf, mg) to a Form whose sign decides the operation
    branch; the forms must restrict one continuous function. assign maps
    (mf, mg, side) to the resulting AffineMap.
    """
    items = [
        (cell, decision_form(mf, mg), (mf, mg)) for cell, mf, mg in triples
    ]
    out = []
    for cell, (mf, mg), side in split_items_by_forms(items):
        out.append((cell, assign(mf, mg, side)))
    return _build(n, out)


def _sum_ge_one_form(mf: AffineMap, mg: AffineMap) -> Form:
    s = mf + mg
    return (s.coeffs, 1 - s.const)


def _diff_form(mf: AffineMap, mg: AffineMap) -> Form:
    d = mf - mg
    return (d.coeffs, -d.const)


def mv_neg(f: PLFunction) -> PLFunction:
    return PLFunction(f.complex, [_const_map(f.arity, 1) - m for m in f.pieces])


def mv_oplus(f: PLFunction, g: PLFunction) -> PLFunction:
    return _split_assign(
        f.arity,
        _refined_pairs(f, g),
        _sum_ge_one_form,
        lambda mf, mg, side: _const_map(f.arity, 1) if side > 0 else mf + mg,
    )


def mv_otimes(f: PLFunction, g: PLFunction) -> PLFunction:
    return _split_assign(
        f.arity,
        _refined_pairs(f, g),
        _sum_ge_one_form,
        lambda mf, mg, side: (
            mf + mg - _const_map(f.arity, 1) if side > 0 else _const_map(f.arity, 0)
        ),
    )


def mv_min(f: PLFunction, g: PLFunction) -> PLFunction:
    return _split_assign(
        f.arity,
        _refined_pairs(f, g),
        _diff_form,
        lambda mf, mg, side: mg if side > 0 else mf,
    )


def mv_max(f: PLFunction, g: PLFunction) -> PLFunction:
    return _split_assign(
        f.arity,
        _refined_pairs(f, g),
        _diff_form,
        lambda mf, mg, side: mf if side > 0 else mg,
    )


def mv_implies(f: PLFunction, g: PLFunction) -> PLFunction:
    return _split_assign(
        f.arity,
        _refined_pairs(f, g),
        lambda mf, mg: _diff_form(mg, mf),
        lambda mf, mg, side: (
            _const_map(f.arity, 1) if side > 0 else _const_map(f.arity, 1) - mf + mg
        ),
    )


def truncated_multiple(g: PLFunction, k: int) -> PLFunction:
    """min(1, k*g) pointwise; k = 0 gives the constant 0."""
    if k < 0:
        raise CalculusError("multiple must be nonnegative")
    if k == 0:
        return constant_function(g.arity, 0)
    items = [
        (cell, ((m.scaled(k)).coeffs, 1 - k * m.const), m)
        for cell, m in zip(g.complex.cells, g.pieces)
    ]
    out = []
    for cell, m, side in split_items_by_forms(items):
        out.append(
            (cell, _const_map(g.arity, 1) if side > 0 else m.scaled(k))
        )
    return _build(g.arity, out)


def compile_formula(term: Formula, n: int) -> PLFunction:
    """Compile a term to its McNaughton function on [0,1]^n."""
    used = max_var(term)
    if used > n:
        raise ArityError(f"term uses x{used} but arity is {n}")
    if n < 1:
        raise CalculusError("arity must be >= 1")

    def go(node: Formula) -> PLFunction:
        if isinstance(node, Const):
            return constant_function(n, node.bit)
        if isinstance(node, Var):
            return coordinate_function(n, node.index)
        if isinstance(node, Neg):
            return mv_neg(go(node.child))
        ops = {
            OPlus: mv_oplus,
            OTimes: mv_otimes,
            Min: mv_min,
            Max: mv_max,
            Implies: mv_implies,
        }
        return ops[type(node)](go(node.left), go(node.right))

    return go(term)


# --- zero loci ---------------------------------------------------------------


@dataclass(frozen=True)
class ZeroLocus:
    """Exact zero set of a nonnegative PLFunction: a finite polytope union."""

    arity: int
    parts: tuple[Polytope, ...]

    def __iter__(self):
        return iter(self.parts)

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def contains(self, p: Sequence) -> bool:
        pt = tuple(Fraction(c) for c in p)
        return any(part.contains(pt) for part in self.parts)

    def points(self) -> list[Point]:
        """All polytope vertices, deduplicated and sorted."""
        out: set[Point] = set()
        for part in self.parts:
            out.update(part.vertices)
        return sorted(out)


def zeroset(f: PLFunction) -> ZeroLocus:
    """{x : f(x) = 0} as polytopes: per cell, the hull of its zero vertices.

    Exact because each piece is affine and nonnegative on its cell, so its
    zero set there is spanned by the vertices where it vanishes.
    """
    parts: list[Polytope] = []
    for cell, m in zip(f.complex.cells, f.pieces):
        zvs = [v for v in cell.vertices if m.value_at(v) == 0]
        if zvs:
            parts.append(Polytope.from_points(zvs))
    # canonical: drop parts inside other parts, dedup, sort
    kept: list[Polytope] = []
    for p in parts:
        if any(
            q is not p and q.contains_polytope(p) and q.vertices != p.vertices
            for q in parts
        ):
            continue
        kept.append(p)
    uniq = sorted(set(kept), key=lambda p: (p.dim, p.vertices))
    return ZeroLocus(f.arity, tuple(uniq))


# --- directional structure ---------------------------------------------------


def _cube_exit(x: Point, u: Vector) -> Fraction | None:
    """Largest t with x + s u in the cube for s in [0, t]; None when unbounded."""
    t: Fraction | None = None
    for xi, ui in zip(x, u):
        if ui > 0:
            cand = (1 - xi) / ui
        elif ui < 0:
            cand = xi / (-ui)
        else:
            continue
        t = cand if t is None else min(t, cand)
    return t


def cell_exit_parameter(f: PLFunction, x: Sequence, u: Sequence) -> Fraction:
    """Largest t0 > 0 such that [x, x + t0 u] stays inside one cell."""
    x = tuple(Fraction(c) for c in x)
    u = tuple(Fraction(c) for c in u)
    if not in_unit_cube(x):
        raise CalculusError(f"point {x} outside the unit cube")
    tcube = _cube_exit(x, u)
    if tcube is not None and tcube <= 0:
        raise CalculusError("direction leaves the cube immediately")
    best: Fraction | None = None
    for i in f.cells_containing(x):
        cell = f.complex.cells[i]
        t = tcube
        for form in cell.facet_forms:
            slope = dot([Fraction(c) for c in form[0]], u)
            if slope < 0:
                bound = form_at(form, x) / (-slope)
                t = bound if t is None else min(t, bound)
        if t is None:
            # u = 0: any containing cell traps the (degenerate) ray forever
            return Fraction(1)
        if best is None or t > best:
            best = t
    if best is None or best <= 0:
        raise CalculusError("no cell contains an initial segment along u")
    return best


def directional_derivative(f: PLFunction, x: Sequence, u: Sequence) -> Fraction:
    """One-sided derivative lim_{t->0+} (f(x+tu) - f(x))/t, exact."""
    x = tuple(Fraction(c) for c in x)
    u = tuple(Fraction(c) for c in u)
    if all(c == 0 for c in u):
        return Fraction(0)
    t0 = cell_exit_parameter(f, x, u)
    probe = tuple(xi + (t0 / 2) * ui for xi, ui in zip(x, u))
    nums, den = scale_point(probe)
    idx = f.locate_scaled(nums, den)
    cell = f.complex.cells[idx]
    if not cell.contains(x):
        raise CalculusError("probe cell does not contain the base point")
    return f.pieces[idx].slope_along(u)


# --- comparison --------------------------------------------------------------


def pl_violation(
    f: PLFunction, g: PLFunction, region=None
) -> Point | None:
    """Lex-smallest witness of f > g on the region, or None when f <= g.

    region: None for the whole cube, a ZeroLocus, or a Complex. Exact: on a
    common refinement f - g is affine per cell, so it is <= 0 on a convex
    piece iff it is <= 0 at the piece's vertices.
    """
    triples = _refined_pairs(f, g)
    witnesses: list[Point] = []
    if region is None:
        for cell, mf, mg in triples:
            for v in cell.vertices:
                if mf.value_at(v) > mg.value_at(v):
                    witnesses.append(v)
    else:
        if isinstance(region, ZeroLocus):
            regions = list(region.parts)
        elif isinstance(region, Complex):
            regions = [Polytope.from_points(c.vertices) for c in region.cells]
        else:
            raise CalculusError(f"unsupported region {region!r}")
        for cell, mf, mg in triples:
            cellpoly = Polytope.from_points(cell.vertices)
            for reg in regions:
                inter = cellpoly.intersect(reg)
                if inter is None:
                    continue
                for v in inter.vertices:
                    if mf.value_at(v) > mg.value_at(v):
                        witnesses.append(v)
    return min(witnesses) if witnesses else None


def pl_leq(f: PLFunction, g: PLFunction, region=None) -> bool:
    """True iff f <= g everywhere on the region (cube / ZeroLocus / Complex)."""
    return pl_violation(f, g, region) is None


def pl_equal(f: PLFunction, g: PLFunction) -> bool:
    """Semantic equality of PL functions (never structural)."""
    return pl_leq(f, g) and pl_leq(g, f)


# --- self-verifying zero-locus constructors ----------------------------------


def ramp_function(n: int, form: Form) -> PLFunction:
    """min(1, max(0, <normal,x> - offset)) as a PLFunction."""
    normal, offset = form
    if all(c == 0 for c in normal):
        return constant_function(n, 1 if -offset >= 1 else 0)
    cx = _base_complex(n)
    cx = split_complex_by_hyperplane(cx, normal, Fraction(offset))
    cx = split_complex_by_hyperplane(cx, normal, Fraction(offset + 1))
    maps = []
    for cell in cx.cells:
        b = form_at(form, cell.barycenter())
        if b <= 0:
            maps.append(_const_map(n, 0))
        elif b >= 1:
            maps.append(_const_map(n, 1))
        else:
            maps.append(AffineMap(tuple(normal), -offset))
    return _weld(PLFunction(cx, maps))


def _clamped_abs(n: int, form: Form) -> PLFunction:
    """min(1, |<normal,x> - offset|) via two one-sided ramps."""
    neg = (tuple(-c for c in form[0]), -form[1])
    return mv_oplus(ramp_function(n, form), ramp_function(n, neg))


def combined_ramp_sum(n: int, forms: Sequence[Form]) -> PLFunction:
    """min(1, sum_i max(0, <m_i,x> - c_i)) built on a single complex.

    Equal to the oplus-fold of the individual ramps (all summands are
    nonnegative, so truncations commute with the sum), but built with one
    hyperplane split per form instead of iterated pairwise refinement.
    """
    cx = _base_complex(n)
    for normal, offset in forms:
        if all(c == 0 for c in normal):
            raise CalculusError("ramp form needs a nonzero normal")
        cx = split_complex_by_hyperplane(cx, normal, Fraction(offset))
    items = []
    for cell in cx.cells:
        bary = cell.barycenter()
        total = _const_map(n, 0)
        for form in forms:
            if form_at(form, bary) > 0:
                total = total + AffineMap(tuple(form[0]), -form[1])
        items.append((cell, (total.coeffs, 1 - total.const), total))
    out = []
    for cell, total, side in split_items_by_forms(items):
        out.append((cell, _const_map(n, 1) if side > 0 else total))
    return _build(n, out)


def _check_cube_point(x: Point):
    if not in_unit_cube(x):
        raise CalculusError(f"point {tuple(map(str, x))} outside the unit cube")


def _both_signs(form: Form) -> list[Form]:
    return [form, (tuple(-c for c in form[0]), -form[1])]


def point_zero_function(x: Sequence) -> PLFunction:
    """A McNaughton function whose zero set is exactly {x}; self-verified."""
    x = tuple(Fraction(c) for c in x)
    _check_cube_point(x)
    n = len(x)
    forms: list[Form] = []
    for i in range(n):
        normal = tuple(Fraction(1 if k == i else 0) for k in range(n))
        forms.extend(_both_signs(integer_form(normal, x[i])))
    acc = combined_ramp_sum(n, forms)
    locus = zeroset(acc)
    if [p.vertices for p in locus.parts] != [(x,)]:
        raise ConstructionError(
            f"point zero locus check failed at {x}: got {locus.parts}"
        )
    return acc


def segment_zero_function(x: Sequence, y: Sequence) -> PLFunction:
    """A McNaughton function with zero set exactly conv(x, y); self-verified."""
    x = tuple(Fraction(c) for c in x)
    y = tuple(Fraction(c) for c in y)
    _check_cube_point(x)
    _check_cube_point(y)
    if len(x) != len(y):
        raise CalculusError("segment endpoints need equal arity")
    if x == y:
        return point_zero_function(x)
    n = len(x)
    d = sub(y, x)
    from mvworkbench.linalg import nullspace

    forms: list[Form] = []
    for vec in nullspace([list(d)]):
        forms.extend(_both_signs(integer_form(vec, dot(vec, x))))
    # end caps: cut the line down to the segment
    forms.append(integer_form(tuple(-c for c in d), -dot(d, x)))
    forms.append(integer_form(d, dot(d, y)))
    acc = combined_ramp_sum(n, forms)

    target = Polytope.from_points([x, y])
    locus = zeroset(acc)
    for part in locus.parts:
        if not all(target.contains(v) for v in part.vertices):
            raise ConstructionError(
                f"zero locus of segment witness leaks outside conv({x},{y})"
            )
    if not _segment_covered(x, y, locus.parts):
        raise ConstructionError(
            f"zero locus of segment witness misses part of conv({x},{y})"
        )
    return acc


def _segment_covered(x: Point, y: Point, parts: Sequence[Polytope]) -> bool:
    """Is [x, y] covered by the union of the parts? Exact interval sweep."""
    d = sub(y, x)
    dd = dot(d, d)
    intervals = []
    for part in parts:
        hit = part.clip_segment(x, y)
        if not hit:
            continue
        ts = [dot(d, sub(p, x)) / dd for p in hit]
        intervals.append((min(ts), max(ts)))
    intervals.sort()
    covered = Fraction(0)
    for lo, hi in intervals:
        if lo > covered:
            return False
        covered = max(covered, hi)
    return covered >= 1


def validate(f: PLFunction) -> None:
    """Structural invariants; raises AssertionError on violation.

    Checks the covering volume, integer coefficients, vertex values in [0,1],
    and single-valuedness at every vertex (continuity across shared faces
    follows, since the pieces are affine).
    """
    assert f.complex.cells, "empty complex"
    assert f.complex.total_volume() == 1, "cells do not tile the cube"
    tables = f._facet_tables()
    for v in f.complex.vertices():
        nums, den = scale_point(v)
        vals = {
            f.pieces[i].value_scaled(nums, den)
            for i, table in enumerate(tables)
            if kernels.point_in_cell_scaled(table, nums, den)
        }
        assert len(vals) == 1, f"conflicting values at vertex {format_point(v)}"
        (val,) = vals
        assert 0 <= val <= den, (
            f"value {format_rational(Fraction(val, den))} at {format_point(v)} "
            "outside [0,1]"
        )
