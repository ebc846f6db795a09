"""Decision layer: ideal membership, 1-D cover certificates, SSS verdicts.

Three tiers build on each other. `ideal_membership` settles whether f lies
in the principal ideal of g over a closed set, searching multipliers by
doubling and binary refinement and certifying sequence tails through exact
Lipschitz bounds. `cover_certificate_1d` replays the one-dimensional
covering argument behind that membership, emitting per-point neighborhoods
with case tags that re-verify locally. The verdict functions combine the
tangent analysis with witness construction into a strong-semisimplicity
answer per dimension: always semisimple for one variable, the rational
outgoing tangent criterion for two, and the one-sided sufficient condition
above that.

Everything here is exact; no verdict or certificate rests on floating
point. Where an analysis cannot be completed the result says so (Unknown
verdicts, AnalysisUndetermined, ConstructionError) instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

import mvworkbench.intpoly as ip
import mvworkbench.linrec as lr
from mvworkbench.closedsets import (
    ClosedSetDesc,
    LinearRecurrenceSchema,
    ProbeSequence,
    RationalFunctionSchema,
    Trivalent,
)
from mvworkbench.mcnaughton import (
    CalculusError,
    ConstructionError,
    PLFunction,
    ZeroLocus,
    constant_function,
    directional_derivative,
    pl_violation,
    point_zero_function,
    segment_zero_function,
    truncated_multiple,
    zeroset,
)
from mvworkbench.polytopes import Polytope
from mvworkbench.rationals import Point, format_point, norm_sq, sub
from mvworkbench.tangents import (
    AnalysisUndetermined,
    Cone,
    DEFAULT_LAMBDA_MAX,
    SCAN_HORIZON,
    TangentWitness,
    count_in_cone,
    first_ray_hit,
    tangent_report,
)

DEFAULT_CAP = 2**20
PREFIX_BUDGET = 1000
DOMINANCE_KMAX = 100
ZERO_LOCUS_BUDGET = 50
TAIL_MIN_COUNT = 100

# Per-multiplier hunt bound for a violating sequence index: linear headroom
# over k because difference schemas make the first violation index grow at
# most linearly in the multiplier.
def _hunt_bound(k: int) -> int:
    return 100 * k + 1000


class HypothesisError(ValueError):
    """f fails to vanish at a point of X where g vanishes; carries the point."""

    def __init__(self, point: Point, f_value: Fraction, g_value: Fraction):
        self.point = point
        self.f_value = f_value
        self.g_value = g_value
        super().__init__(
            f"f{format_point(point)} = {f_value} while g = {g_value} there"
        )


# --- dominance tables ---------------------------------------------------------


@dataclass(frozen=True)
class DominanceRow:
    """One exact refutation of f <= min(1, k*g): a point where it fails.

    `index` is the sequence index of the point, None when it came from a
    polytope part. The two values are exact, and every row must satisfy
    f_value > kg_value.
    """

    k: int
    index: int | None
    point: Point
    f_value: Fraction
    kg_value: Fraction


@dataclass(frozen=True)
class DominanceTable:
    rows: tuple[DominanceRow, ...]

    def __iter__(self):
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class IdealMembershipResult:
    """Outcome of the multiplier search for f against the ideal of g.

    verdict "member": `k` is the smallest certified multiplier and
    `multiple` the function min(1, k*g) that dominates f on the set.
    verdict "not_member": `dominance` refutes every multiplier tested on
    the way to the cap (and by monotonicity of the search pattern, the gap
    is genuine). verdict "unknown": the cap was reached with at least one
    multiplier neither certified nor refuted; `reason` says so.
    """

    verdict: str
    k: int | None = None
    multiple: PLFunction | None = None
    dominance: DominanceTable | None = None
    reason: str | None = None


# --- shared exact helpers ------------------------------------------------------


def _grad_bound_sq(fn: PLFunction) -> Fraction:
    """Max squared gradient norm over the pieces: a squared Lipschitz bound."""
    best = Fraction(0)
    for piece in fn.pieces:
        best = max(best, Fraction(norm_sq(piece.coeffs)))
    return best


def _pair_bound_sq(a: PLFunction, b: PLFunction) -> Fraction:
    """Squared Lipschitz bound for a - b via (s+t)^2 <= 2s^2 + 2t^2.

    Avoids the irrational sum of two gradient norms while staying a valid
    certificate: |(a-b)(p) - (a-b)(q)|^2 <= _pair_bound_sq * |p-q|^2.
    """
    return 2 * _grad_bound_sq(a) + 2 * _grad_bound_sq(b)


def _zero_set_gap(
    f: PLFunction, g: PLFunction, X: ClosedSetDesc, budget: int
) -> Point | None:
    """A point of X with g = 0 but f > 0, or None when none is found.

    Exact on the polytope parts (zero locus intersection plus a restricted
    comparison); sequences are probed at the limit and the first `budget`
    terms, which is where described sequences can put isolated zeros.
    """
    zero = constant_function(X.arity, 0)
    zg = zeroset(g)
    for part in X.polyparts:
        for zpart in zg.parts:
            piece = part.intersect(zpart)
            if piece is None:
                continue
            bad = pl_violation(f, zero, region=ZeroLocus(X.arity, (piece,)))
            if bad is not None:
                return bad
    for seq in X.sequences:
        if g.value(seq.limit) == 0 and f.value(seq.limit) > 0:
            return seq.limit
        for i in range(seq.first_index, seq.first_index + budget):
            w = seq.point_at(i)
            if g.value(w) == 0 and f.value(w) > 0:
                return w
    return None


# --- ideal membership ----------------------------------------------------------


def _sequence_status(
    f: PLFunction,
    kg: PLFunction,
    g: PLFunction,
    seq: ProbeSequence,
    bound_h: Fraction,
    bound_g: Fraction,
    k: int,
) -> tuple[str, int | None, Point | None]:
    """("violated", i, w) | ("ok", None, None) | ("unresolved", None, None).

    Scans terms in order, hunting for an exact violation of f <= kg while
    waiting for one of two tail certificates. Dominance margin: once the
    distance to the limit drops below (kg - f)(limit)/Lipschitz, every later
    term inherits the limit's strict margin. Threshold margin: once g stays
    above 1/k the truncation pins kg at 1, which dominates any f.
    """
    margin_h = kg.value(seq.limit) - f.value(seq.limit)
    if margin_h < 0:
        return "violated", None, seq.limit
    margin_g = g.value(seq.limit) - Fraction(1, k) if k >= 1 else Fraction(-1)
    hunt = _hunt_bound(k)
    for i, w in seq.stream():
        if i - seq.first_index >= hunt:
            return "unresolved", None, None
        if kg.value(w) < f.value(w):
            return "violated", i, w
        if i >= seq.decrease_from:
            s = norm_sq(sub(w, seq.limit))
            if margin_h > 0 and bound_h * s < margin_h * margin_h:
                return "ok", None, None
            if margin_g > 0 and bound_g * s < margin_g * margin_g:
                return "ok", None, None
    return "unresolved", None, None


def _test_k(
    f: PLFunction, g: PLFunction, k: int, X: ClosedSetDesc
) -> tuple[str, DominanceRow | None]:
    """("holds" | "violated" | "unresolved", refuting row if violated)."""
    kg = truncated_multiple(g, k)
    if pl_violation(f, kg) is None:
        return "holds", None
    if X.polyparts:
        bad = pl_violation(f, kg, region=ZeroLocus(X.arity, X.polyparts))
        if bad is not None:
            return "violated", DominanceRow(k, None, bad, f.value(bad), kg.value(bad))
    unresolved = False
    if X.sequences:
        bound_h = _pair_bound_sq(kg, f)
        bound_g = _grad_bound_sq(g)
        for seq in X.sequences:
            status, i, w = _sequence_status(f, kg, g, seq, bound_h, bound_g, k)
            if status == "violated":
                return "violated", DominanceRow(k, i, w, f.value(w), kg.value(w))
            if status == "unresolved":
                unresolved = True
    return ("unresolved" if unresolved else "holds"), None


def _refine_minimal(
    f: PLFunction, g: PLFunction, X: ClosedSetDesc, lo: int, hi: int
) -> int:
    """Smallest multiplier in (lo, hi] that certifiably holds; hi must hold.

    An unresolved probe counts as not holding, so the answer is the least
    multiplier the certificate machinery can actually vouch for.
    """
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        status, _ = _test_k(f, g, mid, X)
        if status == "holds":
            hi = mid
        else:
            lo = mid
    return hi


def ideal_membership(
    f: PLFunction, g: PLFunction, X: ClosedSetDesc, cap: int = DEFAULT_CAP
) -> IdealMembershipResult:
    """Decide whether f <= min(1, k*g) on X for some multiplier k <= cap.

    Runs the zero-set precheck first (a point of X with g = 0 < f refutes
    every multiplier at once), then tests k = 0, 1, 2, 4, ... and refines
    the first success down to the minimal certified k. Failures carry exact
    refuting points; an uncertifiable tail leaves that multiplier
    unresolved and the search ends in "unknown" rather than a guess.
    """
    if f.arity != X.arity or g.arity != X.arity:
        raise CalculusError("arity mismatch between functions and the set")
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    gap = _zero_set_gap(f, g, X, PREFIX_BUDGET)
    if gap is not None:
        row = DominanceRow(1, None, gap, f.value(gap), Fraction(0))
        return IdealMembershipResult(
            "not_member",
            dominance=DominanceTable((row,)),
            reason="g vanishes at a point of X where f does not",
        )
    rows: list[DominanceRow] = []
    unresolved_any = False
    prev = -1
    k = 0
    while k <= cap:
        status, row = _test_k(f, g, k, X)
        if status == "holds":
            kmin = _refine_minimal(f, g, X, prev, k) if prev >= 0 else k
            return IdealMembershipResult(
                "member", k=kmin, multiple=truncated_multiple(g, kmin)
            )
        if status == "violated":
            rows.append(row)
        else:
            unresolved_any = True
        prev = k
        k = 1 if k == 0 else 2 * k
    if rows and not unresolved_any:
        return IdealMembershipResult(
            "not_member", dominance=DominanceTable(tuple(rows))
        )
    return IdealMembershipResult(
        "unknown", reason=f"multiplier cap {cap} reached without a certificate"
    )


# --- one-dimensional cover certificates -----------------------------------------

CASE_POSITIVE = "Case1"
CASE_INTERIOR_ZERO = "Sub2.1"
CASE_EDGE_BOTH_VANISH = "Sub2.2.1"
CASE_EDGE_POSITIVE = "Sub2.2.2"
CASE_EDGE_ISOLATED = "Sub2.2.3"


@dataclass(frozen=True)
class CoverEntry:
    """One covering neighborhood: on (lo, hi) ∩ X, min(1, multiplier*g) >= f.

    `x` is the anchor, a point of X inside the open interval. The tag names
    which local situation produced the bound: a positive minimum of g
    (Case1), an identically vanishing cell around an interior zero
    (Sub2.1), or a zero at a cell vertex whose adjacent cell has g and f
    both vanishing (Sub2.2.1), g positive at the far vertex (Sub2.2.2), or
    g vanishing with f positive so the set meets the cell only at the
    vertex (Sub2.2.3).
    """

    x: Point
    lo: Fraction
    hi: Fraction
    multiplier: int
    tag: str


@dataclass(frozen=True)
class CoverCertificate1D:
    """Finite open cover of X with per-neighborhood multipliers.

    The global multiplier `m` is the maximum over entries: min(1, m*g) >= f
    holds on all of X because every point lies in some entry's interval.
    """

    entries: tuple[CoverEntry, ...]
    m: int


def _breakpoints(f: PLFunction, g: PLFunction) -> list[Fraction]:
    """Sorted cell vertices of both functions: f and g are affine between."""
    ticks = {Fraction(0), Fraction(1)}
    for fn in (f, g):
        for cell in fn.complex.cells:
            for v in cell.vertices:
                ticks.add(v[0])
    return sorted(ticks)


def _ratio_max(
    f: PLFunction, g: PLFunction, ticks: Sequence[Fraction], c: Fraction, d: Fraction
) -> Fraction:
    """Exact max of f/g over [c, d], which must avoid the zeros of g.

    On each affine piece the derivative of f/g has constant sign (the
    numerator f'g - fg' is constant there), so the maximum sits at a piece
    endpoint.
    """
    points = [c, d] + [t for t in ticks if c < t < d]
    best = Fraction(0)
    for t in points:
        gt = g.value((t,))
        if gt <= 0:
            raise ConstructionError(f"zero of g inside a positive window at {t}")
        best = max(best, f.value((t,)) / gt)
    return best


def _x_point_strictly_inside(
    X: ClosedSetDesc, lo: Fraction, hi: Fraction, budget: int
) -> Point | None:
    """Some point of X in the open interval (lo, hi), or None if not found."""
    wlo, whi = max(lo, Fraction(0)), min(hi, Fraction(1))
    if wlo > whi:
        return None
    window = Polytope.from_points(((wlo,), (whi,)))
    for part in X.polyparts:
        piece = part.intersect(window)
        if piece is None:
            continue
        vs = sorted(piece.vertices)
        c, d = vs[0][0], vs[-1][0]
        for cand in (c, d, (c + d) / 2):
            if lo < cand < hi:
                return (cand,)
    for seq in X.sequences:
        if lo < seq.limit[0] < hi:
            return seq.limit
    for seq in X.sequences:
        for i in range(seq.first_index, seq.first_index + budget):
            w = seq.point_at(i)
            if lo < w[0] < hi:
                return w
    return None


def _verified_cut(
    X: ClosedSetDesc, v: Fraction, side: int, span: Fraction
) -> Fraction | None:
    """A c > 0 with X ∩ (v, v + side*c] certified empty; None when the whole
    reach (v, v + side*span] is already empty of X.

    Halves below each found point; v not being in the closed set X keeps
    its distance positive, so the loop escapes.
    """
    direction = (Fraction(side),)
    hit = first_ray_hit(X, (v,), direction, span)
    if hit is None:
        return None
    for _ in range(64):
        c = hit / 2
        probe = first_ray_hit(X, (v,), direction, c)
        if probe is None:
            return c
        hit = probe
    raise ConstructionError(f"could not isolate the set away from {v}")


def _certify_entry_tail(
    f: PLFunction,
    g: PLFunction,
    m: int,
    seq: ProbeSequence,
    lo: Fraction,
    hi: Fraction,
) -> int:
    """Smallest workable multiplier >= m for a window whose closure holds the
    sequence limit: bumps m until the tail certificate goes through and all
    enumerated in-window terms check out exactly.

    Two margins can certify the tail: the dominance margin of min(1, m*g)-f
    at the limit, or the threshold margin g - 1/m when f tops out at 1 and
    only the truncation can dominate it.
    """
    glim = g.value(seq.limit)
    if glim <= 0:
        raise ConstructionError("sequence limit meets a zero of g in a window")
    attempts = 4 + int(ceil(1 / glim))
    for _ in range(attempts):
        kg = truncated_multiple(g, m)
        margin_h = kg.value(seq.limit) - f.value(seq.limit)
        margin_g = glim - Fraction(1, m) if m > 0 else Fraction(-1)
        if margin_h <= 0 and margin_g <= 0:
            m += 1
            continue
        bound_h = _pair_bound_sq(kg, f)
        bound_g = _grad_bound_sq(g)
        bad: Point | None = None
        for i, w in seq.stream():
            if i - seq.first_index > SCAN_HORIZON:
                raise ConstructionError("window tail scan exhausted")
            if lo < w[0] < hi and kg.value(w) < f.value(w):
                bad = w
                break
            if i < seq.decrease_from:
                continue
            s = norm_sq(sub(w, seq.limit))
            if margin_h > 0 and bound_h * s < margin_h * margin_h:
                return m
            if margin_g > 0 and bound_g * s < margin_g * margin_g:
                # g stays above 1/m from here on, so min(1, m*g) = 1 >= f.
                return m
        if bad is None:
            raise ConstructionError("window tail scan exhausted")
        gbad = g.value(bad)
        m = max(m + 1, int(ceil(f.value(bad) / gbad)))
    raise ConstructionError("window multiplier did not stabilize")


def _window_multiplier(
    f: PLFunction,
    g: PLFunction,
    X: ClosedSetDesc,
    ticks: Sequence[Fraction],
    lo: Fraction,
    hi: Fraction,
    budget: int,
) -> int:
    """Multiplier valid on (lo, hi) ∩ X, computed over the X portion only.

    Polytope portions contribute their exact ratio maxima; sequence limits
    inside the closure anchor a tail certificate; stray terms near a limit
    outside the closure are enumerated until the distance certificate
    excludes the rest.
    """
    best = Fraction(0)
    wlo, whi = max(lo, Fraction(0)), min(hi, Fraction(1))
    window = Polytope.from_points(((wlo,), (whi,)))
    for part in X.polyparts:
        piece = part.intersect(window)
        if piece is None:
            continue
        vs = sorted(piece.vertices)
        best = max(best, _ratio_max(f, g, ticks, vs[0][0], vs[-1][0]))
    tail_seqs: list[ProbeSequence] = []
    for seq in X.sequences:
        t = seq.limit[0]
        if wlo <= t <= whi:
            glim = g.value(seq.limit)
            if glim <= 0:
                raise ConstructionError("sequence limit meets a zero of g")
            best = max(best, f.value(seq.limit) / glim)
            tail_seqs.append(seq)
            continue
        gap = max(wlo - t, t - whi)
        for i, w in seq.stream():
            if i - seq.first_index > SCAN_HORIZON:
                raise ConstructionError("window term scan exhausted")
            if lo < w[0] < hi:
                gw = g.value(w)
                if gw <= 0:
                    raise ConstructionError("zero of g inside a positive window")
                best = max(best, f.value(w) / gw)
            if i >= seq.decrease_from and norm_sq(sub(w, seq.limit)) < gap * gap:
                break
    m = max(0, int(ceil(best)))
    for seq in tail_seqs:
        m = _certify_entry_tail(f, g, m, seq, lo, hi)
    return m


def _side_cover(
    f: PLFunction,
    g: PLFunction,
    X: ClosedSetDesc,
    ticks: Sequence[Fraction],
    idx: int,
    side: int,
) -> tuple[int, str | None, Fraction]:
    """Covering data for one side of a zero vertex v = ticks[idx].

    Returns (multiplier, tag, extent): the inequality multiplier valid on
    the half-open reach from v toward the neighboring vertex, the case tag,
    and the open endpoint of that reach. At the cube edge there is nothing
    to cover and the extent just steps outside.
    """
    v = ticks[idx]
    nb = idx + side
    if nb < 0 or nb >= len(ticks):
        return 0, None, v + side
    w = ticks[nb]
    gw = g.value((w,))
    fw = f.value((w,))
    if gw == 0:
        if fw == 0:
            # g and f both vanish on the whole cell.
            return 1, CASE_EDGE_BOTH_VANISH, w
        # g vanishes on the cell while f does not: X may meet it only at v,
        # and any other meeting point exactly violates the hypothesis.
        hit = first_ray_hit(X, (v,), (Fraction(side),), abs(w - v))
        if hit is not None:
            p = (v + side * hit,)
            raise HypothesisError(p, f.value(p), Fraction(0))
        return 1, CASE_EDGE_ISOLATED, w
    # g grows linearly from 0 at v: m*g >= f on the cell iff it holds at w.
    return max(0, int(ceil(fw / gw))), CASE_EDGE_POSITIVE, w


def _case_positive_entry(
    f: PLFunction,
    g: PLFunction,
    X: ClosedSetDesc,
    ticks: Sequence[Fraction],
    idx: int,
    budget: int,
) -> CoverEntry | None:
    """Covering entry for cell [ticks[idx], ticks[idx+1]] where g is not
    identically zero, or None when X needs nothing from this window."""
    a, b = ticks[idx], ticks[idx + 1]
    ga, gb = g.value((a,)), g.value((b,))

    if ga > 0:
        lo = a - (a - ticks[idx - 1]) / 2 if idx > 0 else a - 1
    elif X.membership((a,)) is Trivalent.YES:
        # The vertex entry at a covers [a, b); this window only needs to
        # reach the far half of the cell.
        lo = (a + b) / 2
    else:
        cut = _verified_cut(X, a, 1, b - a)
        if cut is None:
            return None
        lo = a + cut

    if gb > 0:
        hi = b + (ticks[idx + 2] - b) / 2 if idx + 2 < len(ticks) else b + 1
    elif X.membership((b,)) is Trivalent.YES:
        hi = (a + b) / 2
    else:
        cut = _verified_cut(X, b, -1, b - a)
        if cut is None:
            return None
        hi = b - cut

    if lo >= hi:
        return None
    anchor = _x_point_strictly_inside(X, lo, hi, budget)
    if anchor is None:
        return None
    m = _window_multiplier(f, g, X, ticks, lo, hi, budget)
    return CoverEntry(anchor, lo, hi, m, CASE_POSITIVE)


def _assemble_cover(
    entries: list[CoverEntry], X: ClosedSetDesc, budget: int
) -> tuple[CoverEntry, ...]:
    """Greedy left-to-right subcover of X from the generated entries.

    Requirements are exact: every polytope part interval swept end to end,
    every sequence limit strictly inside a selected interval, and every
    enumerated term before the tail capture index individually covered.
    """
    if not entries:
        raise ConstructionError("no covering entries for a nonempty set")
    entries = sorted(set(entries), key=lambda e: (e.lo, e.hi, e.multiplier))
    selected: list[CoverEntry] = []

    def cover_point(t: Fraction):
        if any(e.lo < t < e.hi for e in selected):
            return
        cands = [e for e in entries if e.lo < t < e.hi]
        if not cands:
            raise ConstructionError(f"cover gap at {t}")
        selected.append(max(cands, key=lambda e: e.hi))

    point_reqs: list[Fraction] = []
    interval_reqs: list[tuple[Fraction, Fraction]] = []
    for part in X.polyparts:
        vs = sorted(part.vertices)
        c, d = vs[0][0], vs[-1][0]
        if c == d:
            point_reqs.append(c)
        else:
            interval_reqs.append((c, d))
    for seq in X.sequences:
        t = seq.limit[0]
        holders = [e for e in entries if e.lo < t < e.hi]
        if not holders:
            raise ConstructionError(f"cover gap at the limit {t}")
        home = max(holders, key=lambda e: min(t - e.lo, e.hi - t))
        if home not in selected:
            selected.append(home)
        theta = min(t - home.lo, home.hi - t)
        captured = None
        for i, w in seq.stream():
            if i - seq.first_index > SCAN_HORIZON:
                raise ConstructionError("cover tail scan exhausted")
            if i >= seq.decrease_from and norm_sq(sub(w, seq.limit)) < theta * theta:
                captured = i
                break
            point_reqs.append(w[0])
        assert captured is not None

    for c, d in sorted(interval_reqs):
        pos = c
        for _ in range(len(entries) + 1):
            cover_point(pos)
            reach = max(e.hi for e in selected if e.lo < pos < e.hi)
            if reach > d:
                break
            pos = reach
        else:
            raise ConstructionError(f"cover sweep stalled inside [{c}, {d}]")
    for t in sorted(point_reqs):
        cover_point(t)
    return tuple(sorted(selected, key=lambda e: (e.lo, e.hi)))


def cover_certificate_1d(
    f: PLFunction, g: PLFunction, X: ClosedSetDesc, budget: int = PREFIX_BUDGET
) -> CoverCertificate1D:
    """Finite neighborhood cover of a 1-D set with local multipliers.

    Requires f = 0 wherever g = 0 on X (checked first; a violation raises
    HypothesisError carrying the point). Works on the common refinement of
    the two functions' cell structures: vertices where g vanishes get
    two-sided entries tagged by the adjacent-cell situation, identically
    vanishing cells get interior entries, and the remaining cells get
    windows whose multiplier is the exact ratio maximum over the X portion
    plus a certified sequence tail. The global m is the entry maximum.
    """
    if X.arity != 1 or f.arity != 1 or g.arity != 1:
        raise CalculusError("cover certificates are one-dimensional")
    gap = _zero_set_gap(f, g, X, budget)
    if gap is not None:
        raise HypothesisError(gap, f.value(gap), g.value(gap))
    ticks = _breakpoints(f, g)
    entries: list[CoverEntry] = []

    for idx, v in enumerate(ticks):
        if g.value((v,)) != 0:
            continue
        if X.membership((v,)) is not Trivalent.YES:
            continue
        fv = f.value((v,))
        if fv > 0:
            raise HypothesisError((v,), fv, Fraction(0))
        lmult, ltag, llo = _side_cover(f, g, X, ticks, idx, -1)
        rmult, rtag, rhi = _side_cover(f, g, X, ticks, idx, 1)
        if rtag is None and ltag is None:
            raise ConstructionError("zero vertex with no adjacent cell")
        if ltag is None or (rtag is not None and rmult >= lmult):
            tag = rtag
        else:
            tag = ltag
        entries.append(CoverEntry((v,), llo, rhi, max(lmult, rmult), tag))

    for idx in range(len(ticks) - 1):
        a, b = ticks[idx], ticks[idx + 1]
        if g.value((a,)) == 0 and g.value((b,)) == 0:
            anchor = _x_point_strictly_inside(X, a, b, budget)
            if anchor is None:
                continue
            fa = f.value(anchor)
            if fa > 0:
                raise HypothesisError(anchor, fa, Fraction(0))
            # f is affine, nonnegative, and zero at an interior point of the
            # cell, hence zero on all of it; multiplier 1 covers trivially.
            entries.append(CoverEntry(anchor, a, b, 1, CASE_INTERIOR_ZERO))
        else:
            entry = _case_positive_entry(f, g, X, ticks, idx, budget)
            if entry is not None:
                entries.append(entry)

    selected = _assemble_cover(entries, X, budget)
    return CoverCertificate1D(selected, max(e.multiplier for e in selected))


# --- witnesses against strong semisimplicity ------------------------------------


@dataclass(frozen=True)
class NotSssWitness:
    """Full evidence that the algebra of X is not strongly semisimple.

    `g` vanishes exactly on the segment from x along u of length lam (in
    parameter terms), `j` vanishes exactly at x, the segment meets X only
    at x, and the dominance table refutes j <= min(1, k*g) on X for every
    listed k with exact values at enumerated sequence points.
    """

    x: Point
    u: tuple[int, ...]
    lam: Fraction
    g: PLFunction
    j: PLFunction
    dominance: DominanceTable
    sequence_index: int


def _cube_exit_time(x: Point, u: Sequence[Fraction]) -> Fraction | None:
    t: Fraction | None = None
    for xi, ui in zip(x, u):
        if ui > 0:
            s = (1 - xi) / ui
        elif ui < 0:
            s = xi / -ui
        else:
            continue
        t = s if t is None else min(t, s)
    return t


def not_sss_witness(
    X: ClosedSetDesc,
    x: Point,
    u: Sequence[int],
    lam: Fraction,
    sequence_index: int = 0,
    kmax: int = DOMINANCE_KMAX,
    lam_max: Fraction = DEFAULT_LAMBDA_MAX,
) -> NotSssWitness:
    """Build and self-verify the witness pair (g, j) with its dominance table.

    lam is clamped to lam_max and to the cube exit. The construction
    re-checks that x is in X and that the open segment misses X before
    hunting, for every k up to kmax, an enumerated sequence point where
    j > min(1, k*g) exactly.
    """
    uvec = tuple(Fraction(c) for c in u)
    exit_t = _cube_exit_time(x, uvec)
    if exit_t is not None:
        lam = min(lam, exit_t)
    lam = min(lam, lam_max)
    if lam <= 0:
        raise ConstructionError("no room for the witness segment")
    if X.membership(x) is not Trivalent.YES:
        raise ConstructionError("witness base point is not a certified member")
    if first_ray_hit(X, x, uvec, lam) is not None:
        raise ConstructionError("witness segment meets the set beyond its base")
    y = tuple(xi + lam * ui for xi, ui in zip(x, uvec))
    g = segment_zero_function(x, y)
    j = point_zero_function(x)
    rows: list[DominanceRow] = []
    for k in range(1, kmax + 1):
        kg = truncated_multiple(g, k)
        row = None
        for seq in X.sequences:
            bound = _hunt_bound(k)
            for i, w in seq.stream():
                if i - seq.first_index >= bound:
                    break
                jw = j.value(w)
                kgw = kg.value(w)
                if jw > kgw:
                    row = DominanceRow(k, i, w, jw, kgw)
                    break
            if row is not None:
                break
        if row is None:
            raise ConstructionError(f"no dominance point found for k = {k}")
        rows.append(row)
    return NotSssWitness(
        x, tuple(int(c) for c in u), lam, g, j, DominanceTable(tuple(rows)),
        sequence_index,
    )


# --- fact-chain verification -----------------------------------------------------

FACT_G_VANISHES = "g-vanishes-at-base"
FACT_J_VANISHES = "j-vanishes-at-base"
FACT_G_FLAT_ALONG_U = "g-flat-along-direction"
FACT_G_RISES_TRANSVERSALLY = "g-rises-transversally"
FACT_J_RISES_ALONG_U = "j-rises-along-direction"
FACT_BASE_RATIONAL = "base-point-rational"
FACT_J_ZERO_ON_ZG = "j-vanishes-on-zero-locus-of-g"
FACT_TAIL_IN_CONE = "sequence-tail-in-cone"


@dataclass(frozen=True)
class FactCheck:
    name: str
    passed: bool
    detail: str


def _travel_side(seq: ProbeSequence, uperp: Sequence[int]) -> int | None:
    """Eventual sign of <w_i - limit, uperp>: +1/-1 for a settled side, 0 for
    terms aligned with the direction, None when the analysis gives out."""
    sch = seq.schema
    if isinstance(sch, RationalFunctionSchema):
        den = (1,)
        for q in sch.denominators:
            den = ip.mul(den, q)
        acc = None
        for j, p in enumerate(sch.numerators):
            if uperp[j] == 0 or ip.is_zero(p):
                continue
            others = (1,)
            for kk, q in enumerate(sch.denominators):
                if kk != j:
                    others = ip.mul(others, q)
            term = ip.scale(ip.mul(p, others), uperp[j])
            acc = term if acc is None else ip.add(acc, term)
        if acc is None or ip.is_zero(acc):
            return 0
        return ip.eventual_sign(ip.mul(acc, den))
    order = len(sch.numerator_coeffs)
    inits = tuple(
        sum(uperp[j] * sch.numerator_inits[j][m] for j in range(len(uperp)))
        for m in range(order)
    )
    if all(v == 0 for v in inits):
        return 0
    cert = lr.find_growth(sch.numerator_coeffs, inits, seq.first_index)
    if cert is None or seq.den_cert is None:
        return None
    return cert.sign * seq.den_cert.sign


def verify_fact_chain(w: NotSssWitness, X: ClosedSetDesc) -> tuple[FactCheck, ...]:
    """Re-derive every local fact a witness rests on; failures are entries.

    Exact values and one-sided directional derivatives at the base point,
    the transversal rise of g for planar sets (along the perpendicular
    pointing to the side the sequence travels), vanishing of j across the
    zero locus of g on X, and cone capture of the sequence tail.
    """
    n = X.arity
    x = w.x
    u = tuple(Fraction(c) for c in w.u)
    checks: list[FactCheck] = []

    gx = w.g.value(x)
    checks.append(FactCheck(FACT_G_VANISHES, gx == 0, f"g{format_point(x)} = {gx}"))
    jx = w.j.value(x)
    checks.append(FactCheck(FACT_J_VANISHES, jx == 0, f"j{format_point(x)} = {jx}"))

    dg = directional_derivative(w.g, x, u)
    checks.append(
        FactCheck(FACT_G_FLAT_ALONG_U, dg == 0, f"derivative of g along u = {dg}")
    )

    if n == 2:
        if not (0 <= w.sequence_index < len(X.sequences)):
            checks.append(
                FactCheck(FACT_G_RISES_TRANSVERSALLY, False, "no witness sequence")
            )
        else:
            seq = X.sequences[w.sequence_index]
            base = (-w.u[1], w.u[0])
            side = _travel_side(seq, base)
            if side in (0, None):
                why = "aligned terms" if side == 0 else "side analysis gave out"
                checks.append(
                    FactCheck(
                        FACT_G_RISES_TRANSVERSALLY,
                        False,
                        f"transversal side undetermined: {why}",
                    )
                )
            else:
                uperp = tuple(Fraction(side * c) for c in base)
                probe = tuple(xi + (w.lam / 2) * ui for xi, ui in zip(x, u))
                dperp = directional_derivative(w.g, probe, uperp)
                checks.append(
                    FactCheck(
                        FACT_G_RISES_TRANSVERSALLY,
                        dperp > 0,
                        f"derivative of g at base + (lam/2)u along {uperp} = {dperp}",
                    )
                )

    dj = directional_derivative(w.j, x, u)
    checks.append(
        FactCheck(FACT_J_RISES_ALONG_U, dj > 0, f"derivative of j along u = {dj}")
    )

    checks.append(
        FactCheck(
            FACT_BASE_RATIONAL,
            True,
            f"base point {format_point(x)} has exact rational coordinates",
        )
    )

    zg_points: list[Point] = []
    for v in zeroset(w.g).points():
        if X.membership(v) is Trivalent.YES:
            zg_points.append(v)
    for ep in X.enumerate_points(ZERO_LOCUS_BUDGET):
        if w.g.value(ep.point) == 0 and ep.point not in zg_points:
            zg_points.append(ep.point)
    bad = [p for p in zg_points if w.j.value(p) != 0]
    if bad:
        detail = f"j{format_point(bad[0])} = {w.j.value(bad[0])} on the zero locus"
    else:
        detail = f"j = 0 at all {len(zg_points)} enumerated zero-locus points"
    checks.append(FactCheck(FACT_J_ZERO_ON_ZG, not bad, detail))

    if 0 <= w.sequence_index < len(X.sequences):
        seq = X.sequences[w.sequence_index]
        cone = Cone(x, u, w.lam, Fraction(1, 2))
        try:
            got = count_in_cone(
                ClosedSetDesc(n, (), (seq,)), cone, min_count=TAIL_MIN_COUNT
            )
            checks.append(
                FactCheck(
                    FACT_TAIL_IN_CONE,
                    got.count >= TAIL_MIN_COUNT,
                    f"{got.kind} {got.count} sequence points in the witness cone",
                )
            )
        except AnalysisUndetermined as exc:
            checks.append(FactCheck(FACT_TAIL_IN_CONE, False, str(exc)))
    else:
        checks.append(FactCheck(FACT_TAIL_IN_CONE, False, "no witness sequence"))
    return tuple(checks)


# --- strong semisimplicity verdicts ----------------------------------------------

SSS = "sss"
NOT_SSS = "not_sss"
UNKNOWN = "unknown"

REASON_DIM1 = "dimension-1"
REASON_POLYHEDRAL = "polyhedral"
REASON_NO_RATIONAL_OUTGOING = "no-rational-outgoing-tangent"
REASON_RATIONAL_OUTGOING = "rational-outgoing-tangent"
REASON_BLOCKED = "analysis-blocked"
REASON_NO_CONVERSE = "no-tangent-converse-above-dimension-2"


@dataclass(frozen=True)
class SssVerdict:
    """Answer to "is the algebra of X strongly semisimple?" with evidence.

    `report` carries the per-sequence tangent data the verdict rests on;
    `witness` is populated for not_sss verdicts; `blockers` lists what kept
    an unknown verdict from resolving.
    """

    verdict: str
    reason: str
    witness: NotSssWitness | None = None
    report: tuple[TangentWitness, ...] = ()
    blockers: tuple[str, ...] = ()


def decide_sss_dim1(X: ClosedSetDesc) -> SssVerdict:
    """One variable: every nonempty closed set yields a strongly semisimple
    algebra, so the verdict needs no tangent analysis. The constructive
    side is available on demand through cover_certificate_1d."""
    if X.arity != 1:
        raise ValueError("one-dimensional decision on a higher-dimensional set")
    return SssVerdict(SSS, REASON_DIM1)


def _witness_from_tangent(
    X: ClosedSetDesc,
    tw: TangentWitness,
    kmax: int,
    lam_max: Fraction,
) -> NotSssWitness:
    return not_sss_witness(
        X,
        tw.x,
        tw.direction.vector,
        tw.outgoing.lam,
        sequence_index=tw.sequence_index,
        kmax=kmax,
        lam_max=lam_max,
    )


def _tangent_blockers(report: Iterable[TangentWitness]) -> list[str]:
    out = []
    for tw in report:
        if tw.direction.kind == "undetermined":
            out.append(
                f"sequence {tw.sequence_index}: direction undetermined"
                f" ({tw.direction.reason})"
            )
        elif tw.outgoing is not None and tw.outgoing.kind == "undetermined":
            out.append(
                f"sequence {tw.sequence_index}: outgoing test undetermined"
                f" ({tw.outgoing.reason})"
            )
    return out


def decide_sss_dim2(
    X: ClosedSetDesc,
    kmax: int = DOMINANCE_KMAX,
    lam_max: Fraction = DEFAULT_LAMBDA_MAX,
) -> SssVerdict:
    """Two variables: strong semisimplicity fails exactly when some sequence
    limit (always a rational point here) has a rational outgoing tangent.

    A rational direction with an outgoing segment produces a full witness;
    irrational or non-outgoing directions for every sequence, with polytope
    parts never contributing tangents, give the semisimple verdict; any
    undetermined analysis leaves the answer unknown with its blockers.
    """
    if X.arity != 2:
        raise ValueError("planar decision on a set of different dimension")
    report = tangent_report(X, lam_max)
    for tw in report:
        if (
            tw.direction.kind == "rational"
            and tw.outgoing is not None
            and tw.outgoing.kind == "yes"
        ):
            witness = _witness_from_tangent(X, tw, kmax, lam_max)
            return SssVerdict(NOT_SSS, REASON_RATIONAL_OUTGOING, witness, report)
    blockers = _tangent_blockers(report)
    if blockers:
        return SssVerdict(UNKNOWN, REASON_BLOCKED, None, report, tuple(blockers))
    if not X.sequences:
        return SssVerdict(SSS, REASON_POLYHEDRAL, None, report)
    return SssVerdict(SSS, REASON_NO_RATIONAL_OUTGOING, None, report)


def decide_sss(
    X: ClosedSetDesc,
    kmax: int = DOMINANCE_KMAX,
    lam_max: Fraction = DEFAULT_LAMBDA_MAX,
) -> SssVerdict:
    """Dimension-dispatched decision.

    n = 1 and n = 2 are complete. Above that the rational outgoing tangent
    is only sufficient for failure: finding one gives not_sss, purely
    polyhedral sets are strongly semisimple, and everything else stays
    unknown because no converse criterion exists there; the tangent report
    (including nonalignment data) is returned for information.
    """
    if X.arity == 1:
        return decide_sss_dim1(X)
    if X.arity == 2:
        return decide_sss_dim2(X, kmax, lam_max)
    report = tangent_report(X, lam_max)
    for tw in report:
        if (
            tw.direction.kind == "rational"
            and tw.outgoing is not None
            and tw.outgoing.kind == "yes"
        ):
            witness = _witness_from_tangent(X, tw, kmax, lam_max)
            return SssVerdict(NOT_SSS, REASON_RATIONAL_OUTGOING, witness, report)
    if not X.sequences:
        return SssVerdict(SSS, REASON_POLYHEDRAL, None, report)
    blockers = _tangent_blockers(report)
    blockers.append("no tangent criterion converse above dimension 2")
    return SssVerdict(UNKNOWN, REASON_NO_CONVERSE, None, report, tuple(blockers))
