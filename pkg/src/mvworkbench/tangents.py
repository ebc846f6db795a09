"""Tangent analysis: cones, limit directions, outgoing segments, counting.

A described set admits a tangent direction u at a point x when the
normalized difference vectors of one of its probe sequences converge to u;
the direction is outgoing when some segment conv(x, x + lam*u) meets the set
only at x. Everything here is decided in exact arithmetic:

  * cone membership compares squared quantities only, so the angular test
    never needs square roots and is invariant under positive rescaling of
    the axis;
  * rational-function schemas reduce every tail question to the eventual
    sign of an integer polynomial;
  * recurrence schemas use exact quadratic-field closed forms for the
    direction, exact zero sets of cross sequences for ray alignment, and
    growth certificates of derived sequences for cone tails.

Verdicts never guess: analyses that exhaust their horizon or fall outside
the supported recurrence orders report themselves undetermined, and
`count_in_cone` raises AnalysisUndetermined rather than return a count it
cannot certify.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from mvworkbench import intpoly as ip
from mvworkbench import linrec as lr
from mvworkbench.closedsets import (
    ClosedSetDesc,
    LinearRecurrenceSchema,
    ProbeSequence,
    RationalFunctionSchema,
)
from mvworkbench.intpoly import Poly
from mvworkbench.polytopes import Polytope
from mvworkbench.rationals import (
    Point,
    Vector,
    clear_denominators,
    dot,
    is_zero_vector,
    norm_sq,
    primitive_vector,
    sub,
)

DEFAULT_LAMBDA_MAX = Fraction(1, 2)
SCAN_HORIZON = 10**5


class AnalysisUndetermined(Exception):
    """A count or verdict that could not be certified either way."""


@dataclass(frozen=True)
class Cone:
    """cone(apex, axis, height, cos_half_angle): a ball cap around a ray.

    Contains p iff |p-apex| <= height and the angle between p-apex and the
    axis is at most the half angle (cosine at least cos_half_angle). The
    axis need not be normalized; containment is invariant under positive
    rescaling.
    """

    apex: Point
    axis: Vector
    height: Fraction
    cos_half_angle: Fraction

    def __post_init__(self):
        if len(self.apex) != len(self.axis):
            raise ValueError("apex and axis dimensions differ")
        if is_zero_vector(self.axis):
            raise ValueError("cone axis must be nonzero")
        if not self.height > 0:
            raise ValueError("cone height must be positive")
        if not 0 < self.cos_half_angle <= 1:
            raise ValueError("cos of the half angle must lie in (0, 1]")


def cone_contains(cone: Cone, p: Point) -> bool:
    """Exact membership via squared comparisons; the apex is contained."""
    d = sub(p, cone.apex)
    dist_sq = norm_sq(d)
    if dist_sq > cone.height * cone.height:
        return False
    along = dot(d, cone.axis)
    if along < 0:
        return False
    c = cone.cos_half_angle
    return along * along >= c * c * dist_sq * norm_sq(cone.axis)


@dataclass(frozen=True)
class DirectionVerdict:
    """Classification of the limit of normalized difference vectors.

    kind "rational": `vector` is a primitive integer representative keeping
    the true sign of the limit direction. kind "irrational": `minimal_poly`
    is the characteristic polynomial whose irrational root drives the
    direction, and `transcript` records the full rational-root test
    (candidate, value) showing it has no rational root. kind
    "undetermined": `reason` explains which analysis gave out.
    """

    kind: str
    vector: tuple[int, ...] | None = None
    minimal_poly: tuple[int, ...] | None = None
    transcript: tuple[tuple[Fraction, Fraction], ...] | None = None
    reason: str | None = None


@dataclass(frozen=True)
class OutgoingVerdict:
    """Whether conv(x, x+lam*u) can meet the set only at x.

    kind "yes": `lam` realizes it. kind "no": `blocker` describes the part
    of the set overlapping every such segment. kind "all_aligned":
    infinitely many sequence points lie on the ray itself. kind
    "undetermined": a horizon or unsupported schema blocked the analysis.
    """

    kind: str
    lam: Fraction | None = None
    blocker: tuple | None = None
    reason: str | None = None


@dataclass(frozen=True)
class CountResult:
    """Certified census of set points (other than the apex) in a cone."""

    kind: str  # "at_least" | "exactly"
    count: int


@dataclass(frozen=True)
class TangentWitness:
    """Per-sequence tangent data at the sequence's own limit point."""

    sequence_index: int
    x: Point
    direction: DirectionVerdict
    outgoing: OutgoingVerdict | None


# --- limit directions -------------------------------------------------------


def _sign_fixed_primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    return primitive_vector(clear_denominators(tuple(Fraction(v) for v in vec)))


def limit_direction(seq: ProbeSequence) -> DirectionVerdict:
    """Exact direction of w_i - x as i grows, when the schema determines it."""
    if isinstance(seq.schema, RationalFunctionSchema):
        return _direction_rational_function(seq.schema)
    return _direction_recurrence(seq.schema)


def _direction_rational_function(sch: RationalFunctionSchema) -> DirectionVerdict:
    # d_j(i) ~ (lead p_j / lead q_j) * i^(-gap_j); the coordinates with the
    # smallest gap dominate, the rest vanish in the limit. Always rational.
    gaps = []
    for p, q in zip(sch.numerators, sch.denominators):
        if ip.is_zero(p):
            gaps.append(None)
        else:
            gaps.append(ip.degree(q) - ip.degree(p))
    live = [g for g in gaps if g is not None]
    least = min(live)
    vec = [
        Fraction(ip.leading(p), ip.leading(q)) if g == least else Fraction(0)
        for g, p, q in zip(gaps, sch.numerators, sch.denominators)
    ]
    return DirectionVerdict("rational", vector=_sign_fixed_primitive(vec))


def _direction_recurrence(sch: LinearRecurrenceSchema) -> DirectionVerdict:
    # The positive denominator drops out of the normalized differences, so
    # only the shared numerator recurrence matters.
    coeffs = sch.numerator_coeffs
    if len(coeffs) == 1:
        if coeffs[0] < 0:
            return DirectionVerdict(
                "undetermined", reason="alternating geometric numerators"
            )
        vec = [Fraction(inits[0]) for inits in sch.numerator_inits]
        return DirectionVerdict("rational", vector=_sign_fixed_primitive(vec))
    if len(coeffs) > 2:
        return DirectionVerdict(
            "undetermined", reason="numerator recurrence order above 2"
        )
    pairs = [(inits[0], inits[1]) for inits in sch.numerator_inits]
    data = lr.direction_data(coeffs[0], coeffs[1], pairs)
    if data.status != "ok":
        return DirectionVerdict(
            "undetermined", reason=f"dominant root analysis: {data.status}"
        )
    us = [u for u, _ in data.alpha_pairs]
    vs = [v for _, v in data.alpha_pairs]
    rank2 = any(
        us[j] * vs[k] - us[k] * vs[j] != 0
        for j in range(len(us))
        for k in range(j + 1, len(us))
    )
    if rank2:
        roots, transcript = ip.rational_root_transcript(data.char)
        # rank 2 forces a nonsquare discriminant, hence no rational root.
        assert not roots
        return DirectionVerdict(
            "irrational", minimal_poly=data.char, transcript=tuple(transcript)
        )
    if all(v == 0 for v in vs):
        return DirectionVerdict("rational", vector=_sign_fixed_primitive(us))
    if all(u == 0 for u in us):
        # alpha = sqrt(disc) * v: the radical is a positive common factor.
        return DirectionVerdict("rational", vector=_sign_fixed_primitive(vs))
    # Rows are proportional: alpha_j = v_j * (t + sqrt(disc)) for rational t.
    j = next(k for k, v in enumerate(vs) if v != 0)
    t = us[j] / vs[j]
    factor_sign = lr.Surd(t, 1, data.disc).sign()
    vec = [factor_sign * v for v in vs]
    return DirectionVerdict("rational", vector=_sign_fixed_primitive(vec))


# --- shared difference algebra ----------------------------------------------


def _difference_polys(
    sch: RationalFunctionSchema, delta: Vector
) -> tuple[list[Poly], Poly]:
    """Integer polynomials (N_j, DEN) with w_j(i) - base_j = N_j(i)/DEN(i).

    `delta` is limit - base. DEN carries the sign of prod q_j; the common
    positive clearing factor preserves all sign questions.
    """
    den = (1,)
    for q in sch.denominators:
        den = ip.mul(den, q)
    others = []
    for j in range(len(sch.denominators)):
        prod = (1,)
        for k, q in enumerate(sch.denominators):
            if k != j:
                prod = ip.mul(prod, q)
        others.append(prod)
    scale = 1
    for d in delta:
        scale = scale * d.denominator // gcd(scale, d.denominator)
    nums = []
    for j, (p, d) in enumerate(zip(sch.numerators, delta)):
        part = ip.scale(den, int(d * scale))
        nums.append(ip.add(part, ip.scale(ip.mul(p, others[j]), scale)))
    return nums, ip.scale(den, scale)


def _cube_exit(x: Point, u: Vector) -> Fraction | None:
    """sup{t >= 0 : x + t*u in [0,1]^n}, None when the ray never exits."""
    best = None
    for xj, uj in zip(x, u):
        if uj > 0:
            bound = (1 - xj) / uj
        elif uj < 0:
            bound = -xj / uj
        else:
            continue
        if best is None or bound < best:
            best = bound
    return best


# --- outgoing analysis -------------------------------------------------------


@dataclass
class _RayFindings:
    """Blocking parameters and verdict overrides from one part of the set."""

    blockers: list[Fraction]
    all_aligned: bool = False
    overlap: tuple | None = None
    undetermined: str | None = None


def _ray_hits_rational_function(
    seq: ProbeSequence, x: Point, u: Vector, lam0: Fraction
) -> _RayFindings:
    sch: RationalFunctionSchema = seq.schema
    i0 = seq.first_index
    delta = sub(seq.limit, x)
    ui = clear_denominators(u)
    nums, den = _difference_polys(sch, delta)
    n = len(nums)
    crosses = [
        ip.sub(ip.scale(nums[j], ui[k]), ip.scale(nums[k], ui[j]))
        for j in range(n)
        for k in range(j + 1, n)
    ]
    findings = _RayFindings([])
    t_lim = dot(delta, u) / norm_sq(u)

    def t_at(i: int) -> Fraction:
        w = seq.point_at(i)
        return dot(sub(w, x), u) / norm_sq(u)

    if all(ip.is_zero(c) for c in crosses):
        dot_poly = ()
        for j in range(n):
            dot_poly = ip.add(dot_poly, ip.scale(nums[j], ui[j]))
        positivity = ip.mul(dot_poly, den)
        if t_lim == 0:
            if ip.eventual_sign(positivity) == 1:
                findings.all_aligned = True
                return findings
            stable = max(i0, ip.sign_stable_from(positivity)) if not ip.is_zero(positivity) else i0
            for i in range(i0, stable + 1):
                t = t_at(i)
                if 0 < t <= lam0:
                    findings.blockers.append(t)
            return findings
        # The terms line up on the ray but cluster away from x.
        if 0 < t_lim <= lam0:
            findings.blockers.append(t_lim)
        theta = min(lam0, t_lim / 2) if t_lim > 0 else lam0
        # Hits need t(i) in (0, theta] while t(i) -> t_lim outside that
        # interval, so one of the two sign conditions fails eventually and a
        # finite sign-stable scan is complete. With u = ui / L (L > 0),
        # t <= theta becomes dot_poly / den <= theta * |ui|^2 / L.
        j = next(k for k, c in enumerate(u) if c != 0)
        scaled = Fraction(theta * norm_sq(ui) * u[j], ui[j])
        bound_poly = ip.mul(
            ip.sub(
                ip.scale(den, scaled.numerator),
                ip.scale(dot_poly, scaled.denominator),
            ),
            den,
        )
        negatives = [
            g
            for g in (bound_poly, positivity)
            if not ip.is_zero(g) and ip.eventual_sign(g) < 0
        ]
        assert negatives, "t(i) converges outside (0, theta]"
        stop = max(i0, min(ip.sign_stable_from(g) for g in negatives))
        for i in range(i0, stop + 1):
            t = t_at(i)
            if 0 < t <= theta:
                findings.blockers.append(t)
        return findings

    # Some cross polynomial is nonzero: ray hits happen at finitely many
    # indices, all among the integer roots of that polynomial.
    witness = next(c for c in crosses if not ip.is_zero(c))
    try:
        candidates = ip.integer_roots(witness, lo=i0)
    except ip.HorizonExhausted:
        findings.undetermined = "integer-root search out of range"
        return findings
    for i in candidates:
        if all(ip.evaluate(c, i) == 0 for c in crosses):
            t = t_at(i)
            if 0 < t <= lam0:
                findings.blockers.append(t)
    if _parallel(delta, u) and 0 < t_lim <= lam0:
        findings.blockers.append(t_lim)
    return findings


def _parallel(a: Vector, b: Vector) -> bool:
    n = len(a)
    return all(
        a[j] * b[k] - a[k] * b[j] == 0 for j in range(n) for k in range(j + 1, n)
    )


def _ray_hits_recurrence(
    seq: ProbeSequence, x: Point, u: Vector, lam0: Fraction
) -> _RayFindings:
    sch: LinearRecurrenceSchema = seq.schema
    i0 = seq.first_index
    delta = sub(seq.limit, x)
    ui = clear_denominators(u)
    findings = _RayFindings([])

    if not is_zero_vector(delta):
        # The sequence clusters at a point other than x: after the terms get
        # closer to the limit than the limit is to the segment, no more hits.
        t_lim = dot(delta, u) / norm_sq(u)
        theta = lam0
        if _parallel(delta, u) and 0 < t_lim <= lam0:
            findings.blockers.append(t_lim)
            theta = t_lim / 2
        segment = Polytope.from_points(
            [x, tuple(xj + theta * uj for xj, uj in zip(x, u))]
        )
        gap_sq = norm_sq(sub(segment.nearest_point(seq.limit), seq.limit))
        # The limit can sit on the segment only when it is parallel with
        # 0 < t_lim, and theta was shrunk below t_lim in that case.
        assert gap_sq > 0
        for i, w in seq.stream():
            if i - i0 > SCAN_HORIZON:
                findings.undetermined = "ray scan horizon exhausted"
                return findings
            d = sub(w, x)
            if _parallel(d, u):
                t = dot(d, u) / norm_sq(u)
                if 0 < t <= theta:
                    findings.blockers.append(t)
            if i >= seq.decrease_from and norm_sq(sub(w, seq.limit)) < gap_sq:
                return findings

    # delta == 0: the ray is based at the limit itself. Cross sequences
    # z_jk = s_j u_k - s_k u_j all satisfy the shared recurrence.
    coeffs = sch.numerator_coeffs
    order = len(coeffs)
    n = len(ui)
    inits = sch.numerator_inits
    cross_inits = [
        tuple(
            inits[j][m] * ui[k] - inits[k][m] * ui[j] for m in range(order)
        )
        for j in range(n)
        for k in range(j + 1, n)
    ]
    zero_sets = []
    for ci in cross_inits:
        if order == 1:
            zero_sets.append(lr.zeros_order1(coeffs[0], ci[0]))
        elif order == 2:
            zero_sets.append(lr.zeros_order2(coeffs[0], coeffs[1], ci[0], ci[1]))
        else:
            findings.undetermined = "cross-sequence order above 2"
            return findings
    if any(z.kind == "undetermined" for z in zero_sets):
        findings.undetermined = "cross-sequence zero set undetermined"
        return findings

    if all(z.kind == "all" for z in zero_sets):
        return _aligned_recurrence_tail(seq, ui, u, lam0, findings)

    parities = {z.parity for z in zero_sets if z.kind == "parity"}
    finites = [z for z in zero_sets if z.kind == "finite"]
    if finites:
        candidate_ks = set(finites[0].ks)
        for z in finites[1:]:
            candidate_ks &= set(z.ks)
        if parities:
            candidate_ks = {k for k in candidate_ks if (k % 2) in parities}
    elif len(parities) > 1:
        candidate_ks = set()
    else:
        findings.undetermined = "infinitely many aligned indices on one parity"
        return findings
    for k in sorted(candidate_ks):
        i = i0 + k
        w = seq.point_at(i)
        d = sub(w, x)
        if _parallel(d, u):
            t = dot(d, u) / norm_sq(u)
            if 0 < t <= lam0:
                findings.blockers.append(t)
    return findings


def _aligned_recurrence_tail(
    seq: ProbeSequence, ui, u: Vector, lam0: Fraction, findings: _RayFindings
) -> _RayFindings:
    """Every term sits on the line through x along u; settle the t > 0 tail."""
    sch: LinearRecurrenceSchema = seq.schema
    i0 = seq.first_index
    t_inits = tuple(
        sum(ui[j] * inits[m] for j, inits in enumerate(sch.numerator_inits))
        for m in range(len(sch.numerator_coeffs))
    )
    if all(v == 0 for v in t_inits):
        # T identically zero with full alignment would put every term at x,
        # which construction already excluded.
        return findings
    cert = lr.find_growth(sch.numerator_coeffs, t_inits, i0)
    if cert is None:
        findings.undetermined = "no growth certificate for the ray parameter"
        return findings
    if cert.sign > 0:
        # t(i) is eventually positive and tends to 0: every segment along u
        # catches infinitely many terms.
        findings.all_aligned = True
        return findings
    stop = max(cert.start, seq.decrease_from)
    for i, w in seq.stream():
        if i > stop:
            break
        t = dot(sub(w, x), u) / norm_sq(u)
        if 0 < t <= lam0:
            findings.blockers.append(t)
    return findings


def is_outgoing(
    X: ClosedSetDesc,
    x: Point,
    u: Vector,
    lam_max: Fraction = DEFAULT_LAMBDA_MAX,
) -> OutgoingVerdict:
    """Decide whether u is outgoing for X at x, with an explicit segment.

    Returns Yes(lam) with the largest certified lam up to lam_max (clamped
    to the cube and halved below any blocking parameter), No with the
    overlapping feature, AllAligned when infinitely many sequence terms lie
    on the ray arbitrarily close to x, or an undetermined verdict.
    """
    if is_zero_vector(u):
        raise ValueError("direction must be nonzero")
    if len(u) != X.arity or len(x) != X.arity:
        raise ValueError("dimension mismatch")
    exit_t = _cube_exit(x, u)
    lam0 = lam_max if exit_t is None else min(lam_max, exit_t)
    if lam0 <= 0:
        # The ray leaves the cube immediately; the open segment misses X.
        return OutgoingVerdict("yes", lam=lam_max)

    blockers: list[Fraction] = []
    undetermined: str | None = None
    aligned = False

    end = tuple(xj + lam0 * uj for xj, uj in zip(x, u))
    for idx, part in enumerate(X.polyparts):
        clipped = part.clip_segment(x, end)
        if not clipped:
            continue
        ts = sorted(dot(sub(p, x), u) / norm_sq(u) for p in clipped)
        lo, hi = ts[0], ts[-1]
        if hi == 0:
            continue
        if lo == 0 and hi > 0:
            return OutgoingVerdict(
                "no", blocker=("polytope", idx, "overlaps every segment")
            )
        blockers.append(lo)

    for idx, seq in enumerate(X.sequences):
        if isinstance(seq.schema, RationalFunctionSchema):
            found = _ray_hits_rational_function(seq, x, u, lam0)
        else:
            found = _ray_hits_recurrence(seq, x, u, lam0)
        if found.all_aligned:
            aligned = True
        if found.overlap is not None:
            return OutgoingVerdict("no", blocker=("sequence", idx) + found.overlap)
        blockers.extend(found.blockers)
        if found.undetermined and undetermined is None:
            undetermined = f"sequence {idx}: {found.undetermined}"

    if aligned:
        return OutgoingVerdict("all_aligned")
    if undetermined is not None:
        return OutgoingVerdict("undetermined", reason=undetermined)
    lam = lam0
    if blockers:
        lam = min(lam, min(blockers) / 2)
    return OutgoingVerdict("yes", lam=lam)


def first_ray_hit(
    X: ClosedSetDesc, x: Point, u: Vector, lam_max: Fraction
) -> Fraction | None:
    """Some t in (0, lam_max] with x + t*u in X, or None when there is none.

    None is a certified emptiness statement for the half-open segment. When
    points of X do lie on it the returned parameter is the smallest one
    found, except for aligned tails whose infimum is not attained; any hit
    serves the callers (emptiness cuts and hypothesis violations). Raises
    AnalysisUndetermined when a schema analysis cannot settle the question.
    """
    if is_zero_vector(u):
        raise ValueError("direction must be nonzero")
    exit_t = _cube_exit(x, u)
    lam0 = lam_max if exit_t is None else min(lam_max, exit_t)
    if lam0 <= 0:
        return None
    hits: list[Fraction] = []
    end = tuple(xj + lam0 * uj for xj, uj in zip(x, u))
    for part in X.polyparts:
        clipped = part.clip_segment(x, end)
        if not clipped:
            continue
        ts = sorted(dot(sub(p, x), u) / norm_sq(u) for p in clipped)
        lo, hi = ts[0], ts[-1]
        if hi > 0:
            hits.append(lo if lo > 0 else hi)
    for seq in X.sequences:
        if isinstance(seq.schema, RationalFunctionSchema):
            found = _ray_hits_rational_function(seq, x, u, lam0)
        else:
            found = _ray_hits_recurrence(seq, x, u, lam0)
        if found.undetermined:
            raise AnalysisUndetermined(found.undetermined)
        hits.extend(found.blockers)
        if found.all_aligned:
            # Infinitely many terms sit on (0, lam0]; return the first found.
            for i, w in seq.stream():
                if i - seq.first_index > SCAN_HORIZON:
                    raise AnalysisUndetermined("aligned hit scan exhausted")
                t = dot(sub(w, x), u) / norm_sq(u)
                if 0 < t <= lam0 and _parallel(sub(w, x), u):
                    hits.append(t)
                    break
    return min(hits) if hits else None


# --- counting inside cones ----------------------------------------------------


def _max_cos_sq_in_cone_of(gens: list[Vector], u: Vector) -> Fraction | None:
    """Max of cos^2(angle(d, u)) over nonzero d in cone(gens), None if empty.

    Only directions with a positive inner product against u count; if every
    feasible direction has a nonpositive one the maximum reported is None.
    Candidates follow the projection structure of polyhedral cones, with
    Caratheodory bounding the active generator count by the dimension.
    """
    from itertools import combinations

    from mvworkbench.linalg import solve

    gens = [g for g in gens if not is_zero_vector(g)]
    if not gens:
        return None
    n = len(u)
    best: Fraction | None = None
    uu = norm_sq(u)
    for g in gens:
        along = dot(g, u)
        if along > 0:
            val = Fraction(along * along, norm_sq(g) * uu)
            if best is None or val > best:
                best = val
    for g1, g2 in combinations(gens, 2):
        gram = [
            [norm_sq(g1), dot(g1, g2)],
            [dot(g1, g2), norm_sq(g2)],
        ]
        rhs = [dot(u, g1), dot(u, g2)]
        coeffs = solve(gram, rhs)
        if coeffs is None:
            continue
        a, b = coeffs
        if a < 0 or b < 0:
            continue
        proj = tuple(a * g1[j] + b * g2[j] for j in range(n))
        pp = norm_sq(proj)
        if pp == 0 or dot(proj, u) <= 0:
            continue
        val = Fraction(pp, uu)
        if best is None or val > best:
            best = val
    if n >= 3:
        for trio in combinations(gens, 3):
            mat = [[trio[k][j] for k in range(3)] for j in range(n)]
            coeffs = solve(mat, list(u))
            if coeffs is not None and all(c >= 0 for c in coeffs):
                return Fraction(1)
    return best


def _classify_cone_polytope(cone: Cone, part: Polytope):
    """('empty' | 'infinite' | 'points' | 'undetermined', finite points)."""
    apex = cone.apex
    if part.contains(apex):
        gens = [sub(v, apex) for v in part.vertices if v != apex]
        best = _max_cos_sq_in_cone_of(gens, cone.axis)
        c = cone.cos_half_angle
        if best is not None and best >= c * c:
            return "infinite", ()
        return "empty", ()
    nearest = part.nearest_point(apex)
    if norm_sq(sub(nearest, apex)) > cone.height * cone.height:
        return "empty", ()
    candidates = list(part.vertices) + [nearest]
    hits = [p for p in candidates if p != apex and cone_contains(cone, p)]
    if not hits:
        return "undetermined", ()
    if part.dim == 0:
        return "points", (hits[0],)
    h = hits[0]
    for v in part.vertices:
        if v == h:
            continue
        step = Fraction(1, 2)
        for _ in range(40):
            probe = tuple(hj + step * (vj - hj) for hj, vj in zip(h, v))
            if probe != h and probe != apex and cone_contains(cone, probe):
                return "infinite", ()
            step /= 2
    return "undetermined", ()


def _cone_tail_rational_function(seq: ProbeSequence, cone: Cone):
    """('in' | 'out', last index to scan) for the sequence tail."""
    sch: RationalFunctionSchema = seq.schema
    delta = sub(seq.limit, cone.apex)
    nums, den = _difference_polys(sch, delta)
    ui = clear_denominators(cone.axis)
    e1, e2 = cone.height.numerator**2, cone.height.denominator**2
    c1, c2 = cone.cos_half_angle.numerator**2, cone.cos_half_angle.denominator**2
    sum_sq = ()
    for nj in nums:
        sum_sq = ip.add(sum_sq, ip.mul(nj, nj))
    den_sq = ip.mul(den, den)
    g_ball = ip.sub(ip.scale(den_sq, e1), ip.scale(sum_sq, e2))
    u_poly = ()
    for nj, uij in zip(nums, ui):
        u_poly = ip.add(u_poly, ip.scale(nj, uij))
    g_dot = ip.mul(u_poly, den)
    g_angle = ip.sub(
        ip.scale(ip.mul(u_poly, u_poly), c2),
        ip.scale(sum_sq, c1 * int(norm_sq(ui))),
    )
    negatives = [
        g for g in (g_ball, g_dot, g_angle) if not ip.is_zero(g) and ip.eventual_sign(g) < 0
    ]
    if not negatives:
        return "in", seq.first_index
    stop = min(ip.sign_stable_from(g) for g in negatives)
    return "out", max(seq.first_index, stop)


def _squared_recurrence(coeffs: tuple[int, ...]) -> tuple[int, ...] | None:
    """Recurrence satisfied by products of solutions (orders 1 and 2)."""
    if len(coeffs) == 1:
        return (coeffs[0] * coeffs[0],)
    if len(coeffs) == 2:
        a1, a2 = coeffs
        return (a1 * a1 + a2, a2 * (a1 * a1 + a2), a2**3)
    return None


def _strictly_inside(cone: Cone, p: Point) -> bool:
    """Whether some open ball around p lies inside the cone."""
    d = sub(p, cone.apex)
    dist_sq = norm_sq(d)
    if dist_sq == 0 or dist_sq >= cone.height * cone.height:
        return False
    along = dot(d, cone.axis)
    c = cone.cos_half_angle
    return along > 0 and along * along > c * c * dist_sq * norm_sq(cone.axis)


def _cone_tail_recurrence(seq: ProbeSequence, cone: Cone):
    """('in' | 'out' | 'unknown', last index to scan) for a recurrence tail."""
    sch: LinearRecurrenceSchema = seq.schema
    i0 = seq.first_index
    if seq.limit != cone.apex:
        # Terms cluster at the limit, so its position settles the tail when
        # it avoids the cone's boundary.
        if _strictly_inside(cone, seq.limit):
            return "in", i0
        delta = sub(seq.limit, cone.apex)
        l_sq = norm_sq(delta)
        eps = cone.height
        if l_sq <= eps * eps:
            return "unknown", i0
        for i, w in seq.stream():
            if i - i0 > SCAN_HORIZON:
                return "unknown", i
            s = norm_sq(sub(w, seq.limit))
            lhs = l_sq - eps * eps - s
            if i >= seq.decrease_from and lhs > 0 and lhs * lhs > 4 * eps * eps * s:
                # |w - apex| >= |delta| - |w - limit| > eps from here on.
                return "out", i
    ui = clear_denominators(cone.axis)
    order = len(sch.numerator_coeffs)
    sq = _squared_recurrence(sch.numerator_coeffs)
    if sq is None:
        return "unknown", i0
    span = len(sq)
    terms = [
        lr.unroll(sch.numerator_coeffs, inits, span + order)
        for inits in sch.numerator_inits
    ]
    u_seq = [
        sum(ui[j] * terms[j][m] for j in range(len(ui))) for m in range(span + order)
    ]
    c1, c2 = cone.cos_half_angle.numerator**2, cone.cos_half_angle.denominator**2
    h_seq = [
        c2 * u_seq[m] ** 2
        - c1 * int(norm_sq(ui)) * sum(terms[j][m] ** 2 for j in range(len(ui)))
        for m in range(span + order)
    ]
    # The dot condition is sign(U(i)) * sign(q(i)) >= 0 and the denominator
    # is certified positive from decrease_from on; the angle condition
    # compares squares, so q drops out of it entirely.
    verdicts = []
    for vals, coeff_set, needs_den in (
        (u_seq, sch.numerator_coeffs, True),
        (h_seq, sq, False),
    ):
        if all(v == 0 for v in vals[: len(coeff_set)]):
            verdicts.append(("zero", i0))
            continue
        cert = lr.find_growth(coeff_set, tuple(vals[: len(coeff_set)]), i0)
        if cert is None:
            return "unknown", i0
        start = max(cert.start, seq.decrease_from) if needs_den else cert.start
        verdicts.append(("pos" if cert.sign > 0 else "neg", start))
    if any(kind == "neg" for kind, _ in verdicts):
        # The dot or angle condition fails strictly beyond its certificate.
        stop = max(start for kind, start in verdicts if kind == "neg")
        return "out", max(i0, stop)
    # The ball condition holds from the first index where the shrinking
    # distance drops under the height; the other two already hold eventually.
    eps_sq = cone.height * cone.height
    ball_from = i0
    for i, w in seq.stream():
        if i - i0 > SCAN_HORIZON:
            return "unknown", i
        if i >= seq.decrease_from and norm_sq(sub(w, seq.limit)) <= eps_sq:
            ball_from = i
            break
    stop = max([ball_from] + [start for kind, start in verdicts if kind == "pos"])
    return "in", stop


def count_in_cone(
    X: ClosedSetDesc, cone: Cone, min_count: int = 100
) -> CountResult:
    """Certified count of points of X (apex excluded) inside the cone.

    Polytope parts classify exactly through convexity; rational-function
    sequences through polynomial tail signs; recurrence sequences through
    growth certificates of the derived dot and angle sequences. An
    uncertifiable part raises AnalysisUndetermined unless the certified
    evidence already reaches min_count.
    """
    if len(cone.apex) != X.arity:
        raise ValueError("cone dimension mismatch")
    infinite = False
    undecided: list[str] = []
    points: set[Point] = set()

    for idx, part in enumerate(X.polyparts):
        kind, pts = _classify_cone_polytope(cone, part)
        if kind == "infinite":
            infinite = True
        elif kind == "points":
            points.update(pts)
        elif kind == "undetermined":
            undecided.append(f"polytope {idx}")

    for idx, seq in enumerate(X.sequences):
        if seq.limit != cone.apex and cone_contains(cone, seq.limit):
            points.add(seq.limit)
        if isinstance(seq.schema, RationalFunctionSchema):
            tail, stop = _cone_tail_rational_function(seq, cone)
        else:
            tail, stop = _cone_tail_recurrence(seq, cone)
        if tail == "in":
            infinite = True
            continue
        if tail == "unknown":
            undecided.append(f"sequence {idx}")
            continue
        for i in range(seq.first_index, stop + 1):
            w = seq.point_at(i)
            if w != cone.apex and cone_contains(cone, w):
                points.add(w)

    if infinite:
        return CountResult("at_least", min_count)
    if undecided:
        if len(points) >= min_count:
            return CountResult("at_least", min_count)
        raise AnalysisUndetermined("; ".join(undecided))
    return CountResult("exactly", len(points))


# --- reports -------------------------------------------------------------------


def tangent_report(
    X: ClosedSetDesc, lam_max: Fraction = DEFAULT_LAMBDA_MAX
) -> tuple[TangentWitness, ...]:
    """One tangent witness per probe sequence, at the sequence's limit.

    Polytope parts contribute no witnesses: every direction attainable from
    inside a convex polytope stays inside it initially, so it is never
    outgoing (checked by the property suite rather than re-proved here).
    """
    out = []
    for idx, seq in enumerate(X.sequences):
        direction = limit_direction(seq)
        outgoing = None
        if direction.kind == "rational":
            u = tuple(Fraction(c) for c in direction.vector)
            outgoing = is_outgoing(X, seq.limit, u, lam_max)
        out.append(TangentWitness(idx, seq.limit, direction, outgoing))
    return tuple(out)
