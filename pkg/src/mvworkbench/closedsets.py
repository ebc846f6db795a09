"""Closed subsets of the unit cube: rational polytopes plus probe sequences.

A described set is a finite union of rational polytopes and convergent
sequences. Each sequence carries its limit point explicitly (the set is
closed by fiat) and a symbolic schema for the coordinate differences
w_i - x:

  * RationalFunctionSchema: the j-th difference is p_j(i)/q_j(i) for integer
    polynomials p_j, q_j. Everything about these sequences is decidable by
    polynomial sign analysis.
  * LinearRecurrenceSchema: the differences share one integer linear
    recurrence for their numerators and carry a single denominator sequence
    with its own recurrence. Tails are controlled by growth certificates
    found and verified at construction time.

Construction validates, exactly, that every term stays in the unit cube,
that no term equals the limit, and that the distance to the limit is
eventually strictly decreasing (recording from which index on). Membership
queries are three-valued: a horizon-capped scan answers Unknown rather than
guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence, Union

from mvworkbench import intpoly as ip
from mvworkbench import linrec as lr
from mvworkbench.intpoly import Poly
from mvworkbench.mcnaughton import PLFunction, ZeroLocus, zeroset
from mvworkbench.polytopes import Polytope
from mvworkbench.rationals import Point, in_unit_cube, norm_sq, sub

MEMBERSHIP_HORIZON = 10**6


class DescriptionError(ValueError):
    """A set description that fails its construction-time checks."""


class Trivalent(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class RationalFunctionSchema:
    """Coordinate differences d_j(i) = p_j(i)/q_j(i), integer polynomials."""

    numerators: tuple[Poly, ...]
    denominators: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.numerators) != len(self.denominators):
            raise DescriptionError("one numerator and one denominator per coordinate")
        for q in self.denominators:
            if ip.is_zero(q):
                raise DescriptionError("zero denominator polynomial")

    @property
    def arity(self) -> int:
        return len(self.numerators)


@dataclass(frozen=True)
class LinearRecurrenceSchema:
    """Numerator sequences sharing one recurrence over a common denominator.

    The j-th difference is s_j(i)/q(i) where every s_j satisfies the
    recurrence `numerator_coeffs` (with per-coordinate initial terms) and q
    satisfies `denominator_coeffs`. Both recurrences must be in minimal form
    (nonzero last coefficient).
    """

    numerator_coeffs: tuple[int, ...]
    numerator_inits: tuple[tuple[int, ...], ...]
    denominator_coeffs: tuple[int, ...]
    denominator_inits: tuple[int, ...]

    def __post_init__(self):
        if not self.numerator_coeffs or self.numerator_coeffs[-1] == 0:
            raise DescriptionError("numerator recurrence not in minimal form")
        if not self.denominator_coeffs or self.denominator_coeffs[-1] == 0:
            raise DescriptionError("denominator recurrence not in minimal form")
        r = len(self.numerator_coeffs)
        for inits in self.numerator_inits:
            if len(inits) != r:
                raise DescriptionError(f"numerator inits must have length {r}")
        if len(self.denominator_inits) != len(self.denominator_coeffs):
            raise DescriptionError("denominator inits must match the recurrence order")

    @property
    def arity(self) -> int:
        return len(self.numerator_inits)


Schema = Union[RationalFunctionSchema, LinearRecurrenceSchema]


def _poly_nonneg_from(s: Poly, start: int) -> int | None:
    """First i >= start with s(i) < 0, or None when s(i) >= 0 for all of them."""
    if ip.is_zero(s):
        return None
    if ip.eventual_sign(s) < 0:
        return max(start, ip.sign_stable_from(s))
    for i in range(start, ip.sign_stable_from(s) + 1):
        if ip.evaluate(s, i) < 0:
            return i
    return None


def _first_all_positive(polys: Sequence[Poly], start: int) -> int:
    """Smallest F >= start with s(i) > 0 for every listed s and every i >= F."""
    stable = start
    for s in polys:
        if ip.eventual_sign(s) != 1:
            raise DescriptionError("polynomial is not eventually positive")
        stable = max(stable, ip.sign_stable_from(s))
    out = start
    for i in range(start, stable + 1):
        if any(ip.evaluate(s, i) <= 0 for s in polys):
            out = i + 1
    return out


def _shared_nonzero_index(numerators: Sequence[Poly], start: int) -> int | None:
    """An i >= start where every numerator vanishes, or None."""
    live = [p for p in numerators if not ip.is_zero(p)]
    if not live:
        return start
    candidates = ip.integer_roots(live[0], lo=start)
    for i in candidates:
        if all(ip.evaluate(p, i) == 0 for p in live):
            return i
    return None


@dataclass(frozen=True)
class ProbeSequence:
    """A sequence w_i -> limit inside the unit cube, i running from first_index.

    Frozen definition data plus derived certificates computed during
    validation: `decrease_from` is an index from which on the distance to
    the limit strictly decreases; recurrence schemas additionally carry the
    growth certificates for the denominator and each numerator coordinate
    (None for identically zero coordinates).
    """

    limit: Point
    schema: Schema
    first_index: int
    decrease_from: int = field(default=0, compare=False, repr=False)
    den_cert: lr.GrowthCert | None = field(default=None, compare=False, repr=False)
    num_certs: tuple[lr.GrowthCert | None, ...] = field(
        default=(), compare=False, repr=False
    )

    def __post_init__(self):
        if not in_unit_cube(self.limit):
            raise DescriptionError(f"limit {self.limit} is outside the unit cube")
        if self.schema.arity != len(self.limit):
            raise DescriptionError("schema arity does not match the limit point")
        if isinstance(self.schema, RationalFunctionSchema):
            self._validate_rational_function()
        else:
            self._validate_recurrence()

    # -- schema (a): rational functions of the index ----------------------

    def _validate_rational_function(self):
        sch: RationalFunctionSchema = self.schema
        i0 = self.first_index
        for j, (p, q) in enumerate(zip(sch.numerators, sch.denominators)):
            bad = ip.integer_roots(q, lo=i0)
            if bad:
                raise DescriptionError(
                    f"coordinate {j}: denominator vanishes at i={bad[0]}"
                )
            if not ip.is_zero(p) and ip.degree(p) >= ip.degree(q):
                raise DescriptionError(
                    f"coordinate {j}: difference does not tend to zero"
                )
            # 0 <= x_j + p/q <= 1 for all i >= i0, via sign-cleared polynomials.
            a, b = self.limit[j].numerator, self.limit[j].denominator
            low = ip.mul(ip.add(ip.scale(q, a), ip.scale(p, b)), q)
            high = ip.mul(ip.sub(ip.scale(q, b - a), ip.scale(p, b)), q)
            for name, s in (("below 0", low), ("above 1", high)):
                bad_i = _poly_nonneg_from(s, i0)
                if bad_i is not None:
                    raise DescriptionError(
                        f"coordinate {j} leaves the cube ({name}) at i={bad_i}"
                    )
        hit = _shared_nonzero_index(sch.numerators, i0)
        if hit is not None:
            raise DescriptionError(f"sequence equals its limit at i={hit}")
        # Distance decrease: with N/D = sum_j p_j^2 prod_{k!=j} q_k^2 / prod q_j^2,
        # require N(i) D(i+1) - N(i+1) D(i) eventually positive.
        dist_num, dist_den = self._distance_polys()
        gap = ip.sub(
            ip.mul(dist_num, ip.shift(dist_den)), ip.mul(ip.shift(dist_num), dist_den)
        )
        if ip.eventual_sign(gap) != 1:
            raise DescriptionError("distance to the limit is not eventually decreasing")
        start = _first_all_positive([gap, dist_den, ip.shift(dist_den)], self.first_index)
        object.__setattr__(self, "decrease_from", start)

    def _distance_polys(self) -> tuple[Poly, Poly]:
        sch: RationalFunctionSchema = self.schema
        den = (1,)
        for q in sch.denominators:
            den = ip.mul(den, ip.mul(q, q))
        num = ()
        for j, p in enumerate(sch.numerators):
            term = ip.mul(p, p)
            for k, q in enumerate(sch.denominators):
                if k != j:
                    term = ip.mul(term, ip.mul(q, q))
            num = ip.add(num, term)
        return num, den

    # -- schema (b): shared linear recurrence ------------------------------

    def _validate_recurrence(self):
        sch: LinearRecurrenceSchema = self.schema
        i0 = self.first_index
        den_cert = lr.find_growth(sch.denominator_coeffs, sch.denominator_inits, i0)
        if den_cert is None or den_cert.sign != 1:
            raise DescriptionError(
                "no growth certificate for an eventually positive denominator"
            )
        num_certs: list[lr.GrowthCert | None] = []
        for j, inits in enumerate(sch.numerator_inits):
            if all(v == 0 for v in inits):
                num_certs.append(None)
                continue
            cert = lr.find_growth(sch.numerator_coeffs, inits, i0)
            if cert is None:
                raise DescriptionError(
                    f"coordinate {j}: no growth certificate for the numerators"
                )
            num_certs.append(cert)
        live = [c for c in num_certs if c is not None]
        if not live:
            raise DescriptionError("sequence is identically equal to its limit")
        hi_num = max(c.hi for c in live)
        if hi_num >= den_cert.lo:
            raise DescriptionError(
                "cannot certify convergence: numerator ratios reach denominator ratios"
            )
        start = max([den_cert.start] + [c.start for c in live])
        dens = lr.unroll(
            sch.denominator_coeffs, sch.denominator_inits, start - i0 + 1
        )
        if any(d == 0 for d in dens):
            raise DescriptionError("denominator sequence hits zero")
        nums = [
            lr.unroll(sch.numerator_coeffs, inits, start - i0 + 1)
            for inits in sch.numerator_inits
        ]
        for k in range(start - i0 + 1):
            if all(col[k] == 0 for col in nums):
                raise DescriptionError(f"sequence equals its limit at i={i0 + k}")
        # Cube containment, coordinate by coordinate: an exact prefix scan up
        # to an index past which the certified ratio bounds take over.
        for j, cert in enumerate(num_certs):
            self._check_recurrence_coordinate(j, cert, den_cert, start, nums[j], dens)
        object.__setattr__(self, "decrease_from", start)
        object.__setattr__(self, "den_cert", den_cert)
        object.__setattr__(self, "num_certs", tuple(num_certs))

    def _check_recurrence_coordinate(self, j, cert, den_cert, start, num_prefix, den_prefix):
        sch: LinearRecurrenceSchema = self.schema
        i0 = self.first_index
        x = self.limit[j]
        if cert is None:
            return
        margin = min(x, 1 - x)
        shrink = cert.hi / den_cert.lo
        if margin > 0:
            # Find I >= start with |s_j(i)| / q(i) <= margin for all i >= I.
            bound = Fraction(abs(num_prefix[start - i0]), abs(den_prefix[start - i0]))
            horizon = start
            while bound > margin:
                bound *= shrink
                horizon += 1
                if horizon - start > MEMBERSHIP_HORIZON:
                    raise DescriptionError(
                        f"coordinate {j}: cube margin certificate out of reach"
                    )
        else:
            # The limit coordinate sits on the cube boundary: the difference
            # must keep the inward sign, and its magnitude must stay within
            # the denominator. Both follow for i >= start from base cases
            # there plus the certified ratio gap.
            inward = 1 if x == 0 else -1
            if cert.sign != inward:
                raise DescriptionError(
                    f"coordinate {j}: sequence leaves the cube across the boundary"
                )
            if abs(num_prefix[start - i0]) > abs(den_prefix[start - i0]):
                raise DescriptionError(f"coordinate {j} leaves the cube at i={start}")
            horizon = start
        need = horizon - i0 + 1
        nums = lr.unroll(sch.numerator_coeffs, sch.numerator_inits[j], need)
        dens = lr.unroll(sch.denominator_coeffs, sch.denominator_inits, need)
        for k in range(need):
            value = x + Fraction(nums[k], dens[k])
            if not 0 <= value <= 1:
                raise DescriptionError(f"coordinate {j} leaves the cube at i={i0 + k}")

    # -- shared interface --------------------------------------------------

    @property
    def arity(self) -> int:
        return len(self.limit)

    def point_at(self, i: int) -> Point:
        """The exact term w_i."""
        if i < self.first_index:
            raise ValueError(f"sequence starts at i={self.first_index}")
        if isinstance(self.schema, RationalFunctionSchema):
            return tuple(
                x + Fraction(ip.evaluate(p, i), ip.evaluate(q, i))
                for x, p, q in zip(
                    self.limit, self.schema.numerators, self.schema.denominators
                )
            )
        count = i - self.first_index + 1
        den = lr.unroll(
            self.schema.denominator_coeffs, self.schema.denominator_inits, count
        )[-1]
        return tuple(
            x + Fraction(lr.unroll(self.schema.numerator_coeffs, inits, count)[-1], den)
            for x, inits in zip(self.limit, self.schema.numerator_inits)
        )

    def stream(self) -> Iterator[tuple[int, Point]]:
        """Yield (i, w_i) from first_index on, with incremental recurrences."""
        if isinstance(self.schema, RationalFunctionSchema):
            i = self.first_index
            while True:
                yield i, self.point_at(i)
                i += 1
        else:
            sch: LinearRecurrenceSchema = self.schema
            num_state = [list(inits) for inits in sch.numerator_inits]
            den_state = list(sch.denominator_inits)
            i = self.first_index
            while True:
                yield i, tuple(
                    x + Fraction(st[0], den_state[0])
                    for x, st in zip(self.limit, num_state)
                )
                for coeffs, state in [(sch.numerator_coeffs, s) for s in num_state] + [
                    (sch.denominator_coeffs, den_state)
                ]:
                    nxt = sum(coeffs[k] * state[-1 - k] for k in range(len(coeffs)))
                    state.append(nxt)
                    state.pop(0)
                i += 1

    def membership(self, t: Point) -> Trivalent:
        """Is t the limit or a term of this sequence? Exact where decidable."""
        if t == self.limit:
            return Trivalent.YES
        if not in_unit_cube(t):
            return Trivalent.NO
        diff = sub(t, self.limit)
        if isinstance(self.schema, RationalFunctionSchema):
            return self._membership_rational_function(diff)
        return self._membership_recurrence(diff)

    def _membership_rational_function(self, diff) -> Trivalent:
        sch: RationalFunctionSchema = self.schema
        residuals = []
        for d, p, q in zip(diff, sch.numerators, sch.denominators):
            residuals.append(ip.sub(ip.scale(p, d.denominator), ip.scale(q, d.numerator)))
        live = [r for r in residuals if not ip.is_zero(r)]
        if not live:
            # Constant sequence; construction already ruled this out.
            return Trivalent.NO
        try:
            candidates = ip.integer_roots(live[0], lo=self.first_index)
        except ip.HorizonExhausted:
            return Trivalent.UNKNOWN
        for i in candidates:
            if all(ip.evaluate(r, i) == 0 for r in residuals):
                return Trivalent.YES
        return Trivalent.NO

    def _membership_recurrence(self, diff) -> Trivalent:
        t = tuple(x + d for x, d in zip(self.limit, diff))
        target = norm_sq(diff)
        for i, w in self.stream():
            if w == t:
                return Trivalent.YES
            if i >= self.decrease_from and norm_sq(sub(w, self.limit)) < target:
                # Distances shrink strictly from decrease_from on, so no
                # later term can reach t again.
                return Trivalent.NO
            if i - self.first_index > MEMBERSHIP_HORIZON:
                return Trivalent.UNKNOWN


@dataclass(frozen=True)
class EnumeratedPoint:
    """A concrete member of a described set, with its provenance.

    `source` is "polytope" or "sequence" with the part's index; `term` is the
    sequence index i, or None for a polytope vertex or a sequence limit.
    """

    point: Point
    source: str
    part: int
    term: int | None = None


@dataclass(frozen=True)
class ClosedSetDesc:
    """A nonempty closed subset of [0,1]^n: polytopes and probe sequences."""

    arity: int
    polyparts: tuple[Polytope, ...] = ()
    sequences: tuple[ProbeSequence, ...] = ()

    def __post_init__(self):
        if self.arity < 1:
            raise DescriptionError("arity must be at least 1")
        if not self.polyparts and not self.sequences:
            raise DescriptionError("empty set description")
        for part in self.polyparts:
            if part.ambient != self.arity:
                raise DescriptionError("polytope ambient dimension mismatch")
            if not all(in_unit_cube(v) for v in part.vertices):
                raise DescriptionError("polytope leaves the unit cube")
        for seq in self.sequences:
            if seq.arity != self.arity:
                raise DescriptionError("sequence arity mismatch")

    def membership(self, t: Point) -> Trivalent:
        """Three-valued membership: Unknown only from horizon-capped scans."""
        if len(t) != self.arity:
            raise DescriptionError("point arity mismatch")
        unknown = False
        for part in self.polyparts:
            if part.contains(t):
                return Trivalent.YES
        for seq in self.sequences:
            verdict = seq.membership(t)
            if verdict is Trivalent.YES:
                return Trivalent.YES
            if verdict is Trivalent.UNKNOWN:
                unknown = True
        return Trivalent.UNKNOWN if unknown else Trivalent.NO

    def enumerate_points(self, budget: int) -> tuple[EnumeratedPoint, ...]:
        """Deterministic sample: polytope vertices, then per-sequence points.

        Each sequence contributes its limit followed by the `budget` terms
        w_{i0}, ..., w_{i0+budget-1}.
        """
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        out = []
        for idx, part in enumerate(self.polyparts):
            for v in part.vertices:
                out.append(EnumeratedPoint(v, "polytope", idx))
        for idx, seq in enumerate(self.sequences):
            out.append(EnumeratedPoint(seq.limit, "sequence", idx))
            for i in range(seq.first_index, seq.first_index + budget):
                out.append(EnumeratedPoint(seq.point_at(i), "sequence", idx, i))
        return tuple(out)


def _maximal_parts(parts: list[Polytope]) -> tuple[Polytope, ...]:
    uniq: list[Polytope] = []
    for part in parts:
        if any(part.vertices == other.vertices for other in uniq):
            continue
        uniq.append(part)
    keep = []
    for part in uniq:
        if any(
            other is not part and other.contains_polytope(part) for other in uniq
        ):
            continue
        keep.append(part)
    keep.sort(key=lambda p: (p.dim, p.vertices))
    return tuple(keep)


def zero_locus_of_basis(fs: Sequence[PLFunction]) -> ZeroLocus:
    """Common zero locus of finitely many functions, as a polytope union.

    Intersecting zerosets pairwise keeps the representation exact; an empty
    intersection yields an empty locus.
    """
    if not fs:
        raise ValueError("need at least one function")
    arity = fs[0].arity
    if any(f.arity != arity for f in fs):
        raise ValueError("mixed arities")
    parts = list(zeroset(fs[0]).parts)
    for f in fs[1:]:
        other = zeroset(f).parts
        parts = [
            inter
            for a in parts
            for b in other
            if (inter := a.intersect(b)) is not None
        ]
    return ZeroLocus(arity, _maximal_parts(parts))
