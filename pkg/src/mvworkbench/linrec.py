"""Integer linear recurrences: closed forms, zero sets, growth certificates.

A recurrence of order r is stored as coefficients (a_1, ..., a_r) meaning
s(i+r) = a_1*s(i+r-1) + ... + a_r*s(i), with a_r != 0 (minimal form). Probe
sequences built on recurrences need three exact services:

  * dominant-root analysis of order <= 2 recurrences over Q(sqrt(disc)),
    which classifies the limit of normalized term vectors;
  * the exact zero set of an order <= 2 scalar sequence, for deciding how
    often a sequence meets a ray;
  * self-checking growth certificates, proved by ratio-interval induction,
    which pin the sign and the ratio s(i+1)/s(i) of a tail into a rational
    interval and make later scans terminate.

Quadratic irrationalities are represented exactly by `Surd` (a + b*sqrt(d)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

ZERO_SCAN_CAP = 10_000


def sign(x) -> int:
    return (x > 0) - (x < 0)


def unroll(coeffs: Sequence[int], inits: Sequence[int], count: int) -> list[int]:
    """First `count` terms of the recurrence, starting at the inits."""
    r = len(coeffs)
    if len(inits) != r:
        raise ValueError(f"order {r} recurrence needs {r} initial terms")
    terms = list(inits)
    while len(terms) < count:
        nxt = sum(coeffs[k] * terms[-1 - k] for k in range(r))
        terms.append(nxt)
    return terms[:count]


def char_poly(coeffs: Sequence[int]) -> tuple[int, ...]:
    """Characteristic polynomial x^r - a_1 x^(r-1) - ... - a_r, ascending."""
    r = len(coeffs)
    return tuple(-coeffs[r - 1 - k] for k in range(r)) + (1,)


class Surd:
    """Exact real number a + b*sqrt(d) with rational a, b and integer d >= 0.

    Normalized so that d == 0 exactly when the value is rational (square d
    is folded into the rational part). Two surds mix only when their
    irrational parts live in the same quadratic field.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        if d < 0:
            raise ValueError("negative radicand")
        if b == 0:
            d = 0
        elif d == 0:
            b = Fraction(0)
        else:
            root = isqrt(d)
            if root * root == d:
                a += b * root
                b = Fraction(0)
                d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, *_):
        raise AttributeError("Surd is immutable")

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            return other
        return Surd(other)

    def _joint_d(self, other: "Surd") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise ValueError(f"mixed radicands {self.d} and {other.d}")

    def __add__(self, other):
        other = self._coerce(other)
        return Surd(self.a + other.a, self.b + other.b, self._joint_d(other))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        d = self._joint_d(other)
        cross = self.b * other.b
        return Surd(
            self.a * other.a + (cross * d if cross else 0),
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("surd division by zero")
        if other.b == 0:
            return Surd(self.a / other.a, self.b / other.a, self.d)
        norm = other.a * other.a - other.b * other.b * other.d
        conj = Surd(other.a, -other.b, other.d)
        # norm == 0 would force sqrt(d) rational, excluded by normalization
        return (self * conj) / Surd(norm)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return Surd(1) / self ** (-k)
        out = Surd(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.d == 0

    def as_fraction(self) -> Fraction:
        if self.d != 0:
            raise ValueError(f"{self!r} is irrational")
        return self.a

    def sign(self) -> int:
        if self.b == 0:
            return sign(self.a)
        if self.a == 0:
            return sign(self.b)
        gap = self.a * self.a - self.b * self.b * self.d
        if gap == 0:
            return 0
        return sign(self.a) if gap > 0 else sign(self.b)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
            return (self - other).is_zero()
        except (ValueError, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __repr__(self):
        if self.d == 0:
            return f"Surd({self.a})"
        return f"Surd({self.a} + {self.b}*sqrt({self.d}))"


@dataclass(frozen=True)
class DirectionData:
    """Dominant-root analysis of coordinate sequences sharing one recurrence.

    For status "ok": every coordinate sequence s_j(k) grows like
    alpha_j * lam^k with lam > 0 the dominant characteristic root, so the
    normalized coordinate vectors converge to alpha/|alpha|. The alpha vector
    is reported as integer pairs (u_j, v_j) meaning alpha_j is proportional,
    with one common positive factor, to u_j + v_j*sqrt(disc); when disc is a
    perfect square the pairs are already folded (v_j == 0).

    Other statuses: "complex" (no real dominant root), "tied" (two roots of
    equal magnitude), "alternating" (negative dominant root), "degenerate"
    (the dominant component of every coordinate vanishes and no usable
    subdominant direction exists).
    """

    status: str
    disc: int
    square_free_part: bool
    char: tuple[int, ...]
    alpha_pairs: tuple[tuple[Fraction, Fraction], ...]


def direction_data(a1: int, a2: int, init_pairs: Sequence[tuple[int, int]]) -> DirectionData:
    """Analyze s_j(k+2) = a1*s_j(k+1) + a2*s_j(k) with inits (s_j(0), s_j(1))."""
    if a2 == 0:
        raise ValueError("order-2 recurrence not in minimal form (a2 == 0)")
    disc = a1 * a1 + 4 * a2
    cp = char_poly((a1, a2))
    if disc < 0:
        return DirectionData("complex", disc, False, cp, ())
    root = isqrt(disc)
    perfect = root * root == disc

    if disc == 0:
        # Repeated root lam = a1/2; s(k) = (A + B k) lam^k.
        lam = Fraction(a1, 2)
        if lam < 0:
            return DirectionData("alternating", disc, True, cp, ())
        bs = [Fraction(s1) / lam - s0 for s0, s1 in init_pairs]
        if any(b != 0 for b in bs):
            vec = bs
        else:
            vec = [Fraction(s0) for s0, _ in init_pairs]
        pairs = tuple((v, Fraction(0)) for v in vec)
        return DirectionData("ok", disc, True, cp, pairs)

    if a1 == 0:
        # Roots +-sqrt(a2): equal magnitude, no single dominant direction.
        return DirectionData("tied", disc, not perfect, cp, ())

    if not perfect:
        if a1 < 0:
            # Dominant root (a1 - sqrt(disc))/2 is negative.
            return DirectionData("alternating", disc, True, cp, ())
        # alpha_j is proportional (common positive factor) to
        # disc*s0 + (2 s1 - a1 s0) sqrt(disc).
        pairs = tuple(
            (Fraction(disc * s0), Fraction(2 * s1 - a1 * s0)) for s0, s1 in init_pairs
        )
        if all(u == 0 and v == 0 for u, v in pairs):
            return DirectionData("degenerate", disc, True, cp, ())
        return DirectionData("ok", disc, True, cp, pairs)

    # Rational roots lam = (a1+root)/2, mu = (a1-root)/2, |lam| > |mu| iff a1 > 0.
    lam = Fraction(a1 + root, 2)
    mu = Fraction(a1 - root, 2)
    if abs(lam) < abs(mu):
        lam, mu = mu, lam
    if abs(lam) == abs(mu):
        return DirectionData("tied", disc, False, cp, ())
    if lam < 0:
        return DirectionData("alternating", disc, False, cp, ())
    alphas = [(Fraction(s1) - mu * s0) / (lam - mu) for s0, s1 in init_pairs]
    if all(a == 0 for a in alphas):
        # Every coordinate lives in the subdominant eigenspace.
        if mu <= 0:
            return DirectionData("degenerate", disc, False, cp, ())
        betas = [(lam * s0 - Fraction(s1)) / (lam - mu) for s0, s1 in init_pairs]
        alphas = betas
    pairs = tuple((a, Fraction(0)) for a in alphas)
    return DirectionData("ok", disc, False, cp, pairs)


@dataclass(frozen=True)
class ZeroSet:
    """Zero set of a scalar sequence, as {k >= 0 : s(k) == 0}.

    kind "all": identically zero. kind "finite": exactly the listed k.
    kind "parity": all k with k % 2 == parity. kind "undetermined": the
    analysis gave up (complex roots or an exhausted magnitude scan).
    """

    kind: str
    ks: tuple[int, ...] = ()
    parity: int | None = None


def zeros_order2(a1: int, a2: int, z0: int, z1: int) -> ZeroSet:
    """Exact zero set of z(k+2) = a1*z(k+1) + a2*z(k), z(0)=z0, z(1)=z1."""
    if z0 == 0 and z1 == 0:
        return ZeroSet("all")
    if a2 == 0:
        raise ValueError("order-2 recurrence not in minimal form (a2 == 0)")
    disc = a1 * a1 + 4 * a2
    if disc < 0:
        return ZeroSet("undetermined")
    if disc == 0:
        lam = Fraction(a1, 2)
        alpha = Fraction(z0)
        beta = Fraction(z1) / lam - z0
        if beta == 0:
            return ZeroSet("finite", ())
        k = -alpha / beta
        if k.denominator == 1 and k >= 0:
            return ZeroSet("finite", (int(k),))
        return ZeroSet("finite", ())
    lam = Surd(Fraction(a1, 2), Fraction(1, 2), disc)
    mu = Surd(Fraction(a1, 2), Fraction(-1, 2), disc)
    denom = lam - mu
    big_a = (Surd(z1) - mu * z0) / denom
    big_b = (lam * Surd(z0) - Surd(z1)) / denom
    if big_a.is_zero() or big_b.is_zero():
        # Pure single-root sequence with a nonzero coefficient: never zero.
        return ZeroSet("finite", ())
    if a1 == 0:
        # lam = -mu, so z(k) = lam^k (A + (-1)^k B): zero on one parity at most.
        target = -(big_a / big_b)
        if target == Surd(1):
            return ZeroSet("parity", parity=0)
        if target == Surd(-1):
            return ZeroSet("parity", parity=1)
        return ZeroSet("finite", ())
    ratio = lam / mu
    target = -(big_b / big_a)
    growing = (ratio * ratio) > Surd(1)
    power = Surd(1)
    hits = []
    for k in range(ZERO_SCAN_CAP):
        if power == target:
            hits.append(k)
        mag_gap = (power * power - target * target).sign()
        if growing and mag_gap > 0:
            return ZeroSet("finite", tuple(hits))
        if not growing and mag_gap < 0:
            return ZeroSet("finite", tuple(hits))
        power = power * ratio
    return ZeroSet("undetermined")


def zeros_order1(a: int, z0: int) -> ZeroSet:
    if a == 0:
        raise ValueError("order-1 recurrence not in minimal form (a == 0)")
    if z0 == 0:
        return ZeroSet("all")
    return ZeroSet("finite", ())


@dataclass(frozen=True)
class GrowthCert:
    """Ratio-interval induction certificate for a recurrent integer sequence.

    Claims: for every index i >= start (absolute indexing), sign*s(i) > 0 and
    lo <= s(i+1)/s(i) <= hi, with 0 < lo <= hi. `verify_growth` checks the
    claim by exact induction, so a certificate never has to be trusted.
    """

    start: int
    sign: int
    lo: Fraction
    hi: Fraction


def ratio_interval_image(coeffs: Sequence[int], lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact bounds for a_1 + a_2/r_1 + a_3/(r_1 r_2) + ... over r_k in [lo, hi]."""
    if lo <= 0:
        raise ValueError("ratio interval must stay positive")
    mn = mx = Fraction(coeffs[0])
    prod_lo = Fraction(1)
    prod_hi = Fraction(1)
    for a in coeffs[1:]:
        prod_lo *= lo
        prod_hi *= hi
        if a >= 0:
            mn += Fraction(a) / prod_hi
            mx += Fraction(a) / prod_lo
        else:
            mn += Fraction(a) / prod_lo
            mx += Fraction(a) / prod_hi
    return mn, mx


def verify_growth(
    coeffs: Sequence[int], inits: Sequence[int], first_index: int, cert: GrowthCert
) -> bool:
    """Re-run the induction behind a growth certificate, exactly."""
    r = len(coeffs)
    if cert.lo <= 0 or cert.lo > cert.hi or cert.sign not in (-1, 1):
        return False
    if cert.start < first_index:
        return False
    offset = cert.start - first_index
    terms = unroll(coeffs, inits, offset + r + 1)
    seed = terms[offset : offset + r]
    if any(cert.sign * t <= 0 for t in seed):
        return False
    for m in range(len(seed) - 1):
        ratio = Fraction(seed[m + 1], seed[m])
        if not cert.lo <= ratio <= cert.hi:
            return False
    mn, mx = ratio_interval_image(coeffs, cert.lo, cert.hi)
    return cert.lo <= mn and mx <= cert.hi


def find_growth(
    coeffs: Sequence[int], inits: Sequence[int], first_index: int
) -> GrowthCert | None:
    """Search for a growth certificate; None when no tail stabilizes.

    The candidate interval is read off a window of unrolled ratios and then
    widened a few ways; every candidate is accepted only if `verify_growth`
    proves it, so the search heuristics cannot affect soundness.
    """
    r = len(coeffs)
    if coeffs[-1] == 0:
        return None
    window = max(10, 3 * r)
    for total in (48, 96, 192, 384):
        terms = unroll(coeffs, inits, total)
        tail = terms[total - window :]
        sgn = sign(tail[-1])
        if sgn == 0 or any(sign(t) != sgn for t in tail):
            continue
        ratios = [Fraction(tail[m + 1], tail[m]) for m in range(window - 1)]
        if any(q <= 0 for q in ratios):
            continue
        lo0, hi0 = min(ratios), max(ratios)
        spread = hi0 - lo0
        for pad in (spread, spread / 4, spread / 64, hi0 / 10**6, Fraction(0)):
            lo = (lo0 - pad).limit_denominator(10**9)
            hi = (hi0 + pad).limit_denominator(10**9)
            lo = min(lo, lo0)
            hi = max(hi, hi0)
            if lo <= 0:
                continue
            cert = GrowthCert(first_index + (total - window), sgn, lo, hi)
            if verify_growth(coeffs, inits, first_index, cert):
                return cert
    return None
