"""Integer polynomials in one variable: exact sign and root bookkeeping.

Polynomials are tuples of integer coefficients in ascending order of degree,
normalized so the last entry is nonzero (the zero polynomial is the empty
tuple). These are the workhorse for analyzing probe sequences whose
coordinate differences are ratios of integer polynomials: everything reduces
to "what is the sign of p(i) for large integers i, from which index on, and
where exactly does p have integer roots".
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

Poly = tuple[int, ...]

ROOT_SCAN_HORIZON = 10**6


class HorizonExhausted(Exception):
    """An exact scan would exceed the configured horizon."""


def poly(coeffs: Iterable[int]) -> Poly:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    for c in out:
        if not isinstance(c, int):
            raise TypeError(f"integer coefficient expected, got {c!r}")
    return tuple(out)


def is_zero(p: Poly) -> bool:
    return not p


def degree(p: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(p) - 1


def leading(p: Poly) -> int:
    return p[-1] if p else 0


def evaluate(p: Poly, x):
    out = 0
    for c in reversed(p):
        out = out * x + c
    return out


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def scale(p: Poly, k: int) -> Poly:
    return poly(c * k for c in p)


def compose_linear(p: Poly, a: int, b: int) -> Poly:
    """p(a*x + b)."""
    out: Poly = ()
    for c in reversed(p):
        out = add(mul(out, (b, a)), (c,))
    return out


def shift(p: Poly) -> Poly:
    """p(x + 1)."""
    return compose_linear(p, 1, 1)


def eventual_sign(p: Poly) -> int:
    """Sign of p(i) for all sufficiently large integers i."""
    lead = leading(p)
    return (lead > 0) - (lead < 0)


def root_bound(p: Poly) -> int:
    """Cauchy bound: every real root r has |r| <= the returned integer."""
    if is_zero(p):
        raise ValueError("zero polynomial has no root bound")
    lead = abs(p[-1])
    biggest = max(abs(c) for c in p[:-1]) if len(p) > 1 else 0
    # 1 + max|a_k| / |a_d|, rounded up
    return 1 + -(-biggest // lead)


def sign_stable_from(p: Poly) -> int:
    """Smallest certified N with sign(p(i)) = eventual_sign(p) for all i >= N."""
    if is_zero(p):
        return 0
    return root_bound(p) + 1


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def integer_roots(p: Poly, lo: int | None = None) -> list[int]:
    """All integer roots (optionally only those >= lo), exactly.

    Roots of the nonzero part divide the trailing coefficient; a zero
    trailing coefficient contributes the root 0. Raises HorizonExhausted when
    the divisor enumeration would be unreasonably large.
    """
    if is_zero(p):
        raise ValueError("every integer is a root of the zero polynomial")
    q = list(p)
    roots = set()
    while q[0] == 0:
        roots.add(0)
        q.pop(0)
    trailing = abs(q[0])
    if trailing > 10**14 and degree(tuple(q)) > 0:
        bound = root_bound(tuple(q))
        if bound > ROOT_SCAN_HORIZON:
            raise HorizonExhausted(
                f"integer-root search: trailing coefficient {trailing} too rich"
            )
        for i in range(-bound, bound + 1):
            if evaluate(tuple(q), i) == 0:
                roots.add(i)
    else:
        for d in _divisors(trailing):
            for cand in (d, -d):
                if evaluate(tuple(q), cand) == 0:
                    roots.add(cand)
    out = sorted(roots)
    if lo is not None:
        out = [r for r in out if r >= lo]
    return out


def rational_root_transcript(p: Poly) -> tuple[list[Fraction], list[tuple[Fraction, Fraction]]]:
    """Rational root test: (roots found, full candidate/value transcript).

    Candidates are +-(divisor of trailing)/(divisor of leading) in lowest
    terms; the transcript records every candidate with its exact value so a
    'no rational root' claim is independently checkable.
    """
    if is_zero(p):
        raise ValueError("zero polynomial")
    q = list(p)
    roots: list[Fraction] = []
    transcript: list[tuple[Fraction, Fraction]] = []
    if q[0] == 0:
        roots.append(Fraction(0))
        transcript.append((Fraction(0), Fraction(0)))
        while q[0] == 0:
            q.pop(0)
    seen = set()
    for num in _divisors(q[0]) or [0]:
        for den in _divisors(q[-1]):
            for s in (1, -1):
                cand = Fraction(s * num, den)
                if cand in seen:
                    continue
                seen.add(cand)
                val = evaluate(tuple(q), cand)
                transcript.append((cand, val))
                if val == 0:
                    roots.append(cand)
    transcript.sort()
    return sorted(roots), transcript


def first_index_with_sign(p: Poly, want: int, start: int) -> int | None:
    """Smallest integer i >= start with sign(p(i)) == want, or None."""
    if is_zero(p):
        return start if want == 0 else None
    stable = max(start, sign_stable_from(p))
    if stable - start > ROOT_SCAN_HORIZON:
        raise HorizonExhausted("sign scan range too large")
    for i in range(start, stable + 1):
        v = evaluate(p, i)
        if ((v > 0) - (v < 0)) == want:
            return i
    # Beyond the stability index the sign is eventual_sign, which the loop
    # already tested at i == stable.
    return None
