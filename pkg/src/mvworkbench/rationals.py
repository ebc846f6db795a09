"""Rational scalar and point helpers.

The whole workbench computes over fractions.Fraction; floating point never
enters any verdict. Points and vectors are plain tuples of Fraction. For hot
loops a point is "scaled": represented by integer numerators over one common
positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Tuple

Q = Fraction
Point = Tuple[Fraction, ...]
Vector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def q(num, den=1) -> Fraction:
    """Shorthand constructor, q(1, 3) == Fraction(1, 3)."""
    return Fraction(num, den)


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or 'p' with optional sign; raises ValueError on junk."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "/" in s:
        num, _, den = s.partition("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    """Render as 'p/q', or 'p' when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_point(coords: Sequence) -> Point:
    return tuple(Fraction(c) for c in coords)


def format_point(p: Sequence[Fraction]) -> str:
    return "(" + ",".join(format_rational(c) for c in p) + ")"


def parse_point(text: str) -> Point:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"point literal must look like (a,b,...): {text!r}")
    body = s[1:-1].strip()
    if not body:
        raise ValueError("empty point literal")
    return tuple(parse_rational(part) for part in body.split(","))


def scale_point(p: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    """Return (numerators, den) with den > 0 and p[j] == numerators[j]/den."""
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    return tuple(c.numerator * (den // c.denominator) for c in p), den


def clear_denominators(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to integers by the denominator lcm (sign kept)."""
    den = 1
    for c in v:
        den = lcm(den, Fraction(c).denominator)
    return tuple(Fraction(c).numerator * (den // Fraction(c).denominator) for c in v)


def primitive_vector(v: Sequence) -> tuple[int, ...]:
    """Integer vector divided by the gcd of its entries; orientation kept.

    Zero vectors are returned unchanged. Inputs may be Fractions; they are
    cleared to integers first.
    """
    ints = clear_denominators([Fraction(c) for c in v])
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    if g <= 1:
        return ints
    return tuple(c // g for c in ints)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), start=ZERO)


def sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(a: Sequence[Fraction], t: Fraction) -> Vector:
    return tuple(x * t for x in a)


def norm_sq(a: Sequence[Fraction]) -> Fraction:
    return sum((x * x for x in a), start=ZERO)


def is_zero_vector(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


def in_unit_cube(p: Sequence[Fraction]) -> bool:
    return all(0 <= c <= 1 for c in p)
