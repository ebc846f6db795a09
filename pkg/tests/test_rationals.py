"""Scalar and point helpers: parsing, formatting, primitive vectors."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mvworkbench.rationals import (
    as_point,
    clear_denominators,
    dot,
    format_point,
    format_rational,
    in_unit_cube,
    norm_sq,
    parse_point,
    parse_rational,
    primitive_vector,
    q,
    scale_point,
    sub,
)

F = Fraction


def test_parse_rational_forms():
    assert parse_rational("3/4") == F(3, 4)
    assert parse_rational("-3/4") == F(-3, 4)
    assert parse_rational("7") == F(7)
    assert parse_rational("0") == 0


@pytest.mark.parametrize("bad", ["", "1/", "/2", "1/0", "a", "1.5"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_canonical():
    assert format_rational(F(1, 2)) == "1/2"
    assert format_rational(F(4, 2)) == "2"
    assert format_rational(F(-1, 3)) == "-1/3"
    assert format_rational(F(0)) == "0"


@settings(derandomize=True, max_examples=200)
@given(st.fractions())
def test_format_parse_round_trip(x):
    assert parse_rational(format_rational(x)) == x


def test_point_round_trip():
    p = (F(1, 3), F(0), F(-2, 7))
    assert parse_point(format_point(p)) == p
    assert format_point(p) == "(1/3,0,-2/7)"


def test_parse_point_requires_parentheses():
    with pytest.raises(ValueError):
        parse_point("1,2")
    with pytest.raises(ValueError):
        parse_point("()")
    # interior whitespace is tolerated on input; output is always compact
    assert parse_point("(1, 2)") == (F(1), F(2))


def test_scale_point_shared_denominator():
    nums, den = scale_point((F(1, 2), F(1, 3)))
    assert den > 0
    assert (F(nums[0], den), F(nums[1], den)) == (F(1, 2), F(1, 3))


def test_clear_denominators_keeps_direction():
    v = (F(2, 3), F(-1, 6))
    ints = clear_denominators(v)
    assert all(isinstance(c, int) for c in ints)
    # same ray: cross products vanish
    assert ints[0] * v[1] == ints[1] * v[0]


@settings(derandomize=True, max_examples=200)
@given(st.lists(st.fractions(), min_size=1, max_size=4))
def test_primitive_vector_is_primitive_and_parallel(v):
    from math import gcd

    p = primitive_vector(v)
    if all(c == 0 for c in v):
        assert all(c == 0 for c in p)
        return
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    assert g == 1
    for a, b in zip(p, v):
        for c, d in zip(p, v):
            assert a * d == c * b


def test_vector_arithmetic():
    a, b = (F(1), F(2)), (F(3), F(5))
    assert dot(a, b) == 13
    assert sub(b, a) == (2, 3)
    assert norm_sq(sub(b, a)) == 13


def test_in_unit_cube_boundary():
    assert in_unit_cube((F(0), F(1)))
    assert not in_unit_cube((F(1), F(3, 2)))
    assert not in_unit_cube((F(-1, 100),))


def test_q_and_as_point():
    assert q(1, 2) == F(1, 2)
    assert as_point([1, F(1, 2)]) == (F(1), F(1, 2))
