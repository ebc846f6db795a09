"""Integer polynomial helpers: ring laws, sign tails, root hunting."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import mvworkbench.intpoly as ip

coeff_lists = st.lists(st.integers(-9, 9), max_size=5)


def brute_eval(coeffs, x):
    return sum(c * x**k for k, c in enumerate(coeffs))


@settings(derandomize=True, max_examples=150)
@given(coeff_lists, coeff_lists, st.integers(-8, 8))
def test_ring_operations_match_brute_evaluation(a, b, x):
    pa, pb = ip.poly(a), ip.poly(b)
    assert ip.evaluate(ip.add(pa, pb), x) == brute_eval(a, x) + brute_eval(b, x)
    assert ip.evaluate(ip.mul(pa, pb), x) == brute_eval(a, x) * brute_eval(b, x)
    assert ip.evaluate(ip.sub(pa, pb), x) == brute_eval(a, x) - brute_eval(b, x)
    assert ip.evaluate(ip.neg(pa), x) == -brute_eval(a, x)


def test_poly_normalizes_trailing_zeros():
    assert ip.poly([1, 2, 0, 0]) == ip.poly([1, 2])
    assert ip.is_zero(ip.poly([0, 0]))
    assert ip.degree(ip.poly([5])) == 0
    assert ip.degree(ip.poly([0, 0, 3])) == 2
    assert ip.leading(ip.poly([0, 0, 3])) == 3


def test_compose_linear_and_shift():
    p = ip.poly([1, 2, 1])  # (x+1)^2
    shifted = ip.shift(p)  # p(x+1) = (x+2)^2
    for x in range(-3, 4):
        assert ip.evaluate(shifted, x) == (x + 2) ** 2
    q = ip.compose_linear(p, 2, -1)  # p(2x-1) = (2x)^2
    for x in range(-3, 4):
        assert ip.evaluate(q, x) == 4 * x * x


def test_eventual_sign_and_stability():
    p = ip.poly([-100, 0, 1])  # x^2 - 100
    assert ip.eventual_sign(p) == 1
    i0 = ip.sign_stable_from(p)
    for i in range(i0, i0 + 50):
        assert ip.evaluate(p, i) > 0
    assert ip.eventual_sign(ip.poly([3, -1])) == -1
    assert ip.eventual_sign(ip.poly([])) == 0


@settings(derandomize=True, max_examples=100)
@given(coeff_lists)
def test_root_bound_really_bounds(coeffs):
    p = ip.poly(coeffs)
    if ip.is_zero(p):
        return
    b = ip.root_bound(p)
    for x in range(b + 1, b + 20):
        assert ip.evaluate(p, x) != 0
        assert ip.evaluate(p, -x) != 0


def test_integer_roots_against_scan():
    # (x-3)(x+5)x = x^3 + 2x^2 - 15x
    p = ip.poly([0, -15, 2, 1])
    assert sorted(ip.integer_roots(p)) == [-5, 0, 3]
    assert ip.integer_roots(p, lo=1) == [3]
    assert ip.integer_roots(ip.poly([1])) == []


def test_rational_root_transcript_rules_out_irrationals():
    # x^2 - 2 and the Pell polynomial x^2 - 2x - 1 have no rational roots;
    # the transcript must show every candidate evaluated to a nonzero value
    for coeffs in ([-2, 0, 1], [-1, -2, 1]):
        p = ip.poly(coeffs)
        roots, transcript = ip.rational_root_transcript(p)
        assert roots == []
        assert transcript
        for cand, val in transcript:
            assert ip.evaluate(p, cand) == val
            assert val != 0


def test_rational_root_transcript_finds_rationals():
    # (2x-1)(x+3) = 2x^2 + 5x - 3
    roots, _ = ip.rational_root_transcript(ip.poly([-3, 5, 2]))
    assert Fraction(1, 2) in roots and Fraction(-3) in roots


def test_first_index_with_sign():
    p = ip.poly([-10, 1])  # x - 10
    assert ip.first_index_with_sign(p, 1, 0) == 11
    assert ip.first_index_with_sign(p, -1, 0) == 0
    assert ip.first_index_with_sign(ip.poly([]), 1, 0) is None


def test_first_index_with_sign_respects_start():
    p = ip.poly([0, 1])
    assert ip.first_index_with_sign(p, 1, 5) == 5


def test_horizon_exhausted_is_an_exception():
    assert issubclass(ip.HorizonExhausted, Exception)


def test_scale():
    assert ip.evaluate(ip.scale(ip.poly([1, 1]), 3), 4) == 15
    with pytest.raises(TypeError):
        ip.poly([Fraction(1, 2)])
