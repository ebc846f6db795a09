"""The PL calculus: compilation, MV operations, zero sets, derivatives.

Everything here is exact. Random formulas come from the shared generator
and random points carry small denominators so the Fraction arithmetic in
the reference evaluations stays fast.
"""

from fractions import Fraction

import pytest

from mvworkbench.formulas import ArityError, evaluate, parse
from mvworkbench.mcnaughton import (
    AffineMap,
    CalculusError,
    ConstructionError,
    PLFunction,
    cell_exit_parameter,
    compile_formula,
    constant_function,
    coordinate_function,
    directional_derivative,
    mv_implies,
    mv_max,
    mv_min,
    mv_neg,
    mv_oplus,
    mv_otimes,
    pl_equal,
    pl_leq,
    pl_violation,
    point_zero_function,
    ramp_function,
    segment_zero_function,
    truncated_multiple,
    validate,
    zeroset,
)
from mvworkbench.polytopes import Polytope
from mvworkbench.simplicial import Complex, Simplex
from support import random_cube_point, random_term

F = Fraction


def compiled(text, n):
    return compile_formula(parse(text, n), n)


# --- compilation ------------------------------------------------------------------


def test_compile_double_matches_known_cells():
    f = compiled("(x1 + x1)", 1)
    got = {(c.vertices, (m.coeffs, m.const)) for c, m in zip(f.complex.cells, f.pieces)}
    assert got == {
        ((( F(0),), (F(1, 2),)), ((2,), 0)),
        (((F(1, 2),), (F(1),)), ((0,), 1)),
    }


def test_compile_agrees_with_evaluation(rng):
    for _ in range(12):
        n = rng.randint(1, 3)
        term = parse(random_term(rng, 5, n), n)
        f = compile_formula(term, n)
        validate(f)
        for _ in range(300):
            p = random_cube_point(rng, n)
            assert f.value(p) == evaluate(term, p)


def test_compile_rejects_excess_variables():
    with pytest.raises(ArityError):
        compiled("x3", 2)


def test_every_piece_has_integer_coefficients(rng):
    for _ in range(10):
        f = compiled(random_term(rng, 5, 2), 2)
        g = compiled(random_term(rng, 5, 2), 2)
        for combined in (mv_oplus(f, g), mv_otimes(f, g), mv_min(f, g),
                         mv_max(f, g), mv_implies(f, g), mv_neg(f),
                         truncated_multiple(f, 3)):
            for m in combined.pieces:
                assert all(isinstance(c, int) for c in m.coeffs)
                assert isinstance(m.const, int)


# --- MV algebra laws as exact function identities ----------------------------------


def test_mv_axioms_exactly(rng):
    for _ in range(6):
        f = compiled(random_term(rng, 4, 2), 2)
        g = compiled(random_term(rng, 4, 2), 2)
        h = compiled(random_term(rng, 4, 2), 2)
        assert pl_equal(mv_oplus(f, g), mv_oplus(g, f))
        assert pl_equal(mv_oplus(mv_oplus(f, g), h), mv_oplus(f, mv_oplus(g, h)))
        assert pl_equal(mv_neg(mv_neg(f)), f)
        lhs = mv_oplus(mv_neg(mv_oplus(mv_neg(f), g)), g)
        rhs = mv_oplus(mv_neg(mv_oplus(mv_neg(g), f)), f)
        assert pl_equal(lhs, rhs)
        assert pl_equal(mv_oplus(f, mv_neg(f)), constant_function(2, 1))


def test_min_max_against_otimes_encoding(rng):
    f = compiled(random_term(rng, 3, 2), 2)
    g = compiled(random_term(rng, 3, 2), 2)
    assert pl_equal(mv_min(f, g), mv_otimes(f, mv_implies(f, g)))
    assert pl_equal(mv_max(f, g), mv_neg(mv_min(mv_neg(f), mv_neg(g))))


def test_constant_and_coordinate_bounds():
    with pytest.raises(CalculusError):
        constant_function(1, 2)
    with pytest.raises(CalculusError):
        coordinate_function(2, 3)
    with pytest.raises(CalculusError):
        coordinate_function(2, 0)
    assert coordinate_function(2, 2).value((F(1, 3), F(2, 3))) == F(2, 3)


def test_truncated_multiple():
    g = coordinate_function(1, 1)
    assert pl_equal(truncated_multiple(g, 0), constant_function(1, 0))
    k3 = truncated_multiple(g, 3)
    assert k3.value((F(1, 6),)) == F(1, 2)
    assert k3.value((F(1, 2),)) == 1
    with pytest.raises(CalculusError):
        truncated_multiple(g, -1)


def test_welding_keeps_functions_small():
    # oplus with 0 refines and then welds back to the base complex size
    f = coordinate_function(2, 1)
    same = mv_oplus(f, constant_function(2, 0))
    assert pl_equal(f, same)
    assert len(same.complex.cells) == len(f.complex.cells)


# --- zero sets --------------------------------------------------------------------


def test_zeroset_of_coordinate():
    z = zeroset(coordinate_function(2, 1))
    assert len(z.parts) == 1
    assert z.parts[0] == Polytope.from_points([(0, 0), (0, 1)])


def test_zeroset_oplus_equals_max_equals_intersection(rng):
    for _ in range(5):
        f = compiled(random_term(rng, 3, 2), 2)
        g = compiled(random_term(rng, 3, 2), 2)
        zsum = zeroset(mv_oplus(f, g))
        zmax = zeroset(mv_max(f, g))
        for _ in range(200):
            p = random_cube_point(rng, 2)
            expected = f.value(p) == 0 and g.value(p) == 0
            assert zsum.contains(p) == expected
            assert zmax.contains(p) == expected


def test_zeroset_empty_for_positive_function():
    assert zeroset(constant_function(2, 1)).is_empty


def test_point_zero_function_exact():
    x = (F(1, 3), F(2, 5))
    j = point_zero_function(x)
    validate(j)
    assert list(zeroset(j).parts) == [Polytope.from_points([x])]
    assert j.value(x) == 0
    assert j.value((F(1, 3), F(1, 2))) > 0


def test_segment_zero_function_exact():
    x, y = (F(0), F(0)), (F(1, 2), F(0))
    g = segment_zero_function(x, y)
    validate(g)
    target = Polytope.from_points([x, y])
    locus = zeroset(g)
    assert [p for p in locus.parts] == [target]
    assert g.value((F(1, 4), F(0))) == 0
    assert g.value((F(3, 4), F(0))) > 0
    assert g.value((F(1, 4), F(1, 8))) > 0


def test_segment_zero_function_degenerate_is_point():
    x = (F(1, 4), F(1, 4))
    g = segment_zero_function(x, x)
    assert list(zeroset(g).parts) == [Polytope.from_points([x])]


def test_segment_zero_function_diagonal():
    x, y = (F(1, 4), F(1, 4)), (F(3, 4), F(3, 4))
    g = segment_zero_function(x, y)
    locus = zeroset(g)
    assert [p for p in locus.parts] == [Polytope.from_points([x, y])]


def test_zero_constructors_reject_outside_cube():
    with pytest.raises(CalculusError):
        point_zero_function((F(3, 2),))
    with pytest.raises(CalculusError):
        segment_zero_function((F(0), F(0)), (F(1), F(2)))


# --- derivatives ------------------------------------------------------------------


def test_directional_derivative_vs_incremental_ratio(rng):
    checked = 0
    while checked < 40:
        n = rng.randint(1, 2)
        f = compiled(random_term(rng, 4, n), n)
        x = random_cube_point(rng, n, 8)
        u = tuple(rng.randint(-3, 3) for _ in range(n))
        if all(c == 0 for c in u):
            continue
        try:
            t_exit = cell_exit_parameter(f, x, u)
        except CalculusError:
            continue  # direction leaves the cube immediately
        d = directional_derivative(f, x, u)
        fx = f.value(x)
        for num in (1, 2, 3):
            t = t_exit * num / 4
            moved = f.value(tuple(xi + t * ui for xi, ui in zip(x, u)))
            assert (moved - fx) / t == d
        checked += 1


def test_directional_derivative_known():
    f = compiled("(x1 + x1)", 1)
    assert directional_derivative(f, (F(1, 4),), (1,)) == 2
    assert directional_derivative(f, (F(3, 4),), (1,)) == 0
    # at the breakpoint the one-sided derivatives differ by direction
    assert directional_derivative(f, (F(1, 2),), (1,)) == 0
    assert directional_derivative(f, (F(1, 2),), (-1,)) == -2
    assert directional_derivative(f, (F(1, 2),), (0,)) == 0


def test_cell_exit_parameter_known():
    f = compiled("(x1 + x1)", 1)
    assert cell_exit_parameter(f, (F(1, 4),), (1,)) == F(1, 4)
    assert cell_exit_parameter(f, (F(1, 4),), (-1,)) == F(1, 4)
    with pytest.raises(CalculusError):
        cell_exit_parameter(f, (F(0),), (-1,))


# --- comparisons -------------------------------------------------------------------


def test_pl_violation_lex_smallest():
    f = coordinate_function(2, 1)
    g = constant_function(2, 0)
    assert pl_violation(g, f) is None
    # f > 0 holds wherever x1 > 0; the lex-smallest refuting vertex is
    # the first vertex with positive first coordinate
    w = pl_violation(f, g)
    assert w is not None and f.value(w) > 0


def test_pl_violation_on_region():
    from mvworkbench.mcnaughton import ZeroLocus

    f = coordinate_function(2, 1)
    one = constant_function(2, 1)
    left_edge = ZeroLocus(2, (Polytope.from_points([(0, 0), (0, 1)]),))
    assert pl_leq(one, mv_oplus(f, mv_neg(f)), left_edge)
    assert pl_violation(one, f, left_edge) is not None


def test_ramp_function_values():
    r = ramp_function(2, ((8, 0), 1))
    assert r.value((F(0), F(0))) == 0
    assert r.value((F(3, 16), F(1, 2))) == F(1, 2)
    assert r.value((F(1, 2), F(1))) == 1
    validate(r)


def test_validate_catches_conflicting_vertex_values():
    cells = [Simplex([(0,), (F(1, 2),)]), Simplex([(F(1, 2),), (1,)])]
    # pieces disagree at the shared vertex 1/2: first gives 1/2, second 1
    broken = PLFunction(Complex(1, cells), [AffineMap((1,), 0), AffineMap((0,), 1)])
    with pytest.raises(AssertionError):
        validate(broken)
