"""Term parsing, serialization, and pointwise evaluation."""

from fractions import Fraction

import pytest

from mvworkbench.formulas import (
    ArityError,
    Const,
    Implies,
    Max,
    Min,
    Neg,
    OPlus,
    OTimes,
    ParseError,
    Var,
    evaluate,
    max_var,
    parse,
    serialize,
    to_program,
    variables,
)
from support import random_cube_point, random_term

F = Fraction


def test_parse_shapes():
    assert parse("!x1") == Neg(Var(1))
    assert parse("(x1 + x2)") == OPlus(Var(1), Var(2))
    assert parse("((x1 * x2) -> x1)") == Implies(OTimes(Var(1), Var(2)), Var(1))
    assert parse("(x1 & x2)") == Min(Var(1), Var(2))
    assert parse("(x1 | x2)") == Max(Var(1), Var(2))
    assert parse("0") == Const(0)
    assert parse("  1 ") == Const(1)


def test_evaluate_examples():
    third = (F(1, 3),)
    assert evaluate(parse("!x1"), third) == F(2, 3)
    assert evaluate(parse("(x1 + x1)"), (F(3, 4),)) == 1
    assert evaluate(parse("(x1 * x2)"), (F(3, 4), F(3, 4))) == F(1, 2)
    assert evaluate(parse("(x1 -> x2)"), (F(1, 2), F(1, 4))) == F(3, 4)
    assert evaluate(parse("(x1 & x2)"), (F(1, 2), F(1, 4))) == F(1, 4)
    assert evaluate(parse("(x1 | x2)"), (F(1, 2), F(1, 4))) == F(1, 2)


@pytest.mark.parametrize(
    "text",
    ["", "x0", "x1 +", "(x1 + )", "(x1 ? x2)", "((x1 + x2)", "x1 x2", "y1", "(x1+x2))"],
)
def test_parse_errors_carry_position(text):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.line >= 1
    assert err.value.column >= 1


def test_parse_arity_cap():
    parse("x3", max_arity=3)
    with pytest.raises(ArityError):
        parse("x4", max_arity=3)


def test_evaluate_arity_mismatch():
    with pytest.raises(ArityError):
        evaluate(parse("x2"), (F(1, 2),))


def test_round_trip_random_terms(rng):
    for _ in range(200):
        term = parse(random_term(rng, rng.randint(0, 6), 3))
        assert parse(serialize(term)) == term


def test_serialize_is_parseable_text():
    term = Implies(OTimes(Var(1), Neg(Var(2))), Max(Const(0), Var(1)))
    assert parse(serialize(term)) == term


def test_mv_identities_on_samples(rng):
    for _ in range(25):
        f = parse(random_term(rng, 4, 2))
        g = parse(random_term(rng, 4, 2))
        for _ in range(40):
            p = random_cube_point(rng, 2)
            a = evaluate(f, p)
            b = evaluate(g, p)
            assert 0 <= a <= 1
            assert evaluate(OPlus(f, g), p) == evaluate(OPlus(g, f), p) == min(1, a + b)
            assert evaluate(Neg(Neg(f)), p) == a
            assert evaluate(OPlus(f, Neg(f)), p) == 1
            # derived connective identities the AST does not bake in
            assert evaluate(Min(f, g), p) == evaluate(
                OTimes(f, Implies(f, g)), p
            )
            assert evaluate(OTimes(f, g), p) == evaluate(
                Neg(OPlus(Neg(f), Neg(g))), p
            )


def test_variable_reports():
    term = parse("((x1 + x3) & !x3)")
    assert max_var(term) == 3
    assert variables(term) == {1, 3}
    assert max_var(parse("0")) == 0


def test_to_program_postfix_evaluates(rng):
    # the compiled program over scaled integers agrees with tree evaluation
    from mvworkbench.kernels import eval_formula_scaled

    for _ in range(50):
        term = parse(random_term(rng, 5, 3))
        prog = to_program(term)
        den = rng.randint(1, 40)
        nums = tuple(rng.randint(0, den) for _ in range(3))
        point = tuple(F(c, den) for c in nums)
        assert F(eval_formula_scaled(prog, nums, den), den) == evaluate(term, point)
