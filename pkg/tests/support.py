"""Shared builders for the test suite: example sets and random generators.

The sets here are the recurring cast of the whole suite. The cusp converges
to the origin along (1,0) with a genuinely outgoing tangent; the Pell set
approaches (1/2,1/2) along the irrational direction (1, sqrt(2)-1); the
aligned set walks into the origin on the axis itself, so its tangent is
rational but never outgoing.
"""

from fractions import Fraction

from mvworkbench.closedsets import (
    ClosedSetDesc,
    LinearRecurrenceSchema,
    ProbeSequence,
    RationalFunctionSchema,
)
from mvworkbench.polytopes import Polytope, unit_cube

F = Fraction


def rational_sequence(limit, numerators, denominators, first=2):
    limit = tuple(F(c) for c in limit)
    return ProbeSequence(limit, RationalFunctionSchema(numerators, denominators), first)


def cusp_set():
    """{(1/i, 1/i^2) : i >= 2} with its limit (0,0)."""
    return ClosedSetDesc(
        2, (), (rational_sequence((0, 0), ((1,), (1,)), ((0, 1), (0, 0, 1))),)
    )


def steep_cusp_set():
    """Same shape with a cubic drop: (1/i, 1/i^3)."""
    return ClosedSetDesc(
        2, (), (rational_sequence((0, 0), ((1,), (1,)), ((0, 1), (0, 0, 0, 1))),)
    )


def cusp3_set():
    """The cusp embedded in the 3-cube with a constant third coordinate."""
    return ClosedSetDesc(
        3,
        (),
        (
            rational_sequence(
                (0, 0, 0), ((1,), (1,), ()), ((0, 1), (0, 0, 1), (1,))
            ),
        ),
    )


def pell_set():
    """Points (p_i/q_i^2, p'_i/q_i^2) + (1/2,1/2) heading in along (1, sqrt(2)-1).

    Numerators satisfy s_{i+1} = 2 s_i + s_{i-1} (Pell companions), the
    common denominator is 4^i, so the difference vectors shrink to zero
    while their direction converges to an irrational slope.
    """
    seq = ProbeSequence(
        (F(1, 2), F(1, 2)),
        LinearRecurrenceSchema((2, 1), ((1, 3), (1, 2)), (4,), (4,)),
        1,
    )
    return ClosedSetDesc(2, (Polytope.from_points([(F(1, 2), F(1, 2))]),), (seq,))


def pell3_set():
    """Pell direction inside the 3-cube; above n = 2 no converse criterion exists."""
    seq = ProbeSequence(
        (F(1, 2), F(1, 2), F(1, 2)),
        LinearRecurrenceSchema((2, 1), ((1, 3), (1, 2), (0, 0)), (4,), (4,)),
        1,
    )
    return ClosedSetDesc(
        3, (Polytope.from_points([(F(1, 2), F(1, 2), F(1, 2))]),), (seq,)
    )


def aligned_set():
    """{(1/i, 0)} with limit (0,0): the tangent direction is the travel axis."""
    return ClosedSetDesc(
        2,
        (Polytope.from_points([(F(0), F(0))]),),
        (rational_sequence((0, 0), ((1,), ()), ((0, 1), (1,))),),
    )


def triangle_set():
    return ClosedSetDesc(2, (Polytope.from_points([(0, 0), (0, 1), (1, 0)]),))


def square_set():
    return ClosedSetDesc(2, (unit_cube(2),))


def interval_set():
    return ClosedSetDesc(1, (unit_cube(1),))


def half_sequence_set(first=4):
    """{1/2} and the points 1/2 + 1/i walking down onto it from the right."""
    return ClosedSetDesc(
        1, (), (rational_sequence((F(1, 2),), ((1,),), ((0, 1),), first),)
    )


# --- random generation ----------------------------------------------------------

BINARY_OPS = ("+", "*", "&", "|", "->")


def random_term(rng, depth, arity):
    """A term of the concrete grammar with nesting depth at most `depth`."""
    if depth == 0 or rng.random() < 0.30:
        if rng.random() < 0.15:
            return rng.choice("01")
        return f"x{rng.randint(1, arity)}"
    if rng.random() < 0.20:
        return "!" + random_term(rng, depth - 1, arity)
    op = BINARY_OPS[rng.randrange(len(BINARY_OPS))]
    left = random_term(rng, depth - 1, arity)
    right = random_term(rng, depth - 1, arity)
    return f"({left} {op} {right})"


def random_cube_point(rng, n, max_denominator=32):
    return tuple(
        F(rng.randint(0, d), d)
        for d in (rng.randint(1, max_denominator) for _ in range(n))
    )
