"""Write-only SVG scenes for two-dimensional closed sets and their tangents.

Renders the unit square with the set's polytope parts, the first terms of
each probe sequence, and per-witness decorations: the tangent ray from the
base point and one illustrative cone drawn as the isosceles triangle with
apex at the base point. Output is a deterministic string; floating point
is used only here, never in any verdict.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from mvworkbench.closedsets import ClosedSetDesc
from mvworkbench.tangents import TangentWitness

SIZE = 640
MARGIN = 40
SEQUENCE_TERMS = 50

_STYLE = {
    "part_fill": "#c6dbef",
    "part_stroke": "#3182bd",
    "point": "#252525",
    "limit": "#d7301f",
    "ray": "#d7301f",
    "cone_fill": "#fdae6b",
    "cone_stroke": "#e6550d",
}


def _px(p: Sequence) -> tuple[float, float]:
    """Map a cube point to pixel coordinates, flipping y to screen-down."""
    span = SIZE - 2 * MARGIN
    return (
        MARGIN + float(p[0]) * span,
        SIZE - MARGIN - float(p[1]) * span,
    )


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _poly_points(vertices: Sequence[tuple]) -> str:
    """Vertices in hull order (angular sort around the centroid)."""
    pts = [(float(v[0]), float(v[1])) for v in vertices]
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    pts.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
    return " ".join(
        f"{_fmt(x)},{_fmt(y)}" for x, y in (_px(p) for p in pts)
    )


def _rotate(u: tuple[float, float], angle: float) -> tuple[float, float]:
    c, s = math.cos(angle), math.sin(angle)
    return (c * u[0] - s * u[1], s * u[0] + c * u[1])


def _cone_triangle(
    x: tuple, u: tuple, height: Fraction, cos_half: Fraction
) -> list[tuple[float, float]]:
    ux, uy = float(u[0]), float(u[1])
    norm = math.hypot(ux, uy)
    unit = (ux / norm, uy / norm)
    delta = math.acos(float(cos_half))
    h = float(height)
    a = _rotate(unit, delta)
    b = _rotate(unit, -delta)
    fx = (float(x[0]), float(x[1]))
    return [
        fx,
        (fx[0] + h * a[0], fx[1] + h * a[1]),
        (fx[0] + h * b[0], fx[1] + h * b[1]),
    ]


def render_scene(
    X: ClosedSetDesc, witnesses: Sequence[TangentWitness] = ()
) -> str:
    """SVG text for a 2-D set; callers must reject other arities first."""
    if X.arity != 2:
        raise ValueError("SVG scenes are drawn for arity 2 only")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    c0 = _px((0, 0))
    c1 = _px((1, 1))
    out.append(
        f'<rect x="{_fmt(c0[0])}" y="{_fmt(c1[1])}" '
        f'width="{_fmt(c1[0] - c0[0])}" height="{_fmt(c0[1] - c1[1])}" '
        'fill="none" stroke="#969696"/>'
    )
    for part in X.polyparts:
        if len(part.vertices) >= 3:
            out.append(
                f'<polygon points="{_poly_points(part.vertices)}" '
                f'fill="{_STYLE["part_fill"]}" stroke="{_STYLE["part_stroke"]}"/>'
            )
        elif len(part.vertices) == 2:
            (ax, ay), (bx, by) = (_px(v) for v in part.vertices)
            out.append(
                f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" '
                f'y2="{_fmt(by)}" stroke="{_STYLE["part_stroke"]}" stroke-width="2"/>'
            )
        else:
            px, py = _px(part.vertices[0])
            out.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="3" '
                f'fill="{_STYLE["part_stroke"]}"/>'
            )
    # One cone triangle for the first witness that is outgoing with a rational
    # direction; drawn under the points so it does not hide them.
    for w in witnesses:
        if (
            w.direction.kind == "rational"
            and w.outgoing is not None
            and w.outgoing.kind == "yes"
        ):
            tri = _cone_triangle(
                w.x, w.direction.vector, w.outgoing.lam, Fraction(1, 2)
            )
            pts = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in map(_px, tri))
            out.append(
                f'<polygon points="{pts}" fill="{_STYLE["cone_fill"]}" '
                f'fill-opacity="0.4" stroke="{_STYLE["cone_stroke"]}"/>'
            )
            break
    for seq in X.sequences:
        for i in range(seq.first_index, seq.first_index + SEQUENCE_TERMS):
            px, py = _px(seq.point_at(i))
            out.append(
                f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="2" '
                f'fill="{_STYLE["point"]}"/>'
            )
        px, py = _px(seq.limit)
        out.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="3.5" '
            f'fill="{_STYLE["limit"]}"/>'
        )
    for w in witnesses:
        if w.direction.kind != "rational":
            continue
        lam = (
            w.outgoing.lam
            if w.outgoing is not None and w.outgoing.lam is not None
            else Fraction(1, 4)
        )
        u = w.direction.vector
        norm = math.hypot(float(u[0]), float(u[1]))
        ex = float(w.x[0]) + float(lam) * float(u[0]) / norm
        ey = float(w.x[1]) + float(lam) * float(u[1]) / norm
        (ax, ay), (bx, by) = _px(w.x), _px((ex, ey))
        out.append(
            f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
            f'stroke="{_STYLE["ray"]}" stroke-width="1.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
