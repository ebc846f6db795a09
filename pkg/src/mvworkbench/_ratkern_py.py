"""Pure-Python twin of the compiled kernel.

Every function here operates on plain integers (numerators over a shared
denominator), so results are exact and bit-identical to the Cython build.
Keep this module dependency-free and in lockstep with _ratkern.pyx.
"""

from __future__ import annotations

IMPL = "python"


def idot(a, b):
    """Integer dot product of two equal-length sequences."""
    s = 0
    for x, y in zip(a, b):
        s += x * y
    return s


def form_value_scaled(normal, offset, nums, den):
    """Numerator of <normal, p> - offset for p = nums/den (denominator den > 0)."""
    s = 0
    for x, y in zip(normal, nums):
        s += x * y
    return s - offset * den


def eval_affine_scaled(coeffs, c0, nums, den):
    """Numerator of an integer affine map at p = nums/den; the value is n/den."""
    s = c0 * den
    for c, x in zip(coeffs, nums):
        s += c * x
    return s


def point_in_cell_scaled(facets, nums, den):
    """True when every facet form (normal, offset) is >= 0 at nums/den."""
    for normal, offset in facets:
        s = -offset * den
        for x, y in zip(normal, nums):
            s += x * y
        if s < 0:
            return False
    return True


def locate_cell_scaled(cells, nums, den):
    """Index of the first cell (list of facet forms) containing nums/den, else -1."""
    for idx, facets in enumerate(cells):
        hit = True
        for normal, offset in facets:
            s = -offset * den
            for x, y in zip(normal, nums):
                s += x * y
            if s < 0:
                hit = False
                break
        if hit:
            return idx
    return -1


def eval_formula_scaled(prog, nums, den):
    """Run a postfix formula program over scaled coordinates.

    Opcodes: 0 push integer constant (0 or 1, pre-scaled by caller convention),
    1 push variable, 2 negation, 3 truncated plus, 4 truncated times, 5 min,
    6 max, 7 implication. All values are numerators over den.
    """
    stack = []
    push = stack.append
    for op, arg in prog:
        if op == 0:
            push(arg * den)
        elif op == 1:
            push(nums[arg])
        elif op == 2:
            stack[-1] = den - stack[-1]
        else:
            b = stack.pop()
            a = stack[-1]
            if op == 3:
                v = a + b
                stack[-1] = den if v > den else v
            elif op == 4:
                v = a + b - den
                stack[-1] = 0 if v < 0 else v
            elif op == 5:
                stack[-1] = b if b < a else a
            elif op == 6:
                stack[-1] = b if b > a else a
            else:
                v = den - a + b
                stack[-1] = den if v > den else v
    return stack[0]


def bareiss_det(rows):
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]
