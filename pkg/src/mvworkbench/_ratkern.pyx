# cython: language_level=3
# cython: boundscheck=False
"""Compiled twin of _ratkern_py.

Arithmetic stays on Python ints (values can exceed machine words), the win is
compiled loop and dispatch overhead. Semantics must match _ratkern_py exactly;
tests/test_kernels.py holds the two implementations to bit equality.
"""

IMPL = "cython"


def idot(a, b):
    cdef Py_ssize_t i, n = len(a)
    s = 0
    for i in range(n):
        s += a[i] * b[i]
    return s


def form_value_scaled(normal, offset, nums, den):
    cdef Py_ssize_t i, n = len(normal)
    s = 0
    for i in range(n):
        s += normal[i] * nums[i]
    return s - offset * den


def eval_affine_scaled(coeffs, c0, nums, den):
    cdef Py_ssize_t i, n = len(coeffs)
    s = c0 * den
    for i in range(n):
        s += coeffs[i] * nums[i]
    return s


def point_in_cell_scaled(facets, nums, den):
    cdef Py_ssize_t i, j, nf = len(facets), n
    for i in range(nf):
        normal = facets[i][0]
        s = -(<object>facets[i][1]) * den
        n = len(normal)
        for j in range(n):
            s += normal[j] * nums[j]
        if s < 0:
            return False
    return True


def locate_cell_scaled(cells, nums, den):
    cdef Py_ssize_t idx, i, j, nc = len(cells), nf, n
    cdef bint hit
    for idx in range(nc):
        facets = cells[idx]
        nf = len(facets)
        hit = True
        for i in range(nf):
            normal = facets[i][0]
            s = -(<object>facets[i][1]) * den
            n = len(normal)
            for j in range(n):
                s += normal[j] * nums[j]
            if s < 0:
                hit = False
                break
        if hit:
            return idx
    return -1


def eval_formula_scaled(prog, nums, den):
    cdef Py_ssize_t k, np = len(prog)
    cdef int op
    stack = []
    push = stack.append
    for k in range(np):
        op = prog[k][0]
        arg = prog[k][1]
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
    cdef Py_ssize_t n = len(rows), i, j, k, r
    cdef int sign = 1
    if n == 0:
        return 1
    m = [list(row) for row in rows]
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
            row_i = m[i]
            row_k = m[k]
            lead = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]
