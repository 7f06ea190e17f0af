"""Exact linear algebra helpers over the integers and rationals.

Everything here works on tuples of Python ints / fractions.Fraction, so all
results are exact.  These are deliberately small dense routines: every matrix
in this package has at most a few dozen rows.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Optional, Sequence

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]
FracVec = tuple[Fraction, ...]


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_scale(a: Sequence, s) -> tuple:
    return tuple(s * x for x in a)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b, strict=True))


def norm_sq(a: Sequence):
    return sum(x * x for x in a)


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    ncols = len(m[0])
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(ncols))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_neg(m: Sequence[Sequence]) -> tuple:
    return tuple(tuple(-x for x in row) for row in m)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m))


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def solve_square(m: Sequence[Sequence], rhs: Sequence) -> Optional[FracVec]:
    """Solve m x = rhs exactly; None if the matrix is singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))


def invert(m: Sequence[Sequence]) -> Optional[tuple[FracVec, ...]]:
    """Exact inverse as a matrix of fractions; None if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(a[i][n:]) for i in range(n))


def invert_unimodular(m: Sequence[Sequence[int]]) -> IntMat:
    """Inverse of a matrix with determinant +-1, returned with integer entries."""
    inv = invert(m)
    if inv is None:
        raise ValueError("matrix is singular")
    out = []
    for row in inv:
        irow = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            irow.append(int(x))
        out.append(tuple(irow))
    return tuple(out)


def nullspace(rows: Sequence[Sequence]) -> list[FracVec]:
    """Basis of the rational nullspace of the given row system."""
    if not rows:
        return []
    ncols = len(rows[0])
    a = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][free]
        basis.append(tuple(v))
    return basis


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rows[0]) - len(nullspace(rows))


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else max(abs(a), abs(b))


def primitive_int_vector(v: Sequence) -> IntVec:
    """Scale a rational vector by a positive factor to a primitive integer one."""
    den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
    w = [int(Fraction(x) * den) for x in v]
    g = reduce(gcd, (abs(x) for x in w), 0)
    if g == 0:
        return tuple(w)
    return tuple(x // g for x in w)
