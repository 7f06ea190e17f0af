"""Exact rational linear programming: two-phase dense simplex with Bland's
rule (guaranteed termination, no floating point) and brute-force vertex
enumeration for small H-polytopes.

Problem sizes in this package are tiny (a handful of rows and columns), so
dense Fraction arithmetic is entirely adequate.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .linalg import solve_square

Vec = tuple[Fraction, ...]


class LPError(Exception):
    pass


def _pivot(rows, obj, basis, r, c):
    piv = rows[r][c]
    rows[r] = [x / piv for x in rows[r]]
    for i in range(len(rows)):
        if i != r and rows[i][c] != 0:
            f = rows[i][c]
            rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [x - f * y for x, y in zip(obj, rows[r])]
    basis[r] = c


def _run_simplex(rows, obj, basis) -> str:
    """Minimize; obj holds reduced costs with -value in the last slot."""
    ncols = len(obj) - 1
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(rows, obj, basis, best[1], enter)


def solve_standard_form(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]],
                        b: Sequence[Fraction]) -> tuple[str, Optional[Vec], Optional[Fraction]]:
    """min c.x subject to A x = b, x >= 0.  Returns (status, x, value)."""
    m = len(A)
    n = len(c)
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(b[i])]
        if row[-1] < 0:
            row = [-x for x in row]
        rows.append(row)
    # phase 1: artificial basis
    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows[i] = rows[i][:-1] + art + [rows[i][-1]]
    total = n + m
    obj = [Fraction(0)] * (total + 1)
    for j in range(n):
        obj[j] = -sum(rows[i][j] for i in range(m))
    obj[total] = -sum(rows[i][-1] for i in range(m))
    basis = [n + i for i in range(m)]
    _run_simplex(rows, obj, basis)
    if -obj[total] > 0:
        return "infeasible", None, None
    # drive leftover artificials out of the basis, drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if rows[i][j] != 0), None)
            if col is None:
                continue
            _pivot(rows, obj, basis, i, col)
        keep.append(i)
    rows = [rows[i][:n] + [rows[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase 2
    obj = [Fraction(x) for x in c] + [Fraction(0)]
    for i, bi in enumerate(basis):
        if obj[bi] != 0:
            f = obj[bi]
            obj = [x - f * y for x, y in zip(obj, rows[i])]
    status = _run_simplex(rows, obj, basis)
    if status == "unbounded":
        return "unbounded", None, None
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = rows[i][-1]
    return "optimal", tuple(x), -obj[-1]


def convex_combination(points: Sequence[Sequence], target: Sequence) -> Optional[Vec]:
    """Exact barycentric weights expressing target as a convex combination of
    the given points, or None if target is outside their convex hull."""
    m = len(points)
    d = len(target)
    A = []
    b = []
    A.append([Fraction(1)] * m)
    b.append(Fraction(1))
    for i in range(d):
        A.append([Fraction(p[i]) for p in points])
        b.append(Fraction(target[i]))
    status, x, _ = solve_standard_form([Fraction(0)] * m, A, b)
    return x if status == "optimal" else None


def _split_form(A_ub, b_ub, A_eq, b_eq, obj):
    """General-form LP -> standard form with x = xp - xm and slacks."""
    dim = len(obj)
    nu = len(A_ub)
    rows = []
    rhs = []
    for i in range(nu):
        row = [Fraction(x) for x in A_ub[i]]
        slack = [Fraction(0)] * nu
        slack[i] = Fraction(1)
        rows.append(row + [-x for x in row] + slack)
        rhs.append(Fraction(b_ub[i]))
    for i in range(len(A_eq)):
        row = [Fraction(x) for x in A_eq[i]]
        rows.append(row + [-x for x in row] + [Fraction(0)] * nu)
        rhs.append(Fraction(b_eq[i]))
    c = [Fraction(x) for x in obj] + [-Fraction(x) for x in obj] + [Fraction(0)] * nu
    return c, rows, rhs, dim


def minimize_over_polyhedron(obj: Sequence, A_ub: Sequence[Sequence], b_ub: Sequence,
                             A_eq: Sequence[Sequence] = (), b_eq: Sequence = (),
                             ) -> tuple[str, Optional[Vec], Optional[Fraction]]:
    """min obj.x over {A_ub x <= b_ub, A_eq x = b_eq} with x free."""
    c, rows, rhs, dim = _split_form(A_ub, b_ub, A_eq, b_eq, obj)
    status, x, value = solve_standard_form(c, rows, rhs)
    if status != "optimal":
        return status, None, None
    point = tuple(x[i] - x[dim + i] for i in range(dim))
    return status, point, value


def polyhedron_nonempty(A_ub: Sequence[Sequence], b_ub: Sequence,
                        A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> Optional[Vec]:
    """A feasible point of the polyhedron, or None if it is empty."""
    dim = len(A_ub[0]) if A_ub else len(A_eq[0])
    status, point, _ = minimize_over_polyhedron([Fraction(0)] * dim, A_ub, b_ub, A_eq, b_eq)
    return point if status == "optimal" else None


def enumerate_vertices(A_ub: Sequence[Sequence], b_ub: Sequence,
                       A_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> list[Vec]:
    """All vertices of a (bounded, pointed) polyhedron, by trying every basis.

    Every vertex of {A_ub x <= b_ub, A_eq x = b_eq} in R^m lies on m
    independent tight constraints, so it appears among the solutions of the
    square subsystems.  Exponential in general; fine for the small systems
    used here.
    """
    dim = len(A_ub[0]) if A_ub else len(A_eq[0])
    eq_rows = [tuple(Fraction(x) for x in row) for row in A_eq]
    eq_rhs = [Fraction(x) for x in b_eq]
    ub_rows = [tuple(Fraction(x) for x in row) for row in A_ub]
    ub_rhs = [Fraction(x) for x in b_ub]

    # independent subset of the equality rows
    indep: list[int] = []
    from .linalg import rank as _rank
    for i in range(len(eq_rows)):
        if _rank([eq_rows[j] for j in indep] + [eq_rows[i]]) > len(indep):
            indep.append(i)
    base = [eq_rows[i] for i in indep]
    base_rhs = [eq_rhs[i] for i in indep]
    need = dim - len(base)
    if need < 0:
        raise LPError("inconsistent equality system dimensions")

    seen = set()
    out: list[Vec] = []
    for combo in combinations(range(len(ub_rows)), need):
        mat = base + [ub_rows[i] for i in combo]
        rhs = base_rhs + [ub_rhs[i] for i in combo]
        x = solve_square(mat, rhs)
        if x is None:
            continue
        if any(sum(r * v for r, v in zip(row, x)) > bb for row, bb in zip(ub_rows, ub_rhs)):
            continue
        if any(sum(r * v for r, v in zip(row, x)) != bb for row, bb in zip(eq_rows, eq_rhs)):
            continue
        if x not in seen:
            seen.add(x)
            out.append(x)
    return sorted(out)


def convex_hull_2d(points: Sequence[tuple]) -> list[tuple]:
    """Convex hull of exact 2D points, counterclockwise (monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]
