"""Symmetric integer linear programs: exact instance I/O, invariance
checking, unimodular reformulation, hard instance generation from core
points, and a complete integral feasibility oracle.

The oracle enumerates one layer of candidate coordinates at a time with
exact interval reasoning.  For four remaining free variables it scans a
two-coordinate shadow polygon and screens the last two coordinates with a
conservatively-margined float filter; every surviving candidate is
certified or refuted in exact arithmetic, so the float pass can only cost
time, never correctness.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded
from .exactlp import convex_hull_2d, enumerate_vertices, polyhedron_nonempty
from .geometry import OrbitPolytope, is_core_point
from .groups import PermGroup, perm_matrix
from .linalg import (IntVec, det_int, dot, mat_vec, vec_mat, lcm,
                     primitive_int_vector)
from .order_units import UnitElement, identity_unit, normalizer_generators

MACHINE_EPS = float(np.finfo(np.float64).eps)
DEFAULT_ORACLE_BUDGET = 10 ** 9


class ILPError(ValueError):
    pass


class ILPParseError(ILPError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


FracVec = tuple[Fraction, ...]
FracMat = tuple[FracVec, ...]


@dataclass(frozen=True)
class ILPInstance:
    """Rational constraint system A x <= b, E x = f with objective c."""

    dim: int
    A: FracMat
    b: FracVec
    E: FracMat
    f: FracVec
    c: FracVec
    name: str = ""

    def __post_init__(self):
        for row in self.A:
            if len(row) != self.dim:
                raise ILPError("inequality row has wrong dimension")
        for row in self.E:
            if len(row) != self.dim:
                raise ILPError("equality row has wrong dimension")
        if len(self.b) != len(self.A) or len(self.f) != len(self.E):
            raise ILPError("right hand side length mismatch")
        if len(self.c) != self.dim:
            raise ILPError("objective has wrong dimension")

    @classmethod
    def build(cls, dim: int, A=(), b=(), E=(), f=(), c=None, name: str = "") -> "ILPInstance":
        frac = Fraction
        A = tuple(tuple(frac(x) for x in row) for row in A)
        E = tuple(tuple(frac(x) for x in row) for row in E)
        b = tuple(frac(x) for x in b)
        f = tuple(frac(x) for x in f)
        if c is None:
            c = tuple(frac(0) for _ in range(dim))
        else:
            c = tuple(frac(x) for x in c)
        return cls(dim, A, b, E, f, c, name)

    def is_feasibility(self) -> bool:
        return all(x == 0 for x in self.c)

    def satisfied_by(self, x: Sequence) -> bool:
        xs = tuple(Fraction(v) for v in x)
        return (all(dot(row, xs) <= bb for row, bb in zip(self.A, self.b))
                and all(dot(row, xs) == ff for row, ff in zip(self.E, self.f)))


# ---------------------------------------------------------------------------
# text format

def _format_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def write_instance(inst: ILPInstance) -> str:
    lines = []
    if inst.name:
        lines.append(f"# name: {inst.name}")
    lines.append(f"dim {inst.dim}")
    if not inst.is_feasibility():
        lines.append("obj " + " ".join(_format_frac(x) for x in inst.c))
    for row, ff in zip(inst.E, inst.f):
        lines.append("eq " + " ".join(_format_frac(x) for x in row) + " = " + _format_frac(ff))
    for row, bb in zip(inst.A, inst.b):
        lines.append("ineq " + " ".join(_format_frac(x) for x in row) + " <= " + _format_frac(bb))
    return "\n".join(lines) + "\n"


_FRAC_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_frac(tok: str, line_no: int) -> Fraction:
    if not _FRAC_RE.match(tok):
        raise ILPParseError(line_no, f"bad coefficient {tok!r}")
    return Fraction(tok)


def parse_instance(text: str) -> ILPInstance:
    dim = None
    name = ""
    A, b, E, f = [], [], [], []
    c = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        m = re.match(r"^#\s*name:\s*(.*)$", raw.strip())
        if m:
            name = m.group(1).strip()
            continue
        line = raw.split("#", 1)[0].strip().rstrip(";")
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        if kw == "dim":
            if len(toks) != 2 or not toks[1].isdigit():
                raise ILPParseError(line_no, "expected `dim <d>`")
            dim = int(toks[1])
            continue
        if dim is None:
            raise ILPParseError(line_no, "dim must come first")
        if kw == "obj":
            vals = [_parse_frac(t, line_no) for t in toks[1:]]
            if len(vals) != dim:
                raise ILPParseError(line_no, f"objective needs {dim} coefficients")
            c = tuple(vals)
        elif kw == "eq":
            if "=" not in toks:
                raise ILPParseError(line_no, "equality row needs `= <f>`")
            sep = toks.index("=")
            vals = [_parse_frac(t, line_no) for t in toks[1:sep]]
            rhs = [_parse_frac(t, line_no) for t in toks[sep + 1:]]
            if len(vals) != dim or len(rhs) != 1:
                raise ILPParseError(line_no, f"equality row needs {dim} coefficients and one rhs")
            E.append(tuple(vals))
            f.append(rhs[0])
        elif kw == "ineq":
            if "<=" not in toks:
                raise ILPParseError(line_no, "inequality row needs `<= <b>`")
            sep = toks.index("<=")
            vals = [_parse_frac(t, line_no) for t in toks[1:sep]]
            rhs = [_parse_frac(t, line_no) for t in toks[sep + 1:]]
            if len(vals) != dim or len(rhs) != 1:
                raise ILPParseError(line_no, f"inequality row needs {dim} coefficients and one rhs")
            A.append(tuple(vals))
            b.append(rhs[0])
        else:
            raise ILPParseError(line_no, f"unknown keyword {kw!r}")
    if dim is None:
        raise ILPParseError(0, "missing dim line")
    return ILPInstance.build(dim, A, b, E, f, c, name)


# ---------------------------------------------------------------------------
# invariance and transformation

def _normalized_row(row: Sequence[Fraction], rhs: Fraction) -> tuple[IntVec, int]:
    """Scale (row, rhs) by the positive factor clearing denominators and the
    content; inequality direction is preserved."""
    den = reduce(lcm, [x.denominator for x in row] + [rhs.denominator], 1)
    ints = [int(x * den) for x in row] + [int(rhs * den)]
    g = reduce(math.gcd, (abs(v) for v in ints), 0)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints[:-1]), ints[-1]


def check_invariance(inst: ILPInstance, group: PermGroup) -> bool:
    """Whether the constraint system and objective are invariant under the
    coordinate permutation action of the group (rows may permute)."""
    if group.degree != inst.dim:
        raise ILPError("group degree does not match the instance dimension")
    a_rows = sorted(_normalized_row(row, bb) for row, bb in zip(inst.A, inst.b))
    e_rows = sorted(_normalized_row(row, ff) for row, ff in zip(inst.E, inst.f))
    for g in group.generators:
        # x -> gx maps row a to the row with entries a[g(j)] at position j
        pa = sorted(_normalized_row(tuple(row[g[j]] for j in range(inst.dim)), bb)
                    for row, bb in zip(inst.A, inst.b))
        if pa != a_rows:
            return False
        pe = sorted(_normalized_row(tuple(row[g[j]] for j in range(inst.dim)), ff)
                    for row, ff in zip(inst.E, inst.f))
        if pe != e_rows:
            return False
        if tuple(inst.c[g[j]] for j in range(inst.dim)) != inst.c:
            return False
    return True


def _matrix_of(S) -> tuple:
    return S.matrix if isinstance(S, UnitElement) else tuple(tuple(x) for x in S)


def transform(inst: ILPInstance, S, t: Optional[Sequence[int]] = None) -> ILPInstance:
    """The instance in the substituted variables x = S y + t.

    y solves the result exactly when S y + t solves the original; objective
    values shift by the constant c.t.
    """
    mat = _matrix_of(S)
    if det_int(mat) not in (1, -1):
        raise ILPError("transformation matrix is not unimodular")
    d = inst.dim
    if t is None:
        t = tuple([0] * d)
    t = tuple(t)
    A = tuple(vec_mat(row, mat) for row in inst.A)
    b = tuple(bb - dot(row, t) for row, bb in zip(inst.A, inst.b))
    E = tuple(vec_mat(row, mat) for row in inst.E)
    f = tuple(ff - dot(row, t) for row, ff in zip(inst.E, inst.f))
    c = vec_mat(inst.c, mat)
    return ILPInstance(d, A, b, E, f, tuple(c), inst.name)


@dataclass(frozen=True)
class CoefficientStats:
    max_abs: Fraction
    sum_squares: Fraction

    @classmethod
    def of(cls, inst: ILPInstance) -> "CoefficientStats":
        entries = [x for row in inst.A for x in row] + [x for row in inst.E for x in row]
        if not entries:
            return cls(Fraction(0), Fraction(0))
        return cls(max(abs(x) for x in entries), sum(x * x for x in entries))


@dataclass(frozen=True)
class ReformulationReport:
    """Certificate of a coefficient-reducing substitution x = S y + t."""

    S: UnitElement
    t: IntVec
    before: CoefficientStats
    after: CoefficientStats
    steps: tuple[str, ...]
    result: ILPInstance


def improve_formulation(inst: ILPInstance, group: PermGroup, budget: int = 100,
                        generators: Optional[Sequence[UnitElement]] = None,
                        ) -> ReformulationReport:
    """Greedy descent over normalizer generators (and inverses): apply
    whichever most decreases the squared coefficient mass, until no move
    improves or the step budget runs out."""
    if not check_invariance(inst, group):
        raise ILPError("instance is not invariant under the group")
    if generators is None:
        if group.cyclic_shift_power() is None:
            raise ILPError("supply generators explicitly for non-cyclic groups")
        generators = normalizer_generators(group.degree)
    moves = []
    for u in generators:
        moves.append(u)
        moves.append(u.inv())
    d = inst.dim
    before = CoefficientStats.of(inst)
    current = inst
    total = identity_unit(d)
    steps: list[str] = []
    score = before.sum_squares
    while len(steps) < budget:
        best = None
        for u in moves:
            cand = transform(current, u)
            s = CoefficientStats.of(cand).sum_squares
            if s < score and (best is None or s < best[0]):
                best = (s, u, cand)
        if best is None:
            break
        score, u, current = best
        total = total * u
        steps.append(u.label or "step")
    report = ReformulationReport(total, tuple([0] * d), before,
                                 CoefficientStats.of(current), tuple(steps), current)
    # the report must certify the equivalence it claims
    assert transform(inst, total) == current
    return report


# ---------------------------------------------------------------------------
# hard instances from core points

class ShrinkError(ILPError):
    pass


def generate_hard_instance(group: PermGroup, z: Sequence[int], shrink: int = 1,
                           name: str = "") -> ILPInstance:
    """Layer equation plus the facet system of the orbit polytope of a core
    point, with every right hand side reduced by `shrink`.

    The result is real-feasible (checked exactly) and, for shrink = 1,
    integrally infeasible: shrinking removes the vertices and the core
    point property says there were no other lattice points.
    """
    z = tuple(z)
    if not group.is_transitive():
        raise ILPError("hard instance generation needs a transitive group")
    if not is_core_point(group, z):
        raise ILPError("base point is not a core point")
    poly = OrbitPolytope.of(group, z)
    facets = poly.facets()
    d = group.degree
    k = sum(z)
    A = tuple(tuple(Fraction(x) for x in a) for a, _ in facets)
    b = tuple(Fraction(bb - shrink) for _, bb in facets)
    E = (tuple(Fraction(1) for _ in range(d)),)
    f = (Fraction(k),)
    inst = ILPInstance(d, A, b, E, f, tuple(Fraction(0) for _ in range(d)),
                       name or f"hard-shrink{shrink}")
    barycenter = [Fraction(k, d)] * d
    if not inst.satisfied_by(barycenter):
        if polyhedron_nonempty(A, b, E, f) is None:
            raise ShrinkError("shrink makes the real polytope empty")
    return inst


def derive_box(inst: ILPInstance) -> list[tuple[int, int]]:
    """Per-coordinate integer bounds containing every solution, from the
    vertices of the linear relaxation.  Requires a bounded relaxation."""
    verts = enumerate_vertices(inst.A, inst.b, inst.E, inst.f)
    if not verts:
        # empty relaxation: any empty box will do
        return [(0, -1)] * inst.dim
    box = []
    for i in range(inst.dim):
        vals = [v[i] for v in verts]
        box.append((math.ceil(min(vals)), math.floor(max(vals))))
    return box


def transformed_box(S, t: Sequence[int], box: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """An integer box containing the image of `box` under x -> S^-1 (x - t),
    by mapping all corners exactly."""
    mat = _matrix_of(S)
    from .linalg import invert_unimodular
    inv = invert_unimodular(mat)
    d = len(box)
    lo = [None] * d
    hi = [None] * d
    corners = [[]]
    for (l, h) in box:
        corners = [c + [v] for c in corners for v in (l, h)]
    for corner in corners:
        y = mat_vec(inv, [ci - ti for ci, ti in zip(corner, t)])
        for i, yi in enumerate(y):
            lo[i] = yi if lo[i] is None else min(lo[i], yi)
            hi[i] = yi if hi[i] is None else max(hi[i], yi)
    return [(int(l), int(h)) for l, h in zip(lo, hi)]


# ---------------------------------------------------------------------------
# integral feasibility oracle

def _ceil_div(a: int, b: int) -> int:
    # b > 0
    return -((-a) // b)


@dataclass
class _IntSystem:
    """Integer inequality rows over the free coordinates, with bookkeeping
    for the coordinates eliminated through unit-coefficient equalities."""

    dim: int
    free: list[int]                               # original index per free var
    rows: list[tuple[IntVec, int]]                # a . x_free <= b
    box: list[tuple[int, int]]                    # bounds per free var
    elim: list[tuple[int, int, dict[int, int]]]   # (orig var, const, {orig var: coeff})
    infeasible: bool = False


def _integerize(row: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int]:
    den = reduce(lcm, [x.denominator for x in row] + [rhs.denominator], 1)
    return [int(x * den) for x in row], int(rhs * den)


def _prepare_system(inst: ILPInstance, box: Sequence[tuple[int, int]]) -> _IntSystem:
    d = inst.dim
    ineqs = [_integerize(row, bb) for row, bb in zip(inst.A, inst.b)]
    eqs = [_integerize(row, ff) for row, ff in zip(inst.E, inst.f)]
    active = list(range(d))
    elim: list[tuple[int, int, dict[int, int]]] = []

    def substitute(rows_list, v, const, coeffs):
        for idx, (a, bb) in enumerate(rows_list):
            av = a[v]
            if av:
                a = list(a)
                bb -= av * const
                for j, cj in coeffs.items():
                    a[j] += av * cj
                a[v] = 0
                rows_list[idx] = (a, bb)

    while True:
        pick = None
        for ei, (a, ff) in enumerate(eqs):
            unit_vars = [v for v in active if abs(a[v]) == 1]
            if unit_vars:
                pick = (ei, unit_vars[-1])
                break
        if pick is None:
            break
        ei, v = pick
        a, ff = eqs.pop(ei)
        e_v = a[v]
        const = e_v * ff
        coeffs = {j: -e_v * a[j] for j in active if j != v and a[j]}
        substitute(ineqs, v, const, coeffs)
        substitute(eqs, v, const, coeffs)
        # the box bounds of the eliminated coordinate become rows
        lo_v, hi_v = box[v]
        upper = [0] * d
        for j, cj in coeffs.items():
            upper[j] = cj
        ineqs.append((list(upper), hi_v - const))
        ineqs.append(([-x for x in upper], const - lo_v))
        elim.append((v, const, coeffs))
        active.remove(v)

    # remaining equalities (no unit coefficient): exact as inequality pairs
    for a, ff in eqs:
        ineqs.append((list(a), ff))
        ineqs.append(([-x for x in a], -ff))

    sysm = _IntSystem(d, active, [], [box[v] for v in active], elim)
    for a, bb in ineqs:
        proj = tuple(a[v] for v in active)
        if any(a[v] for v in range(d) if v not in active):
            raise AssertionError("elimination left a dangling coefficient")
        if all(x == 0 for x in proj):
            if bb < 0:
                sysm.infeasible = True
        else:
            sysm.rows.append((proj, bb))
    return sysm


def _reconstruct(sysm: _IntSystem, values: dict[int, int]) -> IntVec:
    vals = dict(values)
    for v, const, coeffs in reversed(sysm.elim):
        vals[v] = const + sum(cj * vals[j] for j, cj in coeffs.items())
    return tuple(vals[i] for i in range(sysm.dim))


def _root_vertices(rows, box):
    m = len(box)
    A_ub = [list(a) for a, _ in rows]
    b_ub = [bb for _, bb in rows]
    for i, (lo, hi) in enumerate(box):
        e = [0] * m
        e[i] = 1
        A_ub.append(list(e))
        b_ub.append(hi)
        e = [0] * m
        e[i] = -1
        A_ub.append(e)
        b_ub.append(-lo)
    return enumerate_vertices(A_ub, b_ub)


def _polygon_halfplanes(hull):
    """Inequalities n.(X,Y) <= off for a CCW hull; degenerate hulls are
    handled by the caller."""
    planes = []
    k = len(hull)
    for i in range(k):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % k]
        # interior is to the left: (x2-x1)(Y-y1) - (y2-y1)(X-x1) >= 0
        nx, ny = (y2 - y1), -(x2 - x1)
        off = nx * x1 + ny * y1
        planes.append((nx, ny, off))
    return planes


def _slice_interval(hull, planes, t: Fraction) -> Optional[tuple[int, int]]:
    """Integer Y-range of the polygon at X = t."""
    if len(hull) == 1:
        x, y = hull[0]
        if x != t or y.denominator != 1:
            return None
        return (int(y), int(y))
    if len(hull) == 2:
        (x1, y1), (x2, y2) = hull
        if x1 == x2:
            if t != x1:
                return None
            lo, hi = min(y1, y2), max(y1, y2)
        else:
            if not (min(x1, x2) <= t <= max(x1, x2)):
                return None
            y = y1 + (y2 - y1) * (t - x1) / (x2 - x1)
            lo = hi = y
        lo_i = math.ceil(lo)
        hi_i = math.floor(hi)
        return (lo_i, hi_i) if lo_i <= hi_i else None
    lo = None
    hi = None
    for nx, ny, off in planes:
        rest = off - nx * t
        if ny == 0:
            if rest < 0:
                return None
        elif ny > 0:
            v = Fraction(rest, ny)
            hi = v if hi is None else min(hi, v)
        else:
            v = Fraction(rest, ny)
            lo = v if lo is None else max(lo, v)
    if lo is None or hi is None or lo > hi:
        return None
    lo_i = math.ceil(lo)
    hi_i = math.floor(hi)
    return (lo_i, hi_i) if lo_i <= hi_i else None


def _pick_scan_pair(verts, m: int) -> tuple[int, int]:
    """The coordinate pair whose vertex shadow has the smallest float area."""
    best = None
    for p in range(m):
        for q in range(p + 1, m):
            pts = {(float(v[p]), float(v[q])) for v in verts}
            if len(pts) < 3:
                area = 0.0
            else:
                arr = sorted(pts)
                area = _float_hull_area(arr)
            key = (area, p, q)
            if best is None or key < best:
                best = key
    return best[1], best[2]


def _float_hull_area(pts) -> float:
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return 0.0
    s = 0.0
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2.0


def _positively_spans_plane(dirs: list[tuple[int, int]]) -> bool:
    """Whether integer 2D vectors positively span R^2 (exact)."""
    import functools
    vs = [v for v in dirs if v != (0, 0)]
    if len(vs) < 3:
        return False

    def half(v):
        x, y = v
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cmp(u, v):
        hu, hv = half(u), half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = u[0] * v[1] - u[1] * v[0]
        return 0 if c == 0 else (-1 if c > 0 else 1)

    vs = sorted(vs, key=functools.cmp_to_key(cmp))
    # collapse equal directions
    uniq = [vs[0]]
    for v in vs[1:]:
        u = uniq[-1]
        if u[0] * v[1] - u[1] * v[0] == 0 and u[0] * v[0] + u[1] * v[1] > 0:
            continue
        uniq.append(v)
    if len(uniq) < 3:
        return False
    for i in range(len(uniq)):
        u = uniq[i]
        v = uniq[(i + 1) % len(uniq)]
        c = u[0] * v[1] - u[1] * v[0]
        if c < 0 or (c == 0 and u[0] * v[0] + u[1] * v[1] < 0):
            return False  # angular gap of pi or more
    return True


class _Budget:
    def __init__(self, limit: int):
        self.remaining = limit

    def spend(self, amount: int):
        self.remaining -= amount
        if self.remaining < 0:
            raise BudgetExceeded("feasibility search budget exhausted")


def brute_force_feasible(inst: ILPInstance, box: Optional[Sequence[tuple[int, int]]] = None,
                         budget: int = DEFAULT_ORACLE_BUDGET) -> Optional[IntVec]:
    """An integral solution of the instance inside the box, or None after a
    complete (pruned) enumeration proves there is none.

    The budget caps the number of integer candidates examined; exceeding it
    raises BudgetExceeded rather than returning a wrong answer.
    """
    if box is None:
        box = derive_box(inst)
    box = [(int(lo), int(hi)) for lo, hi in box]
    if len(box) != inst.dim:
        raise ILPError("box dimension mismatch")
    if any(lo > hi for lo, hi in box):
        return None
    sysm = _prepare_system(inst, box)
    if sysm.infeasible:
        return None
    values = _search_free(sysm, _Budget(budget))
    if values is None:
        return None
    x = _reconstruct(sysm, values)
    assert inst.satisfied_by(x), "oracle produced a non-solution"
    assert all(lo <= xi <= hi for xi, (lo, hi) in zip(x, box))
    return x


def _search_free(sysm: _IntSystem, budget: _Budget) -> Optional[dict[int, int]]:
    m = len(sysm.free)
    rows = sysm.rows
    box = sysm.box
    if m == 0:
        return {}
    verts = _root_vertices(rows, box)
    if not verts:
        return None
    tight = []
    for i in range(m):
        vals = [v[i] for v in verts]
        lo = max(box[i][0], math.ceil(min(vals)))
        hi = min(box[i][1], math.floor(max(vals)))
        if lo > hi:
            return None
        tight.append((lo, hi))
    box = tight

    if m == 1:
        return _scan_1d(sysm, rows, box, budget)
    if m == 2:
        return _scan_2d(sysm, rows, box, verts, budget)
    if m in (3, 4):
        return _scan_shadow(sysm, rows, box, verts, budget)
    # five or more free coordinates: branch on the narrowest one
    ranges = [(hi - lo, i) for i, (lo, hi) in enumerate(box)]
    _, pivot = min(ranges)
    orig = sysm.free[pivot]
    for t in range(box[pivot][0], box[pivot][1] + 1):
        budget.spend(1)
        sub_rows = []
        feasible = True
        for a, bb in rows:
            rest = tuple(a[j] for j in range(m) if j != pivot)
            bb2 = bb - a[pivot] * t
            if all(x == 0 for x in rest):
                if bb2 < 0:
                    feasible = False
                    break
            else:
                sub_rows.append((rest, bb2))
        if not feasible:
            continue
        sub = _IntSystem(sysm.dim,
                         [f for j, f in enumerate(sysm.free) if j != pivot],
                         sub_rows,
                         [box[j] for j in range(m) if j != pivot],
                         sysm.elim)
        res = _search_free(sub, budget)
        if res is not None:
            res[orig] = t
            return res
    return None


def _scan_1d(sysm, rows, box, budget) -> Optional[dict[int, int]]:
    lo, hi = box[0]
    for a, bb in rows:
        av = a[0]
        if av > 0:
            hi = min(hi, bb // av)
        elif av < 0:
            lo = max(lo, _ceil_div(-bb, -av))
        elif bb < 0:
            return None
    if lo > hi:
        return None
    budget.spend(1)
    return {sysm.free[0]: lo}


def _scan_2d(sysm, rows, box, verts, budget) -> Optional[dict[int, int]]:
    hull = convex_hull_2d([(v[0], v[1]) for v in verts])
    planes = _polygon_halfplanes(hull) if len(hull) >= 3 else []
    xs = [v[0] for v in verts]
    for t in range(math.ceil(min(xs)), math.floor(max(xs)) + 1):
        rng = _slice_interval(hull, planes, Fraction(t))
        if rng is None:
            continue
        qlo, qhi = rng
        budget.spend(qhi - qlo + 1)
        lo, hi = qlo, qhi
        for a, bb in rows:
            c = bb - a[0] * t
            aq = a[1]
            if aq > 0:
                hi = min(hi, c // aq)
            elif aq < 0:
                lo = max(lo, _ceil_div(-c, -aq))
            elif c < 0:
                lo = qhi + 1
                break
        if lo <= hi:
            return {sysm.free[0]: t, sysm.free[1]: lo}
    return None


_CHUNK = 1 << 19
_TINY = 1e-300


def _scan_shadow(sysm, rows, box, verts, budget) -> Optional[dict[int, int]]:
    m = len(sysm.free)
    p, q = _pick_scan_pair(verts, m)
    others = [j for j in range(m) if j not in (p, q)]
    hull = convex_hull_2d([(v[p], v[q]) for v in verts])
    planes = _polygon_halfplanes(hull) if len(hull) >= 3 else []
    xs = [v[p] for v in verts]
    tmin, tmax = math.ceil(min(xs)), math.floor(max(xs))
    if m == 3:
        return _scan3(sysm, rows, box, p, q, others[0], hull, planes, tmin, tmax, budget)
    return _scan4(sysm, rows, box, p, q, others[0], others[1], hull, planes,
                  tmin, tmax, budget)


def _scan3(sysm, rows, box, p, q, r, hull, planes, tmin, tmax, budget):
    tm = max(abs(tmin), abs(tmax), 1)
    qm = max(abs(box[q][0]), abs(box[q][1]), 1)
    worst = max((abs(bb) + abs(a[p]) * tm + abs(a[q]) * qm for a, bb in rows), default=0)
    use_numpy = worst < (1 << 60)
    rlo_box, rhi_box = box[r]
    for t in range(tmin, tmax + 1):
        rng = _slice_interval(hull, planes, Fraction(t))
        if rng is None:
            continue
        qlo, qhi = rng
        count = qhi - qlo + 1
        budget.spend(count)
        if use_numpy and count >= 16:
            T = np.arange(qlo, qhi + 1, dtype=np.int64)
            lo = np.full(count, rlo_box, dtype=np.int64)
            hi = np.full(count, rhi_box, dtype=np.int64)
            ok = np.ones(count, dtype=bool)
            for a, bb in rows:
                c = bb - a[p] * t - a[q] * T
                ar = a[r]
                if ar == 0:
                    ok &= c >= 0
                elif ar > 0:
                    np.minimum(hi, c // ar, out=hi)
                else:
                    np.maximum(lo, -(c // (-ar)), out=lo)
            ok &= lo <= hi
            idx = np.flatnonzero(ok)
            if idx.size:
                i = int(idx[0])
                return {sysm.free[p]: t, sysm.free[q]: qlo + i,
                        sysm.free[r]: int(lo[i])}
        else:
            for uq in range(qlo, qhi + 1):
                lo2, hi2 = rlo_box, rhi_box
                okf = True
                for a, bb in rows:
                    c = bb - a[p] * t - a[q] * uq
                    ar = a[r]
                    if ar == 0:
                        if c < 0:
                            okf = False
                            break
                    elif ar > 0:
                        hi2 = min(hi2, c // ar)
                    else:
                        lo2 = max(lo2, -(c // (-ar)))
                if okf and lo2 <= hi2:
                    return {sysm.free[p]: t, sysm.free[q]: uq, sysm.free[r]: lo2}
    return None


def _exact_slice_check(rows, box, p, q, r, s, t, uq):
    """Exact search for integers (x_r, x_s) in the slice at (x_p, x_q) = (t, uq)."""
    from itertools import combinations as _comb
    sub = []
    for a, bb in rows:
        c = bb - a[p] * t - a[q] * uq
        ar, as_ = a[r], a[s]
        if ar == 0 and as_ == 0:
            if c < 0:
                return None
        else:
            sub.append((ar, as_, c))
    sub.append((1, 0, box[r][1]))
    sub.append((-1, 0, -box[r][0]))
    sub.append((0, 1, box[s][1]))
    sub.append((0, -1, -box[s][0]))
    rlo = rhi = None
    for (a1, b1, c1), (a2, b2, c2) in _comb(sub, 2):
        D = a1 * b2 - a2 * b1
        if D == 0:
            continue
        xr = Fraction(c1 * b2 - c2 * b1, D)
        xsv = Fraction(a1 * c2 - a2 * c1, D)
        if all(aa * xr + bb2 * xsv <= cc for aa, bb2, cc in sub):
            rlo = xr if rlo is None else min(rlo, xr)
            rhi = xr if rhi is None else max(rhi, xr)
    if rlo is None:
        return None
    for xr in range(math.ceil(rlo), math.floor(rhi) + 1):
        slo, shi = None, None
        ok = True
        for (aa, bb2, cc) in sub:
            c2 = cc - aa * xr
            if bb2 == 0:
                if c2 < 0:
                    ok = False
                    break
            elif bb2 > 0:
                v = c2 // bb2
                shi = v if shi is None else min(shi, v)
            else:
                v = -(c2 // (-bb2))
                slo = v if slo is None else max(slo, v)
        if not ok:
            continue
        if slo is None or shi is None:
            raise AssertionError("unbounded slice despite box rows")
        if slo <= shi:
            return (xr, slo)
    return None


def _scan4(sysm, rows, box, p, q, r, s, hull, planes, tmin, tmax, budget):
    slice_rows = [(a, bb) for a, bb in rows if a[r] or a[s]]
    frows = list(slice_rows)

    def unit_row(pos, sign, rhs):
        a = [0, 0, 0, 0]
        a[pos] = sign
        return (tuple(a), rhs)

    if not _positively_spans_plane([(a[r], a[s]) for a, _ in frows]):
        frows += [unit_row(r, 1, box[r][1]), unit_row(r, -1, -box[r][0]),
                  unit_row(s, 1, box[s][1]), unit_row(s, -1, -box[s][0])]
    # shrink to a still-spanning subset: the filter polygon only needs to be
    # an outer approximation of each slice, and fewer rows mean fewer vertex
    # pairs in the hot loop
    keep = list(frows)
    for cand in list(reversed(keep)):
        trial = [row for row in keep if row is not cand]
        if _positively_spans_plane([(a[r], a[s]) for a, _ in trial]):
            keep = trial
    frows = keep
    pairs = []
    for i in range(len(frows)):
        for j in range(i + 1, len(frows)):
            ai, _ = frows[i]
            aj, _ = frows[j]
            D = ai[r] * aj[s] - aj[r] * ai[s]
            if D != 0:
                pairs.append((i, j, D))

    tm = max(abs(tmin), abs(tmax), 1)
    qm = max(abs(box[q][0]), abs(box[q][1]), 1)
    worst = max((abs(bb) + abs(a[p]) * tm + abs(a[q]) * qm for a, bb in frows), default=0)
    float_safe = worst < (1 << 52)

    def exact_check(t, uq):
        hit = _exact_slice_check(rows, box, p, q, r, s, t, uq)
        if hit is None:
            return None
        return {sysm.free[p]: t, sysm.free[q]: uq,
                sysm.free[r]: hit[0], sysm.free[s]: hit[1]}

    segments = []  # (t, qlo, qhi) accumulated until a chunk is full
    size = 0
    for t in range(tmin, tmax + 1):
        rng = _slice_interval(hull, planes, Fraction(t))
        if rng is None:
            continue
        qlo, qhi = rng
        budget.spend(qhi - qlo + 1)
        if not float_safe:
            for uq in range(qlo, qhi + 1):
                res = exact_check(t, uq)
                if res is not None:
                    return res
            continue
        segments.append((t, qlo, qhi))
        size += qhi - qlo + 1
        if size >= _CHUNK:
            res = _process_chunk4(segments, frows, pairs, p, q, r, s, exact_check)
            if res is not None:
                return res
            segments = []
            size = 0
    if segments:
        res = _process_chunk4(segments, frows, pairs, p, q, r, s, exact_check)
        if res is not None:
            return res
    return None


def _process_chunk4(segments, frows, pairs, p, q, r, s, exact_check):
    """Float screen for the remaining two coordinates over a batch of
    (t, u) scan pairs.

    Every arithmetic input is an integer below 2^52, hence exact in float64;
    products carry relative error below a few ulps.  All comparisons are
    slackened by scalar margins derived from a magnitude envelope, so a pair
    is only pruned when provably no integers fit; everything else goes to
    the exact checker.  False positives cost time, false negatives cannot
    occur.
    """
    u = MACHINE_EPS
    Tp = np.concatenate([np.full(hi - lo + 1, t, dtype=np.int64)
                         for t, lo, hi in segments])
    Tq = np.concatenate([np.arange(lo, hi + 1, dtype=np.int64)
                         for _, lo, hi in segments])
    n = len(Tp)
    C = []
    cmax = 0.0
    amax = 1.0
    for a, bb in frows:
        arr = (bb - a[p] * Tp - a[q] * Tq).astype(np.float64)
        C.append(arr)
        cmax = max(cmax, float(np.abs(arr).max()) if n else 0.0)
        amax = max(amax, abs(a[r]), abs(a[s]))
    nmax = 2.0 * amax * cmax + 1.0          # |Nr|, |Ns| envelope
    lo_r = np.full(n, np.inf)
    hi_r = np.full(n, -np.inf)
    lo_s = np.full(n, np.inf)
    hi_s = np.full(n, -np.inf)
    anyfeas = np.zeros(n, dtype=bool)
    err_max = _TINY
    for (i, j, D) in pairs:
        ai, _ = frows[i]
        aj, _ = frows[j]
        air, ais = ai[r], ai[s]
        ajr, ajs = aj[r], aj[s]
        Nr = C[i] * ajs - C[j] * ais
        Ns = air * C[j] - ajr * C[i]
        feas = np.ones(n, dtype=bool)
        for l, (al, cl) in enumerate(frows):
            if l == i or l == j:
                continue
            alr, als = al[r], al[s]
            if alr == 0 and als == 0:
                continue
            # scalar slack covering the float error of both sides
            margin = 16 * u * (abs(alr) * nmax + abs(als) * nmax + cmax * abs(D)) + _TINY
            lhs = alr * Nr + als * Ns
            rhs = C[l] * D
            if D > 0:
                feas &= lhs <= rhs + margin
            else:
                feas &= lhs >= rhs - margin
        err_max = max(err_max, 16 * u * nmax / abs(D))  # vertex coordinate slack
        xr = Nr * (1.0 / D)
        xsv = Ns * (1.0 / D)
        np.minimum(lo_r, np.where(feas, xr, np.inf), out=lo_r)
        np.maximum(hi_r, np.where(feas, xr, -np.inf), out=hi_r)
        np.minimum(lo_s, np.where(feas, xsv, np.inf), out=lo_s)
        np.maximum(hi_s, np.where(feas, xsv, -np.inf), out=hi_s)
        anyfeas |= feas
    lo_r -= err_max
    hi_r += err_max
    lo_s -= err_max
    hi_s += err_max
    flags = anyfeas & (np.floor(hi_r) >= np.ceil(lo_r)) & (np.floor(hi_s) >= np.ceil(lo_s))
    for idx in np.flatnonzero(flags):
        res = exact_check(int(Tp[idx]), int(Tq[idx]))
        if res is not None:
            return res
    return None
