"""Exact rational orbit polytope geometry.

An orbit polytope is the convex hull of the orbit of an integer point under
a permutation group.  Membership is decided by exact LP on the convex
combination formulation; integral points are enumerated over the bounding
box with interval propagation against the exact facet description; facets
come from brute force over vertex subsets (small ambient dimension only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional, Sequence

from .errors import BudgetExceeded, DimensionTooLarge
from .exactlp import convex_combination
from .groups import PermGroup, orbit, is_fixed_vector
from .linalg import IntVec, dot, norm_sq, nullspace, primitive_int_vector, rank

DEFAULT_BOX_CAP = 10 ** 8
FACET_DIMENSION_LIMIT = 8


@dataclass
class OrbitPolytope:
    """Convex hull of a group orbit of an integer base point."""

    group: PermGroup
    base: IntVec
    vertices: tuple[IntVec, ...]
    layer: Optional[int]
    _facets: Optional[list[tuple[IntVec, int]]] = field(default=None, repr=False)
    _hull: Optional[list[tuple[IntVec, int]]] = field(default=None, repr=False)

    @classmethod
    def of(cls, group: PermGroup, base: Sequence[int]) -> "OrbitPolytope":
        base = tuple(base)
        verts = orbit(group, base)
        layer = sum(base) if group.is_transitive() else None
        return cls(group, base, verts, layer)

    @property
    def dim(self) -> int:
        return self.group.degree

    def affine_dim(self) -> int:
        v0 = self.vertices[0]
        diffs = [tuple(v[i] - v0[i] for i in range(self.dim)) for v in self.vertices[1:]]
        return rank(diffs) if diffs else 0

    def hull_equations(self) -> list[tuple[IntVec, int]]:
        """Equations a.x = b cutting out the affine hull, primitive integer a."""
        if self._hull is None:
            v0 = self.vertices[0]
            diffs = [tuple(v[i] - v0[i] for i in range(self.dim)) for v in self.vertices[1:]]
            eqs = []
            for a in nullspace(diffs) if diffs else nullspace([tuple([0] * self.dim)]):
                ai = primitive_int_vector(a)
                eqs.append((ai, dot(ai, v0)))
            self._hull = eqs
        return self._hull

    def facets(self) -> list[tuple[IntVec, int]]:
        """Facet inequalities a.x <= b valid on the polytope.

        Normals are primitive integral and orthogonal to the affine hull
        normals, which makes them unique up to nothing at all; together with
        hull_equations they cut out exactly the polytope.
        """
        if self._facets is not None:
            return self._facets
        if self.dim > FACET_DIMENSION_LIMIT:
            raise DimensionTooLarge(
                f"facet enumeration is brute force and limited to dimension {FACET_DIMENSION_LIMIT}")
        adim = self.affine_dim()
        if adim == 0:
            self._facets = []
            return self._facets
        hull_normals = [a for a, _ in self.hull_equations()]
        found: dict[IntVec, int] = {}
        for subset in combinations(self.vertices, adim):
            s0 = subset[0]
            rows = [tuple(s[i] - s0[i] for i in range(self.dim)) for s in subset[1:]]
            rows += hull_normals
            ns = nullspace(rows)
            if len(ns) != 1:
                continue
            a = primitive_int_vector(ns[0])
            b = dot(a, s0)
            values = [dot(a, v) for v in self.vertices]
            if max(values) > b:
                if min(values) < b:
                    continue
                a = tuple(-x for x in a)
                b = -b
            if a not in found:
                found[a] = b
        self._facets = sorted(found.items())
        return self._facets

    def max_vertex_norm_sq(self) -> int:
        return max(norm_sq(v) for v in self.vertices)

    def bounding_box(self) -> list[tuple[int, int]]:
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices))
                for i in range(self.dim)]


def orbit_polytope(group: PermGroup, z: Sequence[int]) -> OrbitPolytope:
    return OrbitPolytope.of(group, z)


def contains(poly: OrbitPolytope, x: Sequence) -> bool:
    """Exact membership of a rational point in the orbit polytope."""
    if len(x) != poly.dim:
        raise ValueError("dimension mismatch")
    xs = tuple(Fraction(v) for v in x)
    if poly.layer is not None and sum(xs) != poly.layer:
        return False
    return convex_combination(poly.vertices, xs) is not None


def _interval_isqrt(m: int) -> int:
    return math.isqrt(m) if m >= 0 else -1


def integral_points_iter(poly: OrbitPolytope, box_volume_cap: int = DEFAULT_BOX_CAP,
                         ) -> Iterator[IntVec]:
    """Lazily enumerate the lattice points of the polytope in lex order.

    Uses the exact facet description with per-coordinate interval
    propagation, plus the norm bound |x|^2 <= max vertex |v|^2 (the squared
    norm is convex, so vertices maximize it).
    """
    d = poly.dim
    box = poly.bounding_box()
    volume = 1
    for lo, hi in box:
        volume *= hi - lo + 1
        if volume > box_volume_cap:
            raise BudgetExceeded(
                f"bounding box volume exceeds the cap of {box_volume_cap}")
    if len(poly.vertices) == 1:
        yield poly.vertices[0]
        return

    eqs = poly.hull_equations()
    ineqs = poly.facets()
    rows = [(a, b, 0) for a, b in eqs] + [(a, b, 1) for a, b in ineqs]
    nsq_cap = poly.max_vertex_norm_sq()

    # suffix extremes of a.x over the box, for positions >= c
    suffix = []
    for a, _, _ in rows:
        lo_suf = [0] * (d + 1)
        hi_suf = [0] * (d + 1)
        for c in range(d - 1, -1, -1):
            contrib = (a[c] * box[c][0], a[c] * box[c][1])
            lo_suf[c] = lo_suf[c + 1] + min(contrib)
            hi_suf[c] = hi_suf[c + 1] + max(contrib)
        suffix.append((lo_suf, hi_suf))

    point = [0] * d

    def rec(c: int, partial: list[int], used_norm: int) -> Iterator[IntVec]:
        if c == d:
            yield tuple(point)
            return
        lo, hi = box[c]
        r = _interval_isqrt(nsq_cap - used_norm)
        lo = max(lo, -r)
        hi = min(hi, r)
        # interval propagation per row
        for idx, (a, b, kind) in enumerate(rows):
            ac = a[c]
            s = partial[idx]
            lo_suf, hi_suf = suffix[idx]
            rest_lo, rest_hi = lo_suf[c + 1], hi_suf[c + 1]
            if kind == 0:
                # s + ac*x + tail = b with tail in [rest_lo, rest_hi]
                if ac == 0:
                    if s + rest_lo > b or s + rest_hi < b:
                        return
                    continue
                lo_n, hi_n = b - s - rest_hi, b - s - rest_lo
            else:
                # s + ac*x + tail <= b
                if ac == 0:
                    if s + rest_lo > b:
                        return
                    continue
                lo_n, hi_n = None, b - s - rest_lo
            if ac > 0:
                if hi_n is not None:
                    hi = min(hi, hi_n // ac)
                if lo_n is not None:
                    lo = max(lo, -((-lo_n) // ac))
            else:
                if hi_n is not None:
                    lo = max(lo, -(hi_n // -ac))
                if lo_n is not None:
                    hi = min(hi, (-lo_n) // -ac)
            if lo > hi:
                return
        for x in range(lo, hi + 1):
            point[c] = x
            nxt = [partial[idx] + rows[idx][0][c] * x for idx in range(len(rows))]
            if c == d - 1:
                ok = all(v == b if kind == 0 else v <= b
                         for v, (_, b, kind) in zip(nxt, rows))
                if ok:
                    yield tuple(point)
            else:
                yield from rec(c + 1, nxt, used_norm + x * x)

    yield from rec(0, [0] * len(rows), 0)


def integral_points(poly: OrbitPolytope, box_volume_cap: int = DEFAULT_BOX_CAP) -> list[IntVec]:
    """All lattice points of the polytope, sorted lexicographically."""
    return list(integral_points_iter(poly, box_volume_cap))


def _midpoint_witness(poly: OrbitPolytope) -> Optional[IntVec]:
    """A non-vertex lattice point that is the midpoint of two vertices, if any."""
    vset = set(poly.vertices)
    for v, w in combinations(poly.vertices, 2):
        if all((a + b) % 2 == 0 for a, b in zip(v, w)):
            m = tuple((a + b) // 2 for a, b in zip(v, w))
            if m not in vset:
                return m
    return None


def is_core_point(group: PermGroup, z: Sequence[int], box_volume_cap: int = DEFAULT_BOX_CAP,
                  auto_reduce: bool = True) -> bool:
    """Whether the orbit polytope of z contains no lattice points besides
    the orbit itself.

    Points whose bounding box is too large for direct enumeration are first
    replaced by an equivalent point via an exact normalizer move (which
    preserves core point status); this is only available for the cyclic
    shift groups.
    """
    z = tuple(z)
    if len(z) != group.degree:
        raise ValueError("dimension mismatch")
    if is_fixed_vector(group, z):
        return True
    poly = OrbitPolytope.of(group, z)
    if _midpoint_witness(poly) is not None:
        return False
    box = poly.bounding_box()
    volume = 1
    for lo, hi in box:
        volume *= hi - lo + 1
    if volume > box_volume_cap:
        if not (auto_reduce and group.cyclic_shift_power() is not None):
            raise BudgetExceeded(
                f"bounding box volume {volume} exceeds the cap; no reduction available")
        from .balance import reduce_min_norm
        from .order_units import normalizer_generators
        gens = normalizer_generators(group.degree)
        reduced, move = reduce_min_norm(z, gens, radius=2)
        if norm_sq(reduced) >= norm_sq(z):
            raise BudgetExceeded("reduction did not shrink the point; giving up")
        return is_core_point(group, reduced, box_volume_cap, auto_reduce=False)
    vset = set(poly.vertices)
    for p in integral_points_iter(poly, box_volume_cap):
        if p not in vset:
            return False
    return True
