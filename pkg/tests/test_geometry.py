import random
from fractions import Fraction
from itertools import combinations, product

import pytest

from corepoints.errors import BudgetExceeded
from corepoints.exactlp import convex_combination
from corepoints.geometry import (OrbitPolytope, contains, integral_points,
                                 integral_points_iter, is_core_point)
from corepoints.groups import PermGroup, act, orbit
from corepoints.linalg import dot


C5 = PermGroup.cyclic(5)
S3 = PermGroup.symmetric(3)


def brute_membership(vertices, x):
    """Independent membership oracle: barycentric solve over all affinely
    spanning subsets (Caratheodory)."""
    d = len(x)
    for k in range(1, d + 2):
        for sub in combinations(vertices, k):
            lam = convex_combination(sub, x)
            if lam is not None:
                return True
    return False


def test_contains_barycenter_and_vertices():
    P = OrbitPolytope.of(C5, (1, 0, 0, 0, 0))
    assert contains(P, (Fraction(1, 5),) * 5)
    assert contains(P, (1, 0, 0, 0, 0))
    assert not contains(P, (2, 0, 0, 0, -1))


def test_contains_matches_brute_oracle():
    rng = random.Random(31)
    P = OrbitPolytope.of(C5, (2, 0, 1, -1, -1))
    for _ in range(25):
        x = tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5))
        assert contains(P, x) == brute_membership(P.vertices, x)


def test_contains_group_invariance():
    rng = random.Random(13)
    P = OrbitPolytope.of(C5, (1, 1, 0, 0, -1))
    g = C5.generators[0]
    for _ in range(20):
        x = tuple(Fraction(rng.randint(-3, 3), 2) for _ in range(5))
        assert contains(P, x) == contains(P, act(g, x))


def test_integral_points_simplex():
    # brute force oracle: the 0/1 box in the layer, exact simplex membership
    P = OrbitPolytope.of(C5, (1, 0, 0, 0, 0))
    expected = sorted(v for v in product((0, 1), repeat=5)
                      if sum(v) == 1)
    assert integral_points(P) == expected


def test_integral_points_permutohedron():
    # (2,1,0) under Sym(3): six vertices plus the integral barycenter
    P = OrbitPolytope.of(S3, (2, 1, 0))
    pts = integral_points(P)
    brute = sorted(x for x in product(range(0, 3), repeat=3)
                   if sum(x) == 3 and brute_membership(P.vertices, x))
    assert pts == brute
    assert tuple(sorted(pts)) == tuple(sorted(set(P.vertices) | {(1, 1, 1)}))


def test_integral_points_fixed_point():
    P = OrbitPolytope.of(C5, (1, 1, 1, 1, 1))
    assert integral_points(P) == [(1, 1, 1, 1, 1)]


def test_integral_points_sorted_lexicographically():
    P = OrbitPolytope.of(S3, (3, 1, -1))
    pts = integral_points(P)
    assert pts == sorted(pts)


def test_facets_simplex():
    P = OrbitPolytope.of(C5, (1, 0, 0, 0, 0))
    assert P.hull_equations() == [((1, 1, 1, 1, 1), 1)]
    facets = P.facets()
    assert len(facets) == 5
    # each facet is x_i >= 0 modulo the layer equation
    for a, b in facets:
        assert sum(a) == 0
        for v in P.vertices:
            assert dot(a, v) <= b
    # the facet system together with the hull equation cuts out the simplex
    assert all(min(dot(a, v) for v in P.vertices) < b for a, b in facets)


def test_facets_degree2_segment():
    C2 = PermGroup.cyclic(2)
    P = OrbitPolytope.of(C2, (1, 0))
    assert P.hull_equations() == [((1, 1), 1)]
    facets = P.facets()
    assert len(facets) == 2
    for a, b in facets:
        vals = [dot(a, v) for v in P.vertices]
        assert max(vals) == b and min(vals) < b


def test_facets_tightness():
    P = OrbitPolytope.of(C5, (1, 1, 0, 0, -1))
    adim = P.affine_dim()
    for a, b in P.facets():
        tight = [v for v in P.vertices if dot(a, v) == b]
        assert len(tight) >= adim


def test_facets_cut_out_polytope():
    # every lattice point of the box satisfying hull+facets must be inside
    P = OrbitPolytope.of(S3, (2, 1, 0))
    eqs = P.hull_equations()
    facets = P.facets()
    for x in product(range(-1, 4), repeat=3):
        in_h = (all(dot(a, x) == b for a, b in eqs)
                and all(dot(a, x) <= b for a, b in facets))
        assert in_h == brute_membership(P.vertices, x)


def test_section6_facet_normals():
    # the flagship anchor: facets of the orbit polytope of U^10 (1,1,1,0,-2)
    from corepoints.order_units import gr_mul
    u10 = (1, 0, 0, 0, 0)
    for _ in range(10):
        u10 = gr_mul(u10, (-1, 1, 0, 0, 1))
    z10 = gr_mul(u10, (1, 1, 1, 0, -2))
    assert z10 == (12816, -7479, -714, 8635, -13257)
    P = OrbitPolytope.of(C5, z10)
    target = (515161, 18376, -503804, -329744, 300011)
    shifts = {tuple(target[(j - i) % 5] for j in range(5)) for i in range(5)}
    assert {a for a, _ in P.facets()} == shifts
    assert {b for _, b in P.facets()} == {61}


def test_is_core_point_paper_examples():
    assert is_core_point(C5, (1, 1, 1, 0, -2))
    assert not is_core_point(S3, (2, 1, 0))
    for m in range(4):
        assert is_core_point(PermGroup.cyclic(4), (1 + m, -m, m, -m))


def test_trivial_core_points():
    assert is_core_point(C5, (3, 3, 3, 3, 3))
    assert is_core_point(S3, (0, 0, 0))


def test_core_point_01_vectors_sym():
    # all 0/1 vectors are core points for Sym(d), d <= 5
    for d in (3, 4, 5):
        G = PermGroup.symmetric(d)
        for k in range(d + 1):
            z = tuple([1] * k + [0] * (d - k))
            assert is_core_point(G, z)


def test_is_core_point_auto_reduce():
    # a needle point far outside the direct enumeration budget
    from corepoints.order_units import gr_mul
    u10 = (1, 0, 0, 0, 0)
    for _ in range(10):
        u10 = gr_mul(u10, (-1, 1, 0, 0, 1))
    z10 = gr_mul(u10, (1, 1, 1, 0, -2))
    assert is_core_point(C5, z10)
    # and a non-core needle: (2,0,0,0,0) has integral edge midpoints
    assert not is_core_point(C5, (2, 0, 0, 0, 0))
    w = gr_mul(u10, (2, 0, 0, 0, 0))
    assert not is_core_point(C5, w)


def test_is_core_point_budget_error_without_reduction():
    z = (10 ** 5, 0, 0, 0, -10 ** 5 + 1)
    with pytest.raises(BudgetExceeded):
        is_core_point(C5, z, box_volume_cap=10 ** 4, auto_reduce=False)


def test_integral_points_budget():
    P = OrbitPolytope.of(C5, (50, 0, 0, 0, -49))
    with pytest.raises(BudgetExceeded):
        integral_points(P, box_volume_cap=1000)
