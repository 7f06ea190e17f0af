import math
import random

import pytest

from corepoints.groups import PermGroup, act
from corepoints.linalg import norm_sq
from corepoints.repdecomp import (cyclic_components, galois_classes,
                                  irrational_components, is_qi_group,
                                  normalizer_finite, projection_norms)


def test_components_n5():
    comps = cyclic_components(5)
    assert [c.frequency_class for c in comps] == [(0,), (1, 4), (2, 3)]
    assert [c.order for c in comps] == [1, 5, 5]
    assert [c.rational for c in comps] == [True, False, False]
    assert sum(c.real_dimension for c in comps) == 5


def test_components_n8():
    # orders 1, 8, 4, 8, 2; the two order-8 classes are the irrational pair
    comps = cyclic_components(8)
    assert [c.order for c in comps] == [1, 8, 4, 8, 2]
    assert [c.rational for c in comps] == [True, False, True, False, True]
    assert [c.real_dimension for c in comps] == [1, 2, 2, 2, 1]
    assert len(galois_classes(8)[8]) == 2


def test_components_n1():
    comps = cyclic_components(1)
    assert len(comps) == 1 and comps[0].is_fixed_space


def test_components_dimensions_sum():
    for n in range(1, 26):
        assert sum(c.real_dimension for c in cyclic_components(n)) == n


def test_prime_component_count():
    # (p-1)/2 irrational planes for odd primes
    for p in (3, 5, 7, 11, 13):
        comps = irrational_components(p)
        if p == 3:
            assert len(comps) == 0  # order 3 is rational
        else:
            assert len(comps) == (p - 1) // 2


def test_projection_norms_fixed_vector():
    sp = projection_norms((1, 1, 1, 1, 1))
    assert sp.fixed_norm == 5
    assert all(abs(x) <= sp.err_bound for x in sp.component_norms)


def test_projection_norms_basis_vector():
    # |zhat_j| = 1 for every j, so each 2-plane carries 2/5
    from fractions import Fraction
    sp = projection_norms((1, 0, 0, 0, 0))
    assert sp.fixed_norm == Fraction(1, 5)
    for x in sp.component_norms:
        assert abs(x - 0.4) <= 1e-12


def test_projection_norms_alternating():
    sp = projection_norms((1, -1, 1, -1))
    by_freq = sp.norms_by_frequency()
    assert abs(by_freq[2] - 4.0) <= 1e-12
    assert abs(by_freq[1]) <= 1e-12
    assert sp.fixed_norm == 0


def test_parseval_random():
    rng = random.Random(2024)
    for _ in range(300):
        n = rng.randint(2, 16)
        z = tuple(rng.randint(-50, 50) for _ in range(n))
        sp = projection_norms(z)
        total = float(sp.fixed_norm) + sum(sp.component_norms)
        assert abs(total - norm_sq(z)) <= 2 * sp.err_bound + 1e-9
        assert all(x >= -e for x, e in zip(sp.component_norms, sp.component_errs))


def test_projection_norms_invariant_under_action():
    rng = random.Random(5)
    C7 = PermGroup.cyclic(7)
    g = C7.generators[0]
    for _ in range(30):
        z = tuple(rng.randint(-20, 20) for _ in range(7))
        a = projection_norms(z).component_norms
        b = projection_norms(act(g, z)).component_norms
        assert all(math.isclose(x, y, rel_tol=1e-9, abs_tol=1e-9) for x, y in zip(a, b))


def test_normalizer_finite():
    finite = {n for n in range(1, 31) if normalizer_finite(n)}
    assert finite == {1, 2, 3, 4, 6}


def test_qi_prime_cyclic():
    assert is_qi_group(PermGroup.cyclic(5))
    assert is_qi_group(PermGroup.cyclic(7))
    assert is_qi_group(PermGroup.cyclic(3))


def test_qi_dihedral_5():
    assert is_qi_group(PermGroup.dihedral(5))


def test_qi_c4_false():
    assert not is_qi_group(PermGroup.cyclic(4))


def test_qi_c6_c8_false():
    assert not is_qi_group(PermGroup.cyclic(6))
    assert not is_qi_group(PermGroup.cyclic(8))


def test_qi_symmetric():
    # 2-homogeneous: the complement of the fixed space is irreducible
    assert is_qi_group(PermGroup.symmetric(3))
    assert is_qi_group(PermGroup.symmetric(4))


def test_qi_requires_transitive():
    from corepoints.groups import GroupError
    G = PermGroup.from_generators([(1, 0, 2, 3)], degree=4)
    with pytest.raises(GroupError):
        is_qi_group(G)
