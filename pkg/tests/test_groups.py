import random

import pytest
from fractions import Fraction

from corepoints.groups import (GroupError, PermGroup, act, is_fixed_vector,
                               layer_of, orbit, parse_cycles, perm_compose,
                               perm_inverse, project_fixed)


def test_parse_cycles():
    assert parse_cycles("(1,2,3,4,5)") == (1, 2, 3, 4, 0)
    assert parse_cycles("(1,4)(2,3)", degree=5) == (3, 2, 1, 0, 4)
    assert parse_cycles("(2,3,5,4)", degree=5) == (0, 2, 4, 1, 3)
    with pytest.raises(GroupError):
        parse_cycles("(1,1)")


def test_act_identity():
    ident = tuple(range(3))
    assert act(ident, (1, 2, 3)) == (1, 2, 3)


def test_act_shift_moves_basis_vector():
    g = parse_cycles("(1,2,3,4,5)")
    assert act(g, (1, 0, 0, 0, 0)) == (0, 1, 0, 0, 0)


def test_act_order_of_cycle():
    g = parse_cycles("(1,2,3,4,5)")
    z = (3, -1, 4, 1, -5)
    w = z
    for _ in range(5):
        w = act(g, w)
    assert w == z


def test_act_is_group_action():
    rng = random.Random(7)
    d = 6
    for _ in range(50):
        g = tuple(rng.sample(range(d), d))
        h = tuple(rng.sample(range(d), d))
        z = tuple(rng.randint(-5, 5) for _ in range(d))
        assert act(g, act(h, z)) == act(perm_compose(g, h), z)
        assert act(perm_inverse(g), act(g, z)) == z


def test_orbit_c5_basis():
    C5 = PermGroup.cyclic(5)
    orb = orbit(C5, (1, 0, 0, 0, 0))
    assert len(orb) == 5
    assert (0, 0, 1, 0, 0) in orb


def test_orbit_s3_with_stabilizer():
    S3 = PermGroup.symmetric(3)
    assert set(orbit(S3, (1, 1, 0))) == {(1, 1, 0), (1, 0, 1), (0, 1, 1)}


def test_orbit_fixed_point():
    C5 = PermGroup.cyclic(5)
    assert orbit(C5, (1, 1, 1, 1, 1)) == ((1, 1, 1, 1, 1),)


def test_orbit_invariant_under_generators():
    C5 = PermGroup.cyclic(5)
    z = (2, -1, 0, 3, 1)
    orb = set(orbit(C5, z))
    for g in C5.generators:
        assert set(orbit(C5, act(g, z))) == orb


def test_elements_and_order():
    assert PermGroup.cyclic(5).order() == 5
    assert PermGroup.symmetric(4).order() == 24
    assert PermGroup.dihedral(5).order() == 10
    assert PermGroup.trivial(3).order() == 1


def test_element_cap():
    g = PermGroup(6, PermGroup.symmetric(6).generators, element_cap=100)
    with pytest.raises(GroupError):
        g.elements()


def test_project_fixed_basis_vector():
    C5 = PermGroup.cyclic(5)
    assert project_fixed(C5, (1, 0, 0, 0, 0)) == (Fraction(1, 5),) * 5


def test_project_fixed_fixed_vector():
    for G in (PermGroup.cyclic(4), PermGroup.symmetric(3)):
        ones = (1,) * G.degree
        assert project_fixed(G, ones) == tuple(Fraction(1) for _ in ones)


def test_project_fixed_zero_sum():
    C4 = PermGroup.cyclic(4)
    assert project_fixed(C4, (1, -1, 1, -1)) == (Fraction(0),) * 4


def test_project_fixed_idempotent_and_equivariant():
    rng = random.Random(11)
    G = PermGroup.dihedral(6)
    for _ in range(20):
        z = tuple(rng.randint(-9, 9) for _ in range(6))
        p = project_fixed(G, z)
        assert project_fixed(G, p) == p
        for g in G.generators:
            assert act(g, p) == p


def test_project_fixed_nontransitive():
    # two coordinate orbits: average within each block
    G = PermGroup.from_generators([(1, 0, 2, 3)], degree=4)
    assert project_fixed(G, (1, 2, 5, 7)) == (
        Fraction(3, 2), Fraction(3, 2), Fraction(5), Fraction(7))


def test_layer_of():
    C5 = PermGroup.cyclic(5)
    assert layer_of(C5, (1, 0, 0, 0, 0)) == 1
    assert layer_of(C5, (1, 1, 1, 0, -2)) == 1
    assert layer_of(C5, (2, 1, 1, -1, -1)) == 2
    for g in C5.generators:
        assert layer_of(C5, act(g, (3, -2, 4, 0, 1))) == layer_of(C5, (3, -2, 4, 0, 1))


def test_layer_rejects_nontransitive():
    G = PermGroup.from_generators([(1, 0, 2, 3)], degree=4)
    with pytest.raises(GroupError):
        layer_of(G, (1, 1, 1, 1))


def test_json_round_trip():
    g = PermGroup.from_json('{"degree": 5, "generators": [[1,2,3,4,0]]}')
    assert g.degree == 5
    assert g.order() == 5
    assert PermGroup.from_json(g.to_json()) == g


def test_is_fixed_vector():
    C5 = PermGroup.cyclic(5)
    assert is_fixed_vector(C5, (2, 2, 2, 2, 2))
    assert not is_fixed_vector(C5, (1, 2, 2, 2, 2))
