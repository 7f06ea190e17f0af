"""Enumeration of core points up to normalizer equivalence, layer by layer,
for the cyclic shift groups of prime degree.

The sweep covers one layer of the integer lattice inside an exact norm
ball; each candidate is reduced to a canonical class representative by
balancing, bounded unit exploration and torsion moves.  Canonical forms
only ever merge points connected by exact witness moves, so distinct
reported classes are genuinely verified-distinct members; completeness of
the merging rests on the exploration radius (configurable, default 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .balance import BalanceError, LogLattice, balance_point, build_log_lattice
from .errors import BudgetExceeded
from .geometry import is_core_point
from .groups import PermGroup, act, GroupError
from .linalg import IntVec, norm_sq
from .order_units import (EquivalenceMove, UnitElement, _normalize_translation,
                          identity_unit, normalizer_torsion, normalizer_generators)

DEFAULT_C_CONST = Fraction(48, 5)


@dataclass
class CoreClass:
    """One normalizer equivalence class of core points."""

    canonical: IntVec
    layer: int
    norm_sq: int
    witnesses: list[tuple[IntVec, EquivalenceMove]] = field(default_factory=list)

    @property
    def class_size_found(self) -> int:
        return len(self.witnesses)

    def to_dict(self) -> dict:
        return {"canonical": list(self.canonical), "layer": self.layer,
                "norm_sq": self.norm_sq, "class_size_found": self.class_size_found}


def norm_bound(group: PermGroup, c_const: Fraction, layer: int,
               lattice: Optional[LogLattice] = None) -> float:
    """Layer norm bound M(k) = k^2/d + C (1 + (|Gamma|-1) D_impl)."""
    d = group.degree
    if lattice is None:
        lattice = build_log_lattice(d)
    gamma = len(lattice.components)
    c = float(c_const)
    return float(Fraction(layer * layer, d)) + c * (1.0 + (gamma - 1) * lattice.d_impl)


# ---------------------------------------------------------------------------
# canonical forms

def _full_torsion_group(n: int) -> list[UnitElement]:
    """The torsion part of the normalizer of C_n: +- the affine permutations
    i -> k*i + j mod n with gcd(k, n) = 1 (includes the identity)."""
    from .groups import perm_matrix
    from .linalg import mat_neg
    from .order_units import verify_normalizer_element
    group = PermGroup.cyclic(n)
    out = []
    for k in range(1, n):
        if math.gcd(k, n) != 1:
            continue
        for j in range(n):
            perm = tuple((k * i + j) % n for i in range(n))
            mat = perm_matrix(perm)
            for sign in (1, -1):
                m = mat if sign == 1 else mat_neg(mat)
                out.append(verify_normalizer_element(m, group, f"{'-' if sign < 0 else ''}aff({k},{j})"))
    return out


def _layer_preserving_torsion(n: int) -> list[UnitElement]:
    """Rotations and multiplier permutations: torsion elements fixing the
    all-ones vector, hence preserving each layer."""
    return [t for t in _full_torsion_group(n) if t.fixed_eigenvalue == 1]


def _unit_ball_products(n: int, lattice: LogLattice, radius: int) -> list[UnitElement]:
    """All products of basis units with exponent vectors of l1 norm <= radius."""
    vectors = [()]
    for _ in range(lattice.rank):
        nxt = []
        for v in vectors:
            used = sum(abs(e) for e in v)
            for e in range(-(radius - used), radius - used + 1):
                nxt.append(v + (e,))
        vectors = nxt
    prods = []
    for v in vectors:
        u = identity_unit(n)
        for e, base in zip(v, lattice.units):
            if e:
                u = u * base.power(e)
        prods.append(u)
    return prods


class Canonicalizer:
    """Deterministic representative map for normalizer equivalence classes
    of a cyclic shift group."""

    def __init__(self, group: PermGroup, radius: int = 2,
                 lattice: Optional[LogLattice] = None):
        if group.cyclic_shift_power() is None:
            raise GroupError("canonical forms are implemented for cyclic shift groups")
        self.group = group
        self.n = group.degree
        self.radius = radius
        self.lattice = lattice if lattice is not None else build_log_lattice(self.n)
        self._torsion = _full_torsion_group(self.n)
        self._ball = _unit_ball_products(self.n, self.lattice, radius)
        self._cache: dict[IntVec, tuple[IntVec, EquivalenceMove]] = {}

    def _explore_from(self, center: IntVec, center_move: EquivalenceMove,
                      ) -> tuple[IntVec, EquivalenceMove]:
        """Best (norm, lex) point among torsion * unit-ball images of center."""
        d = self.n
        best = None
        best_move = None
        for u in self._ball:
            y0 = u.apply(center)
            for t in self._torsion:
                y, m = _normalize_translation(t.apply(y0))
                key = (norm_sq(y), y)
                if best is None or key < best:
                    best = key
                    best_move = center_move.then(
                        EquivalenceMove(t * u, tuple([0] * d))).then(
                        EquivalenceMove(identity_unit(d), tuple([m] * d)))
        return best[1], best_move

    def canonical_with_witness(self, z: Sequence[int]) -> tuple[IntVec, EquivalenceMove]:
        """Canonical representative and an exact move z -> canonical."""
        z = tuple(z)
        if z in self._cache:
            return self._cache[z]
        d = self.n
        z0, m0 = _normalize_translation(z)
        move = EquivalenceMove(identity_unit(d), tuple([m0] * d))
        if len(set(z0)) == 1:
            # fixed vector: the class of the trivial core points
            result = (z0, move)
            self._cache[z] = result
            return result
        try:
            bal = balance_point(z0, self.lattice)
            move = move.then(EquivalenceMove(bal.unit, tuple([0] * d)))
            current, cm = _normalize_translation(bal.point)
            move = move.then(EquivalenceMove(identity_unit(d), tuple([cm] * d)))
        except BalanceError:
            current = z0
        # iterate exploration until stable
        while True:
            best, best_move = self._explore_from(current, move)
            if best == current:
                break
            current, move = best, best_move
        assert move.apply(z) == current
        result = (current, move)
        self._cache[z] = result
        return result

    def canonical(self, z: Sequence[int]) -> IntVec:
        return self.canonical_with_witness(z)[0]


def canonical_form(group: PermGroup, z: Sequence[int], radius: int = 2,
                   lattice: Optional[LogLattice] = None) -> IntVec:
    """Canonical representative of the normalizer equivalence class of z."""
    return Canonicalizer(group, radius, lattice).canonical(z)


# ---------------------------------------------------------------------------
# layer sweeps

def layer_points(d: int, layer: int, max_norm_sq: int) -> Iterator[IntVec]:
    """All integer vectors with coordinate sum `layer` and squared norm at
    most `max_norm_sq`, in lexicographic order."""
    point = [0] * d

    def rec(i: int, remaining_sum: int, budget: int) -> Iterator[IntVec]:
        if i == d - 1:
            if remaining_sum * remaining_sum <= budget:
                point[i] = remaining_sum
                yield tuple(point)
            return
        r = math.isqrt(budget)
        # the tail of length (d-i-1) must sum to remaining_sum - x; its norm
        # is at least (remaining_sum - x)^2 / (d - i - 1) by Cauchy-Schwarz
        tail = d - i - 1
        for x in range(-r, r + 1):
            rest = remaining_sum - x
            if rest * rest > tail * (budget - x * x):
                continue
            point[i] = x
            yield from rec(i + 1, rest, budget - x * x)

    yield from rec(0, layer, max_norm_sq)


def _torsion_minimal(z: IntVec, torsion: Sequence[UnitElement]) -> bool:
    """Whether z is the lex-minimal point of its orbit under the given
    (layer-preserving) torsion elements."""
    for t in torsion:
        if t.apply(z) < z:
            return False
    return True


def enumerate_core_classes(group: PermGroup, layer: int,
                           bound: Optional[float] = None,
                           c_const: Fraction = DEFAULT_C_CONST,
                           radius: int = 2,
                           filter_group: Optional[PermGroup] = None,
                           lattice: Optional[LogLattice] = None,
                           canonicalizer: Optional[Canonicalizer] = None,
                           ) -> list[CoreClass]:
    """All core point classes of one layer, up to normalizer equivalence.

    Sweeps the layer slice of the exact norm ball |z|^2 <= M, keeps the
    core points, and groups them by canonical form.  With `filter_group`
    set, only classes whose representative is also a core point for that
    subgroup-compatible group are kept (both groups must share their
    normalizer for this to be class-invariant).
    """
    d = group.degree
    if group.cyclic_shift_power() is None:
        raise GroupError("class enumeration is implemented for cyclic shift groups")
    if lattice is None:
        lattice = build_log_lattice(d)
    if bound is None:
        bound = norm_bound(group, c_const, layer, lattice)
    if canonicalizer is None:
        canonicalizer = Canonicalizer(group, radius, lattice)
    max_nsq = math.floor(bound)
    torsion = _layer_preserving_torsion(d)

    classes: dict[IntVec, CoreClass] = {}
    for z in layer_points(d, layer, max_nsq):
        if not _torsion_minimal(z, torsion):
            continue
        if not is_core_point(group, z):
            continue
        canon, move = canonicalizer.canonical_with_witness(z)
        assert move.apply(z) == canon
        cls = classes.get(canon)
        if cls is None:
            cls = CoreClass(canon, sum(canon), norm_sq(canon))
            classes[canon] = cls
        cls.witnesses.append((z, move))

    if filter_group is not None:
        classes = {c: cls for c, cls in classes.items()
                   if is_core_point(filter_group, cls.canonical)}
    return sorted(classes.values(), key=lambda cls: (cls.norm_sq, cls.canonical))


# ---------------------------------------------------------------------------
# the symmetric group special case

def sym_canonical(z: Sequence[int]) -> IntVec:
    """Canonical form under the normalizer of Sym(d): sort the entries,
    translate the minimum to 0, and fold by the sign flip."""
    s = tuple(sorted(z))
    s = tuple(x - s[0] for x in s)
    neg = tuple(sorted(-x for x in s))
    neg = tuple(x - neg[0] for x in neg)
    return min(s, neg)


def sym_core_classification(d: int, entry_bound: int = 2) -> tuple[list[IntVec], int]:
    """Exhaustive layer-bounded search of Sym(d) core points.

    Scans all translation-normalized points with entries in [0, entry_bound]
    and returns (core points found that are not 0/1 vectors, number of
    normalizer classes among the 0/1 core points).
    """
    group = PermGroup.symmetric(d)
    non01 = []
    canons = set()
    # sorted nondecreasing tuples with min entry 0 cover every translation
    # and permutation class once
    def tuples(i, lo):
        if i == d:
            yield ()
            return
        for x in range(lo, entry_bound + 1):
            for rest in tuples(i + 1, x):
                yield (x,) + rest

    for z in tuples(0, 0):
        if not z or z[0] != 0:
            continue
        if len(set(z)) == 1:
            canons.add(sym_canonical(z))
            continue
        if is_core_point(group, z):
            if set(z) <= {0, 1}:
                canons.add(sym_canonical(z))
            else:
                non01.append(z)
    return non01, len(canons)
