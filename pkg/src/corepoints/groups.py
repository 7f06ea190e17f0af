"""Permutation groups acting on Z^d by permuting coordinates.

Permutations are index arrays on {0, ..., d-1}: g[i] is the image of
position i.  The action on vectors moves the entry at position i to
position g[i], so (g.z)[g[i]] = z[i].
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations as _all_permutations
from typing import Iterable, Optional, Sequence

from .linalg import IntVec

Perm = tuple[int, ...]

DEFAULT_ELEMENT_CAP = 10 ** 6


class GroupError(ValueError):
    pass


def perm_compose(g: Perm, h: Perm) -> Perm:
    """(g o h)(i) = g(h(i))."""
    return tuple(g[h[i]] for i in range(len(g)))


def perm_inverse(g: Perm) -> Perm:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def perm_matrix(g: Perm) -> tuple[IntVec, ...]:
    """Permutation matrix P with P e_i = e_{g(i)}, i.e. P z = act(g, z)."""
    d = len(g)
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        rows[g[i]][i] = 1
    return tuple(tuple(r) for r in rows)


def act(g: Perm, z: Sequence) -> tuple:
    """Apply a permutation to a vector: result[g(i)] = z[i]."""
    if len(g) != len(z):
        raise GroupError(f"dimension mismatch: permutation degree {len(g)}, vector length {len(z)}")
    out = [None] * len(z)
    for i, zi in enumerate(z):
        out[g[i]] = zi
    return tuple(out)


def parse_cycles(text: str, degree: Optional[int] = None) -> Perm:
    """Parse 1-based cycle notation like "(1,2,3,4,5)" or "(1,2)(3,4)"."""
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles and text.strip():
        raise GroupError(f"cannot parse cycle notation: {text!r}")
    parsed = []
    maxlabel = 0
    for cyc in cycles:
        labels = [int(tok) for tok in re.split(r"[,\s]+", cyc.strip()) if tok]
        if any(l < 1 for l in labels):
            raise GroupError("cycle labels are 1-based and must be positive")
        if len(set(labels)) != len(labels):
            raise GroupError(f"repeated label in cycle ({cyc})")
        maxlabel = max(maxlabel, max(labels, default=0))
        parsed.append(labels)
    d = degree if degree is not None else maxlabel
    if maxlabel > d:
        raise GroupError(f"cycle label {maxlabel} exceeds degree {d}")
    img = list(range(d))
    for labels in parsed:
        for a, b in zip(labels, labels[1:] + labels[:1]):
            img[a - 1] = b - 1
    return tuple(img)


@dataclass(frozen=True)
class PermGroup:
    """A finite permutation group of degree d, given by generators."""

    degree: int
    generators: tuple[Perm, ...]
    element_cap: int = DEFAULT_ELEMENT_CAP
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.degree < 1:
            raise GroupError("degree must be positive")
        for g in self.generators:
            if sorted(g) != list(range(self.degree)):
                raise GroupError(f"not a permutation of 0..{self.degree - 1}: {g}")

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], degree: Optional[int] = None,
                        element_cap: int = DEFAULT_ELEMENT_CAP) -> "PermGroup":
        gens = [tuple(g) for g in gens]
        if degree is None:
            if not gens:
                raise GroupError("need a degree for the trivial group")
            degree = len(gens[0])
        return cls(degree, tuple(gens), element_cap)

    @classmethod
    def cyclic(cls, n: int) -> "PermGroup":
        """C_n generated by the n-cycle i -> i+1 mod n."""
        shift = tuple((i + 1) % n for i in range(n))
        return cls(n, (shift,))

    @classmethod
    def symmetric(cls, d: int) -> "PermGroup":
        if d == 1:
            return cls(1, ())
        swap = tuple([1, 0] + list(range(2, d)))
        cyc = tuple((i + 1) % d for i in range(d))
        return cls(d, (swap, cyc) if d > 2 else (swap,))

    @classmethod
    def dihedral(cls, n: int) -> "PermGroup":
        """D_n acting on n points: rotation plus the reflection i -> -i."""
        rot = tuple((i + 1) % n for i in range(n))
        refl = tuple((-i) % n for i in range(n))
        return cls(n, (rot, refl))

    @classmethod
    def trivial(cls, d: int) -> "PermGroup":
        return cls(d, ())

    @classmethod
    def from_json(cls, text: str) -> "PermGroup":
        """Load `{"degree": d, "generators": [[...0-based images...], ...]}`."""
        data = json.loads(text)
        return cls.from_generators([tuple(g) for g in data["generators"]],
                                   degree=data["degree"])

    def to_json(self) -> str:
        return json.dumps({"degree": self.degree,
                           "generators": [list(g) for g in self.generators]})

    def elements(self) -> tuple[Perm, ...]:
        """All group elements, by breadth-first closure over the generators."""
        if "elements" not in self._cache:
            ident = tuple(range(self.degree))
            seen = {ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for h in frontier:
                    for g in self.generators:
                        e = perm_compose(g, h)
                        if e not in seen:
                            seen.add(e)
                            nxt.append(e)
                            if len(seen) > self.element_cap:
                                raise GroupError(
                                    f"group has more than {self.element_cap} elements")
                frontier = nxt
            self._cache["elements"] = tuple(sorted(seen))
        return self._cache["elements"]

    def order(self) -> int:
        return len(self.elements())

    def __contains__(self, g: Perm) -> bool:
        return tuple(g) in set(self.elements())

    def coordinate_orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits of the group on coordinate indices {0, ..., d-1}."""
        if "coord_orbits" not in self._cache:
            seen = [False] * self.degree
            orbits = []
            for start in range(self.degree):
                if seen[start]:
                    continue
                orb = {start}
                frontier = [start]
                while frontier:
                    nxt = []
                    for i in frontier:
                        for g in self.generators:
                            j = g[i]
                            if j not in orb:
                                orb.add(j)
                                nxt.append(j)
                    frontier = nxt
                for i in orb:
                    seen[i] = True
                orbits.append(tuple(sorted(orb)))
            self._cache["coord_orbits"] = tuple(orbits)
        return self._cache["coord_orbits"]

    def is_transitive(self) -> bool:
        return len(self.coordinate_orbits()) == 1

    def cyclic_shift_power(self) -> Optional[int]:
        """If this group is exactly <full d-cycle>, return 1; None otherwise.

        Used to unlock the closed-form spectral machinery for C_n.
        """
        n = self.degree
        shift = tuple((i + 1) % n for i in range(n))
        els = set(self.elements())
        powers = set()
        p = tuple(range(n))
        for _ in range(n):
            powers.add(p)
            p = perm_compose(shift, p)
        return 1 if els == powers else None


def orbit(group: PermGroup, z: Sequence[int]) -> tuple[IntVec, ...]:
    """The orbit of z under the group, sorted lexicographically."""
    z = tuple(z)
    if len(z) != group.degree:
        raise GroupError("dimension mismatch")
    seen = {z}
    frontier = [z]
    while frontier:
        nxt = []
        for v in frontier:
            for g in group.generators:
                w = act(g, v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > group.element_cap:
                        raise GroupError("orbit exceeds the element cap")
        frontier = nxt
    return tuple(sorted(seen))


def project_fixed(group: PermGroup, z: Sequence) -> tuple[Fraction, ...]:
    """Orthogonal projection of z onto the fixed space of the group.

    For coordinate permutation actions this is per-orbit averaging, which
    equals the group average (1/|G|) sum_g g.z.
    """
    if len(z) != group.degree:
        raise GroupError("dimension mismatch")
    out = [Fraction(0)] * group.degree
    for orb in group.coordinate_orbits():
        avg = Fraction(sum(z[i] for i in orb), len(orb))
        for i in orb:
            out[i] = avg
    return tuple(out)


def layer_of(group: PermGroup, z: Sequence[int]) -> int:
    """The coordinate sum of z.  Only meaningful for transitive groups."""
    if not group.is_transitive():
        raise GroupError("layers are only defined for transitive groups")
    if len(z) != group.degree:
        raise GroupError("dimension mismatch")
    return sum(z)


def is_fixed_vector(group: PermGroup, t: Sequence) -> bool:
    t = tuple(t)
    return all(act(g, t) == t for g in group.generators)
