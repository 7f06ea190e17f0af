"""The integer commutant ring of a permutation group, its unit group, and
the equivalence moves built from them.

For the cyclic shift group the commutant is the ring of integer circulants
(the integral group ring), and an explicit finite-index family of units is
available: Bass cyclic units, their analogues over the doubled cycle -g,
and short-support units found by bounded search.  All units carry exact
integer inverses; floating point only appears in cached spectral data used
to steer heuristics.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded
from .groups import (GroupError, PermGroup, act, is_fixed_vector, perm_matrix)
from .linalg import (IntMat, IntVec, det_int, dot, identity, invert_unimodular,
                     mat_mul, mat_neg, mat_vec, norm_sq, vec_add, vec_sub)
from .repdecomp import nontrivial_components


class UnitError(ValueError):
    pass


# ---------------------------------------------------------------------------
# group ring helpers (coefficient vectors of Z C_n)

def gr_mul(a: Sequence[int], b: Sequence[int]) -> IntVec:
    n = len(a)
    out = [0] * n
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[(i + j) % n] += ai * bj
    return tuple(out)


def gr_power(a: Sequence[int], k: int) -> IntVec:
    n = len(a)
    result = tuple([1] + [0] * (n - 1))
    base = tuple(a)
    while k:
        if k & 1:
            result = gr_mul(result, base)
        base = gr_mul(base, base)
        k >>= 1
    return result


def circulant(coeffs: Sequence[int]) -> IntMat:
    """Matrix of left multiplication by the group ring element sum c_i g^i."""
    n = len(coeffs)
    return tuple(tuple(coeffs[(i - j) % n] for j in range(n)) for i in range(n))


def is_trivial_unit(coeffs: Sequence[int]) -> bool:
    """Torsion units of Z C_n are exactly +-g^j (Higman)."""
    support = [i for i, c in enumerate(coeffs) if c]
    return len(support) == 1 and abs(coeffs[support[0]]) == 1


def circulant_eigenvalues(coeffs: Sequence[int]) -> np.ndarray:
    return np.fft.fft(np.asarray(coeffs, dtype=np.float64)).conj()


def _spectrum_precise(coeffs: Sequence[int], freqs: Sequence[int]) -> list[float]:
    """|lambda_j|^2 for huge-coefficient circulants, via mpmath.

    Unit eigenvalues can be tiny while the coefficients are astronomically
    large; the working precision is raised until the cancellation leaves at
    least ~50 accurate bits for the smallest eigenvalue."""
    import mpmath
    n = len(coeffs)
    total_bits = max(sum(abs(c) for c in coeffs), 2).bit_length()
    prec = 80 + total_bits
    while True:
        out = []
        ok = True
        with mpmath.workprec(prec):
            err_bits = total_bits + 8 - prec  # log2 of the absolute error of lam
            for j in freqs:
                lam = mpmath.mpc(0)
                for t, c in enumerate(coeffs):
                    if c:
                        lam += c * mpmath.expjpi(mpmath.mpf(2 * ((j * t) % n)) / n)
                mag2 = mpmath.mpf(lam.real) ** 2 + mpmath.mpf(lam.imag) ** 2
                if mag2 == 0 or mpmath.log(mag2, 2) / 2 < err_bits + 50:
                    ok = False
                    break
                out.append(float(mag2))
        if ok:
            return out
        prec *= 2


# ---------------------------------------------------------------------------
# commutant ring

@dataclass(frozen=True)
class CommutantRing:
    """Integer basis of {B : Bg = gB for all g in G}, via orbital matrices."""

    group: PermGroup
    basis: tuple[IntMat, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def commutant_basis(group: PermGroup) -> CommutantRing:
    """The commutant of the group in the d x d integer matrices.

    An integer matrix commutes with every permutation matrix of G exactly
    when it is constant on the orbits of G on index pairs, so the orbital
    indicator matrices form a Z-basis.
    """
    d = group.degree
    seen = [[False] * d for _ in range(d)]
    basis = []
    for i0 in range(d):
        for j0 in range(d):
            if seen[i0][j0]:
                continue
            orb = {(i0, j0)}
            frontier = [(i0, j0)]
            while frontier:
                nxt = []
                for (i, j) in frontier:
                    for g in group.generators:
                        p = (g[i], g[j])
                        if p not in orb:
                            orb.add(p)
                            nxt.append(p)
                frontier = nxt
            mat = [[0] * d for _ in range(d)]
            for (i, j) in orb:
                seen[i][j] = True
                mat[i][j] = 1
            basis.append(tuple(tuple(r) for r in mat))
    return CommutantRing(group, tuple(basis))


# ---------------------------------------------------------------------------
# units

@dataclass(frozen=True)
class UnitElement:
    """An exactly invertible integer matrix tied to the group action.

    Centralizer units commute with the group; normalizer torsion elements
    conjugate the generator set into itself.  The spectral cache holds the
    squared eigenvalue magnitude per nontrivial frequency class (cyclic
    case only).
    """

    matrix: IntMat
    inverse: IntMat
    is_centralizer: bool
    fixed_eigenvalue: Optional[int] = None
    circulant_coeffs: Optional[IntVec] = None
    spectrum: Optional[tuple[float, ...]] = None
    infinite_order: bool = False
    label: str = ""

    def __mul__(self, other: "UnitElement") -> "UnitElement":
        coeffs = None
        spectrum = None
        if self.circulant_coeffs is not None and other.circulant_coeffs is not None:
            coeffs = gr_mul(self.circulant_coeffs, other.circulant_coeffs)
            spectrum = _spectrum_from_coeffs(coeffs)
        fe = None
        if self.fixed_eigenvalue is not None and other.fixed_eigenvalue is not None:
            fe = self.fixed_eigenvalue * other.fixed_eigenvalue
        return UnitElement(
            matrix=mat_mul(self.matrix, other.matrix),
            inverse=mat_mul(other.inverse, self.inverse),
            is_centralizer=self.is_centralizer and other.is_centralizer,
            fixed_eigenvalue=fe,
            circulant_coeffs=coeffs,
            spectrum=spectrum,
            infinite_order=(coeffs is not None and not is_trivial_unit(coeffs)),
            label=_compose_labels(self.label, other.label),
        )

    def inv(self) -> "UnitElement":
        coeffs = None
        spectrum = None
        if self.circulant_coeffs is not None:
            coeffs = tuple(self.inverse[i][0] for i in range(len(self.inverse)))
            spectrum = _spectrum_from_coeffs(coeffs)
        return UnitElement(
            matrix=self.inverse,
            inverse=self.matrix,
            is_centralizer=self.is_centralizer,
            fixed_eigenvalue=self.fixed_eigenvalue,
            circulant_coeffs=coeffs,
            spectrum=spectrum,
            infinite_order=self.infinite_order,
            label=f"({self.label})^-1" if self.label else "",
        )

    def power(self, e: int) -> "UnitElement":
        base = self if e >= 0 else self.inv()
        result = identity_unit(len(self.matrix))
        for _ in range(abs(e)):
            result = base * result
        return result

    def apply(self, z: Sequence[int]) -> IntVec:
        return mat_vec(self.matrix, z)

    def __hash__(self):
        return hash(self.matrix)

    def __eq__(self, other):
        return isinstance(other, UnitElement) and self.matrix == other.matrix


def _compose_labels(a: str, b: str) -> str:
    if a and b:
        return f"{a}*{b}"
    return a or b


def _spectrum_from_coeffs(coeffs: Sequence[int]) -> tuple[float, ...]:
    n = len(coeffs)
    comps = nontrivial_components(n)
    freqs = [c.frequency for c in comps]
    total = sum(abs(c) for c in coeffs)
    eig = circulant_eigenvalues(coeffs)
    spectrum = [float(abs(eig[j]) ** 2) for j in freqs]
    # the DFT values carry an absolute error of ~eps * sum|c|; eigenvalues of
    # comparable size would come out with a useless relative error
    delta = float(np.finfo(np.float64).eps) * float(total)
    threshold = (4.0e9 * delta) ** 2
    if any(x < threshold for x in spectrum):
        return tuple(_spectrum_precise(coeffs, freqs))
    return tuple(spectrum)


def identity_unit(d: int) -> UnitElement:
    ident = identity(d)
    coeffs = tuple([1] + [0] * (d - 1))
    return UnitElement(ident, ident, True, 1, coeffs,
                       _spectrum_from_coeffs(coeffs), False, "1")


def verify_unit(matrix: Sequence[Sequence[int]], group: PermGroup,
                label: str = "") -> UnitElement:
    """Validate a centralizer unit: integral, commutes with the group,
    determinant +-1; returns it with exact inverse and spectral cache."""
    d = group.degree
    m = tuple(tuple(int(x) for x in row) for row in matrix)
    if len(m) != d or any(len(row) != d for row in m):
        raise UnitError("matrix size does not match the group degree")
    for g in group.generators:
        pg = perm_matrix(g)
        if mat_mul(m, pg) != mat_mul(pg, m):
            raise UnitError("matrix does not commute with the group")
    if det_int(m) not in (1, -1):
        raise UnitError("determinant is not +-1")
    inverse = invert_unimodular(m)
    coeffs = None
    spectrum = None
    infinite = False
    if group.cyclic_shift_power() is not None:
        coeffs = tuple(m[i][0] for i in range(d))
        spectrum = _spectrum_from_coeffs(coeffs)
        infinite = not is_trivial_unit(coeffs)
    fe = None
    if group.is_transitive():
        sums = {sum(row) for row in m}
        if len(sums) == 1:
            fe = sums.pop()
    return UnitElement(m, inverse, True, fe, coeffs, spectrum, infinite, label)


def verify_normalizer_element(matrix: Sequence[Sequence[int]], group: PermGroup,
                              label: str = "") -> UnitElement:
    """Validate a normalizer element: unimodular and conjugates the
    generator set into the group."""
    d = group.degree
    m = tuple(tuple(int(x) for x in row) for row in matrix)
    if det_int(m) not in (1, -1):
        raise UnitError("determinant is not +-1")
    inverse = invert_unimodular(m)
    elements = {perm_matrix(g): g for g in group.elements()}
    for g in group.generators:
        conj = mat_mul(mat_mul(m, perm_matrix(g)), inverse)
        if conj not in elements:
            raise UnitError("matrix does not normalize the group")
    fe = None
    if group.is_transitive():
        sums = {sum(row) for row in m}
        if len(sums) == 1:
            fe = sums.pop()
    centralizes = all(
        mat_mul(m, perm_matrix(g)) == mat_mul(perm_matrix(g), m)
        for g in group.generators)
    coeffs = None
    spectrum = None
    infinite = False
    if centralizes and group.cyclic_shift_power() is not None:
        coeffs = tuple(m[i][0] for i in range(d))
        spectrum = _spectrum_from_coeffs(coeffs)
        infinite = not is_trivial_unit(coeffs)
    return UnitElement(m, inverse, centralizes, fe, coeffs, spectrum, infinite, label)


def _unit_from_coeffs(coeffs: Sequence[int], group: PermGroup, label: str) -> UnitElement:
    return verify_unit(circulant(coeffs), group, label)


def _multiplicative_order(i: int, n: int) -> int:
    k, x = 1, i % n
    while x != 1:
        x = (x * i) % n
        k += 1
        if k > n:
            raise ArithmeticError("order computation ran away")
    return k


def _standard_bass_coeffs(n: int) -> list[tuple[IntVec, str]]:
    """Bass cyclic units (1+g+...+g^{i-1})^k + (1-i^k)/n * (1+g+...+g^{n-1})."""
    out = []
    for i in range(2, n - 1):
        if math.gcd(i, n) != 1:
            continue
        k = _multiplicative_order(i, n)
        base = tuple([1] * i + [0] * (n - i))
        c = list(gr_power(base, k))
        corr = (1 - i ** k) // n
        c = tuple(x + corr for x in c)
        out.append((c, f"bass({i},{k})"))
    return out


def _negative_cycle_bass_coeffs(n: int) -> list[tuple[IntVec, str]]:
    """Bass units of the doubled cycle <-g> (order 2n, n odd), folded back
    into Z C_n via (-g)^j = (-1)^j g^(j mod n).  The correction term over
    the doubled cycle vanishes, so these are plain powers."""
    if n % 2 == 0:
        return []
    out = []
    for i in range(2, 2 * n - 1):
        if math.gcd(i, 2 * n) != 1:
            continue
        k = _multiplicative_order(i, 2 * n)
        base = [0] * n
        for j in range(i):
            base[j % n] += (-1) ** j
        c = gr_power(tuple(base), k)
        out.append((c, f"bass-({i},{k})"))
    return out


def _short_unit_coeffs(n: int, weight: int = 3) -> list[tuple[IntVec, str]]:
    """Small-support unit search: coefficient vectors with l1 norm at most
    `weight` whose circulant has determinant +-1.

    A cheap float screen on the eigenvalue product precedes the exact
    determinant check.
    """
    if n < 2:
        return []
    out = []

    def candidates():
        for size in (2, 3):
            if size > weight:
                return
            for support in combinations(range(n), size):
                if support[0] != 0:
                    continue  # rotations are torsion-equivalent, fix position 0
                for values in _signed_compositions(size, weight):
                    yield support, values

    for support, values in candidates():
        if abs(sum(values)) != 1:
            continue  # the fixed space eigenvalue must be a unit of Z
        c = [0] * n
        for pos, val in zip(support, values):
            c[pos] = val
        eig = np.fft.fft(np.asarray(c, dtype=np.float64))
        prod = float(np.abs(np.prod(eig)))
        if not (0.5 < prod < 1.5):
            continue
        mat = circulant(c)
        if det_int(mat) in (1, -1):
            out.append((tuple(c), f"short{tuple(c)}"))
    return out


def _signed_compositions(size: int, total_cap: int):
    """All integer vectors of the given size with entries != 0 and l1 norm
    at most total_cap."""
    def rec(prefix, remaining):
        if len(prefix) == size:
            yield tuple(prefix)
            return
        slots_left = size - len(prefix) - 1
        for mag in range(1, remaining - slots_left + 1):
            for s in (1, -1):
                yield from rec(prefix + [s * mag], remaining - mag)
    yield from rec([], total_cap)


def _dedup_modulo_torsion(units: list[UnitElement]) -> list[UnitElement]:
    kept: list[UnitElement] = []
    for u in units:
        redundant = False
        for v in kept:
            for q in (gr_mul(u.circulant_coeffs, tuple(v.inverse[i][0] for i in range(len(v.inverse)))),
                      gr_mul(u.circulant_coeffs, v.circulant_coeffs)):
                if is_trivial_unit(q):
                    redundant = True
                    break
            if redundant:
                break
        if not redundant:
            kept.append(u)
    return kept


def bass_units(n: int, search_weight: int = 3) -> list[UnitElement]:
    """Infinite-order unit generators for the centralizer of C_n.

    Combines short-support units (preferred: they tend to be fundamental),
    Bass cyclic units, and their doubled-cycle variants, deduplicated modulo
    torsion.  The list is empty exactly when the unit group is finite.
    """
    if n < 2:
        return []
    group = PermGroup.cyclic(n)
    seen: set[IntVec] = set()
    units: list[UnitElement] = []
    pools = (_short_unit_coeffs(n, search_weight) + _standard_bass_coeffs(n)
             + _negative_cycle_bass_coeffs(n))
    for coeffs, label in pools:
        if is_trivial_unit(coeffs) or coeffs in seen:
            continue
        seen.add(coeffs)
        try:
            u = _unit_from_coeffs(coeffs, group, label)
        except UnitError:
            continue
        units.append(u)
    units.sort(key=lambda u: (sum(abs(c) for c in u.circulant_coeffs), u.circulant_coeffs))
    return _dedup_modulo_torsion(units)


def multiplier_permutation(n: int, k: int) -> IntMat:
    """Permutation matrix of i -> k*i mod n (a normalizer torsion element)."""
    if math.gcd(k, n) != 1:
        raise UnitError("multiplier must be coprime to n")
    g = tuple((k * i) % n for i in range(n))
    return perm_matrix(g)


def normalizer_torsion(n: int) -> list[UnitElement]:
    """-I, the cycle itself, and the multiplier permutations."""
    group = PermGroup.cyclic(n)
    out = [verify_unit(mat_neg(identity(n)), group, "-I")]
    shift = perm_matrix(tuple((i + 1) % n for i in range(n)))
    out.append(verify_unit(shift, group, "g"))
    for k in range(2, n):
        if math.gcd(k, n) == 1:
            out.append(verify_normalizer_element(multiplier_permutation(n, k), group,
                                                 f"sigma_{k}"))
    return out


def normalizer_generators(n: int) -> list[UnitElement]:
    """Generators of (a finite-index subgroup of) the normalizer of C_n in
    GL(n, Z): torsion part plus the infinite-order units."""
    return normalizer_torsion(n) + bass_units(n)


def normalizer_generators_sym(d: int) -> list[UnitElement]:
    """For the full symmetric group the normalizer is generated by -I and
    the permutation matrices themselves."""
    group = PermGroup.symmetric(d)
    out = [verify_normalizer_element(mat_neg(identity(d)), group, "-I")]
    for i, g in enumerate(group.generators):
        out.append(verify_normalizer_element(perm_matrix(g), group, f"g{i}"))
    return out


# ---------------------------------------------------------------------------
# equivalence moves

@dataclass(frozen=True)
class EquivalenceMove:
    """x -> S x + t with S in the normalizer and t an integral fixed vector."""

    S: UnitElement
    t: IntVec

    def apply(self, z: Sequence[int]) -> IntVec:
        return vec_add(mat_vec(self.S.matrix, z), self.t)

    def then(self, after: "EquivalenceMove") -> "EquivalenceMove":
        """The move 'first self, then after'."""
        return EquivalenceMove(after.S * self.S,
                               vec_add(mat_vec(after.S.matrix, self.t), after.t))

    def invert(self) -> "EquivalenceMove":
        sinv = self.S.inv()
        return EquivalenceMove(sinv, tuple(-x for x in mat_vec(sinv.matrix, self.t)))


def identity_move(d: int) -> EquivalenceMove:
    return EquivalenceMove(identity_unit(d), tuple([0] * d))


def apply_move(move: EquivalenceMove, z: Sequence[int]) -> IntVec:
    if len(z) != len(move.S.matrix):
        raise ValueError("dimension mismatch")
    return move.apply(z)


def translation_equivalent(group: PermGroup, z: Sequence[int], w: Sequence[int]) -> bool:
    """Whether w - z is an integral vector fixed by the group."""
    if len(z) != len(w) or len(z) != group.degree:
        raise ValueError("dimension mismatch")
    diff = vec_sub(w, z)
    return is_fixed_vector(group, diff)


def _normalize_translation(z: IntVec) -> tuple[IntVec, int]:
    """Translate by a multiple of the all-ones vector to the layer residue
    of minimal absolute value.  Returns (point, multiple used)."""
    d = len(z)
    k = sum(z)
    m = (2 * k + d) // (2 * d)  # nearest integer to k/d, exact arithmetic
    return tuple(x - m for x in z), -m


def normalizer_equivalent(group: PermGroup, z: Sequence[int], w: Sequence[int],
                          budget: int = 20000, norm_factor: int = 64,
                          generators: Optional[list[UnitElement]] = None,
                          ) -> Optional[EquivalenceMove]:
    """Search for a witness move with S z + t = w.

    Best-first search over normalizer generator applications, translations
    normalized away.  A returned move is always exact and verified; None
    only means nothing was found within the budget (the relation itself is
    semidecidable this way).
    """
    if group.cyclic_shift_power() is None:
        raise GroupError("witness search is implemented for the cyclic shift groups")
    d = group.degree
    z = tuple(z)
    w = tuple(w)
    if generators is None:
        generators = normalizer_generators(d)
    gens = []
    for u in generators:
        gens.append(u)
        gens.append(u.inv())

    target, _ = _normalize_translation(w)
    start, m0 = _normalize_translation(z)
    cap = norm_factor * max(norm_sq(start), norm_sq(target), 1)

    start_move = EquivalenceMove(identity_unit(d), tuple([m0] * d))
    best: dict[IntVec, EquivalenceMove] = {start: start_move}
    heap = [(norm_sq(start), 0, start)]
    counter = 0
    expanded = 0
    while heap:
        _, _, current = heapq.heappop(heap)
        move = best[current]
        if current == target:
            diff = vec_sub(w, current)
            final = EquivalenceMove(move.S, vec_add(move.t, diff))
            assert final.apply(z) == w
            return final
        expanded += 1
        if expanded > budget:
            return None
        for u in gens:
            y = mat_vec(u.matrix, current)
            y, m = _normalize_translation(y)
            if norm_sq(y) > cap or y in best:
                continue
            counter += 1
            best[y] = EquivalenceMove(u * move.S,
                                      vec_add(mat_vec(u.matrix, move.t), tuple([m] * d)))
            heapq.heappush(heap, (norm_sq(y), counter, y))
    return None
