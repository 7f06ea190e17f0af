"""The logarithmic unit lattice and spectral balancing.

A centralizer unit u acts on each irrational component as a scalar of
squared magnitude |lambda(u)|^2; the map L(u) = (log |lambda(u)^alpha|^2)_alpha
lands in the zero-sum hyperplane and its image is a lattice.  Balancing a
point means choosing a unit product c so that the projections of cz onto
the components have nearly equal norms: then a nearest-plane rounding on
the log lattice bounds the norm ratio by exp(cell diameter).

Floats steer the choice of c only; the returned point cz and the witness
move are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .groups import PermGroup
from .linalg import IntVec, norm_sq, vec_sub
from .order_units import (EquivalenceMove, UnitElement, bass_units,
                          identity_unit, identity_move, _normalize_translation)
from .repdecomp import (IsotypicComponent, irrational_components,
                        projection_norms)

RANK_TOL = 1e-9
LOG_TOL = 1e-6


class BalanceError(ValueError):
    pass


def log_map(unit: UnitElement, components: Sequence[IsotypicComponent],
            all_components: Optional[Sequence[IsotypicComponent]] = None) -> np.ndarray:
    """L(u): log squared eigenvalue magnitude per selected component."""
    if unit.spectrum is None:
        raise BalanceError("unit carries no spectral cache (not a cyclic centralizer unit)")
    if all_components is None:
        n = len(unit.matrix)
        from .repdecomp import nontrivial_components
        all_components = nontrivial_components(n)
    index = {c.frequency: i for i, c in enumerate(all_components)}
    return np.array([np.log(unit.spectrum[index[c.frequency]]) for c in components])


@dataclass(frozen=True)
class LogLattice:
    """A basis of unit log vectors spanning (a finite-index sublattice of)
    the full lattice in the zero-sum hyperplane."""

    components: tuple[IsotypicComponent, ...]
    units: tuple[UnitElement, ...]          # basis units, one per log vector
    log_vectors: np.ndarray                 # shape (rank, len(components))
    gram_schmidt: np.ndarray
    rank: int
    cell_spread: float                      # spread bound over the rounding cell

    @property
    def d_impl(self) -> float:
        """Certified bound on max/min squared projection norm after balancing."""
        return float(np.exp(self.cell_spread))


def build_log_lattice(n: int, units: Optional[Sequence[UnitElement]] = None,
                      components: Optional[Sequence[IsotypicComponent]] = None,
                      ) -> LogLattice:
    """Greedy short-first basis of the log vectors of the given units
    (default: the generated unit family of C_n) on the irrational components."""
    if components is None:
        components = irrational_components(n)
    components = tuple(components)
    if units is None:
        units = bass_units(n)
    cands = []
    for u in units:
        if not u.infinite_order:
            continue
        vec = log_map(u, components)
        cands.append((float(np.linalg.norm(vec)), vec, u))
    cands.sort(key=lambda t: t[0])

    basis_units: list[UnitElement] = []
    rows: list[np.ndarray] = []
    gs: list[np.ndarray] = []
    for _, vec, u in cands:
        resid = vec.copy()
        for b in gs:
            denom = float(b @ b)
            if denom > RANK_TOL:
                resid = resid - (resid @ b) / denom * b
        if np.linalg.norm(resid) > 1e-7 * max(1.0, np.linalg.norm(vec)):
            basis_units.append(u)
            rows.append(vec)
            gs.append(resid)
    if rows:
        log_vectors = np.array(rows)
        gram = np.array(gs)
        spread = 0.5 * sum(float(b.max() - b.min()) for b in gs)
    else:
        log_vectors = np.zeros((0, len(components)))
        gram = np.zeros((0, len(components)))
        spread = 0.0
    return LogLattice(components, tuple(basis_units), log_vectors, gram,
                      len(rows), spread)


def _babai_nearest_plane(lattice: LogLattice, target: np.ndarray) -> np.ndarray:
    """Integer coefficients e with target - e.B in the nearest-plane cell."""
    coeffs = np.zeros(lattice.rank, dtype=np.int64)
    r = target.astype(np.float64).copy()
    for i in range(lattice.rank - 1, -1, -1):
        b_star = lattice.gram_schmidt[i]
        denom = float(b_star @ b_star)
        mu = float(r @ b_star) / denom
        e = int(np.rint(mu))
        coeffs[i] = e
        r = r - e * lattice.log_vectors[i]
    return coeffs


@dataclass(frozen=True)
class BalanceResult:
    unit: UnitElement
    point: IntVec
    ratio: float          # achieved max/min of the component norms
    bound: float          # certified bound D_impl


def balance_point(z: Sequence[int], lattice: LogLattice) -> BalanceResult:
    """Find a unit product c with the component norms of cz balanced within
    the certified factor lattice.d_impl."""
    z = tuple(z)
    n = len(z)
    profile = projection_norms(z)
    idx = {c.frequency: i for i, c in enumerate(profile.components)}
    norms = np.array([profile.component_norms[idx[c.frequency]] for c in lattice.components])
    errs = np.array([profile.component_errs[idx[c.frequency]] for c in lattice.components])
    if np.any(norms <= 10.0 * np.maximum(errs, 1e-300)):
        raise BalanceError(
            "zero (or numerically zero) projection onto an irrational component")
    if lattice.rank == 0:
        c = identity_unit(n)
        return BalanceResult(c, z, _norm_ratio(z, lattice), lattice.d_impl)
    nvec = np.log(norms)
    target = nvec - nvec.mean()
    coeffs = _babai_nearest_plane(lattice, -target)
    c = identity_unit(n)
    for e, u in zip(coeffs, lattice.units):
        if e:
            c = c * u.power(int(e))
    cz = c.apply(z)
    ratio = _norm_ratio(cz, lattice)
    # certificate from the construction; allow a hair of float slack
    assert ratio <= lattice.d_impl * (1 + 1e-9), (ratio, lattice.d_impl)
    return BalanceResult(c, cz, ratio, lattice.d_impl)


def _norm_ratio(z: Sequence[int], lattice: LogLattice) -> float:
    profile = projection_norms(tuple(z))
    idx = {c.frequency: i for i, c in enumerate(profile.components)}
    norms = [profile.component_norms[idx[c.frequency]] for c in lattice.components]
    return max(norms) / min(norms) if norms else 1.0


def _move_candidates(gens: Sequence[UnitElement], radius: int) -> list[UnitElement]:
    moves = []
    for u in gens:
        if u.infinite_order:
            for e in range(1, radius + 1):
                moves.append(u.power(e))
                moves.append(u.power(-e))
        else:
            moves.append(u)
            moves.append(u.inv())
    return moves


def reduce_min_norm(z: Sequence[int], gens: Sequence[UnitElement], radius: int = 2,
                    ) -> tuple[IntVec, EquivalenceMove]:
    """Greedy descent to a locally norm-minimal representative of the
    normalizer equivalence class of z.

    Single-generator moves (unit powers up to the radius, torsion elements)
    combined with fixed-space translations; the returned witness move maps
    z to the result exactly.
    """
    z = tuple(z)
    d = len(z)
    current, m0 = _normalize_translation(z)
    move = EquivalenceMove(identity_unit(d), tuple([m0] * d))
    moves = _move_candidates(gens, radius)
    improved = True
    while improved:
        improved = False
        best = (norm_sq(current), current)
        best_step = None
        for u in moves:
            y, m = _normalize_translation(u.apply(current))
            key = (norm_sq(y), y)
            if key < best:
                best = key
                best_step = (u, m, y)
        if best_step is not None:
            u, m, y = best_step
            move = move.then(EquivalenceMove(u, tuple([0] * d))).then(
                EquivalenceMove(identity_unit(d), tuple([m] * d)))
            current = y
            improved = True
    assert move.apply(z) == current
    return current, move
