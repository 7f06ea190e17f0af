"""Decomposition of R^n under the cyclic shift into irreducible 2-planes.

Frequencies j and n-j span one real-irreducible component; frequency 0 is
the fixed space and (for even n) frequency n/2 is the alternating line.
Projection norms are computed by the discrete Fourier transform in floating
point with a reported error bound; they only steer heuristics, all
correctness-critical decisions elsewhere in the package are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np
import sympy

from .groups import PermGroup, GroupError
from .linalg import mat_mul

# orders m with Euler phi(m) <= 2: the rotation angle 2*pi/m has rational cosine
RATIONAL_ORDERS = frozenset({1, 2, 3, 4, 6})

MACHINE_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class IsotypicComponent:
    """One real-irreducible piece of R^n under the cyclic shift."""

    frequency_class: tuple[int, ...]   # {j, n-j} reduced, or (0,)
    order: int                         # n / gcd(j, n), the order of the root at j
    real_dimension: int                # 1 or 2
    rational: bool                     # spanned by rational vectors

    @property
    def frequency(self) -> int:
        return self.frequency_class[0]

    @property
    def is_fixed_space(self) -> bool:
        return self.order == 1


def cyclic_components(n: int) -> list[IsotypicComponent]:
    """All isotypic components of R^n under C_n, one per frequency class."""
    if n < 1:
        raise ValueError("n must be positive")
    comps = []
    for j in range(n // 2 + 1):
        if j != 0 and n - j < j:
            break
        cls = (j,) if j == 0 or 2 * j == n else (j, n - j)
        m = n // gcd(j, n) if j else 1
        comps.append(IsotypicComponent(
            frequency_class=cls,
            order=m,
            real_dimension=len(cls),
            rational=m in RATIONAL_ORDERS,
        ))
    return comps


def nontrivial_components(n: int) -> list[IsotypicComponent]:
    return [c for c in cyclic_components(n) if not c.is_fixed_space]


def irrational_components(n: int) -> list[IsotypicComponent]:
    return [c for c in cyclic_components(n) if not c.rational]


def galois_classes(n: int) -> dict[int, list[IsotypicComponent]]:
    """Group the nontrivial components by order; equal order = one Galois class."""
    classes: dict[int, list[IsotypicComponent]] = {}
    for c in nontrivial_components(n):
        classes.setdefault(c.order, []).append(c)
    return classes


@dataclass(frozen=True)
class SpectrumProfile:
    """Squared projection norms of a vector onto each component.

    component_norms[i] belongs to components[i]; component_errs[i] is a
    certified absolute error bound for it, and err_bound is their sum.
    fixed_norm is exact.
    """

    components: tuple[IsotypicComponent, ...]
    component_norms: tuple[float, ...]
    component_errs: tuple[float, ...]
    fixed_norm: Fraction
    err_bound: float

    def norms_by_frequency(self) -> dict[int, float]:
        return {c.frequency: x for c, x in zip(self.components, self.component_norms)}


def projection_norms(z: Sequence[int], components: Optional[Sequence[IsotypicComponent]] = None,
                     ) -> SpectrumProfile:
    """Squared norms of the projections of z onto each isotypic component.

    For the class {j, n-j} the squared norm is (2/n)|zhat_j|^2, and (1/n)
    for the self-paired frequencies 0 and n/2 (Parseval).  The DFT values
    zhat_j carry an absolute forward error of at most delta = 8 (log2 n + 2)
    * eps * sum|z_t| per real/imaginary part, which propagates to the
    per-component bounds reported alongside the norms.
    """
    n = len(z)
    if components is None:
        components = cyclic_components(n)
    zhat = np.fft.fft(np.asarray(z, dtype=np.float64))
    power = np.abs(zhat) ** 2
    absz = np.abs(zhat)
    delta = 8.0 * (math.log2(n) + 2.0) * MACHINE_EPS * float(sum(abs(x) for x in z))
    norms = []
    errs = []
    nontriv = []
    for c in components:
        if c.is_fixed_space:
            continue
        weight = 2.0 if c.real_dimension == 2 else 1.0
        norms.append(weight * power[c.frequency] / n)
        errs.append(weight * (2.0 * absz[c.frequency] * delta + 2.0 * delta * delta) / n)
        nontriv.append(c)
    k = sum(z)
    return SpectrumProfile(
        components=tuple(nontriv),
        component_norms=tuple(float(x) for x in norms),
        component_errs=tuple(float(x) for x in errs),
        fixed_norm=Fraction(k * k, n),
        err_bound=float(sum(errs)),
    )


def normalizer_finite(n: int) -> bool:
    """Whether the normalizer of C_n in GL(n, Z) is finite.

    Finite exactly when every component is rational and no two components
    are isomorphic; distinct frequency classes of C_n are never isomorphic,
    so the test reduces to rationality of every class.
    """
    comps = cyclic_components(n)
    classes = [c.frequency_class for c in comps]
    if len(set(classes)) != len(classes):
        return False
    return all(c.rational for c in comps)


def _commutant_dimension_and_field_count(group: PermGroup) -> tuple[int, bool, Optional[int]]:
    """(dimension of the commutant algebra, commutative?, number of simple factors).

    The factor count is only computed in the commutative case, as the number
    of irreducible factors of the minimal polynomial of a generating element.
    """
    from .order_units import commutant_basis  # local import, avoids a cycle

    ring = commutant_basis(group)
    basis = ring.basis
    m = len(basis)
    commutative = all(
        mat_mul(basis[i], basis[j]) == mat_mul(basis[j], basis[i])
        for i in range(m) for j in range(i + 1, m)
    )
    if not commutative:
        return m, False, None

    rng = np.random.default_rng(20210527)
    x = sympy.Symbol("x")
    for bound in (3, 7, 19, 67, 211):
        coeffs = [int(c) for c in rng.integers(-bound, bound + 1, size=m)]
        elem = tuple(
            tuple(sum(coeffs[b] * basis[b][i][j] for b in range(m))
                  for j in range(group.degree))
            for i in range(group.degree)
        )
        minpoly = sympy.Matrix(elem).charpoly(x).as_expr()
        factors = sympy.factor_list(minpoly)[1]
        distinct = [f for f, _ in factors]
        # generates the algebra iff the squarefree part has degree m
        if sum(sympy.degree(f, x) for f in distinct) == m:
            return m, True, len(distinct)
    raise RuntimeError("failed to find a generating element of the commutant algebra")


def is_qi_group(group: PermGroup) -> bool:
    """Whether the complement of the fixed space has no proper rational
    invariant subspace.

    Decided through the commutant algebra A of the group in the d x d
    rationals: the condition holds iff A is commutative with exactly two
    simple factors (one acting on the fixed space, one on its complement).
    """
    if not group.is_transitive():
        raise GroupError("QI is only defined for transitive groups")
    if group.cyclic_shift_power() is not None:
        return sympy.isprime(group.degree)
    _, commutative, nfields = _commutant_dimension_and_field_count(group)
    return commutative and nfields == 2
