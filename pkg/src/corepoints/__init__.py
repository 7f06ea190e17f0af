"""Exact arithmetic for core points of lattice orbit polytopes under
permutation symmetry, and unimodular reformulation of symmetric integer
linear programs."""

from .groups import PermGroup, act, orbit, project_fixed, layer_of, parse_cycles
from .repdecomp import (IsotypicComponent, SpectrumProfile, cyclic_components,
                        projection_norms, normalizer_finite, is_qi_group)
from .geometry import (OrbitPolytope, orbit_polytope, contains, integral_points,
                       is_core_point)
from .order_units import (CommutantRing, UnitElement, EquivalenceMove,
                          commutant_basis, verify_unit, verify_normalizer_element,
                          bass_units, normalizer_generators, normalizer_generators_sym,
                          apply_move, translation_equivalent, normalizer_equivalent)
from .balance import LogLattice, build_log_lattice, log_map, balance_point, reduce_min_norm
from .enumeration import (CoreClass, Canonicalizer, canonical_form, norm_bound,
                          enumerate_core_classes, sym_core_classification)
from .ilp import (ILPInstance, ReformulationReport, parse_instance, write_instance,
                  check_invariance, transform, improve_formulation,
                  generate_hard_instance, derive_box, brute_force_feasible)
from .errors import BudgetExceeded, DimensionTooLarge

__version__ = "0.1.0"

__all__ = [
    "PermGroup", "act", "orbit", "project_fixed", "layer_of", "parse_cycles",
    "IsotypicComponent", "SpectrumProfile", "cyclic_components",
    "projection_norms", "normalizer_finite", "is_qi_group",
    "OrbitPolytope", "orbit_polytope", "contains", "integral_points", "is_core_point",
    "CommutantRing", "UnitElement", "EquivalenceMove", "commutant_basis",
    "verify_unit", "verify_normalizer_element", "bass_units",
    "normalizer_generators", "normalizer_generators_sym", "apply_move",
    "translation_equivalent", "normalizer_equivalent",
    "LogLattice", "build_log_lattice", "log_map", "balance_point", "reduce_min_norm",
    "CoreClass", "Canonicalizer", "canonical_form", "norm_bound",
    "enumerate_core_classes", "sym_core_classification",
    "ILPInstance", "ReformulationReport", "parse_instance", "write_instance",
    "check_invariance", "transform", "improve_formulation",
    "generate_hard_instance", "derive_box", "brute_force_feasible",
    "BudgetExceeded", "DimensionTooLarge",
]
