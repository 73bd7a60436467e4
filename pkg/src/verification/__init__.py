"""
Verification Engine for qdesign

Difference families (plain and relative), multiplier expansion,
development into designs and GDDs, graceful labelings and difference sets.
"""

__version__ = "1.0.0"

from .designs import DesignInstance, develop, verify_design, verify_near_resolvable, walecki_hcs
from .families import (
    FamilyCandidate,
    InitialBlocks,
    check_evenly_distributed,
    expand_initial_blocks,
    family_coverage,
    verify_family,
    verify_log_route,
)
from .graceful import (
    check_nested_difference_set,
    difference_set_parameters,
    paley_circulant_labeling,
    quadratic_residues,
    verify_graceful_labeling,
)

__all__ = [
    "DesignInstance",
    "develop",
    "verify_design",
    "verify_near_resolvable",
    "walecki_hcs",
    "FamilyCandidate",
    "InitialBlocks",
    "check_evenly_distributed",
    "expand_initial_blocks",
    "family_coverage",
    "verify_family",
    "verify_log_route",
    "check_nested_difference_set",
    "difference_set_parameters",
    "paley_circulant_labeling",
    "quadratic_residues",
    "verify_graceful_labeling",
]
