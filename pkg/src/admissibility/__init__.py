"""
Admissibility Predicates and Size Tables for qdesign
"""

__version__ = "1.0.0"

from .predicates import (
    AdmissibilityVerdict,
    admissible_general,
    admissible_parameters,
    cycle_admissible,
    graceful_degree_targets,
    path_admissible,
    q_bracket_gcd,
    singer_graceful_admissible,
    steiner_admissible,
)
from .sizes import (
    SteinerSizes,
    admissibility_table,
    fano_size_table,
    frobenius_initial_count,
    steiner_family_sizes,
    steiner_size_table,
    table_to_tsv,
)

__all__ = [
    "AdmissibilityVerdict",
    "admissible_general",
    "admissible_parameters",
    "cycle_admissible",
    "graceful_degree_targets",
    "path_admissible",
    "q_bracket_gcd",
    "singer_graceful_admissible",
    "steiner_admissible",
    "SteinerSizes",
    "admissibility_table",
    "fano_size_table",
    "frobenius_initial_count",
    "steiner_family_sizes",
    "steiner_size_table",
    "table_to_tsv",
]
