"""
Search Engines for qdesign

Deterministic backtracking for D-graceful labelings, subspace blocks and
families, nested difference sets and hyperplane line partitions. Every
found witness is re-verified before it is returned.
"""

__version__ = "1.0.0"

from .backtracking import (
    BUDGET_EXCEEDED,
    EXHAUSTED,
    FOUND,
    FrobeniusSymmetry,
    LabelingSearch,
    SearchBudget,
    run_branches,
    static_vertex_order,
)
from .graceful_search import exhaustive_permutation_check, search_graceful
from .lines import hyperplane_lines, search_line_partition
from .nested_search import search_nested_set
from .subspace_search import (
    canonical_translate,
    search_family,
    search_subspace_block,
    subspace_classes,
    subspaces_through_zero,
)

__all__ = [
    "BUDGET_EXCEEDED",
    "EXHAUSTED",
    "FOUND",
    "FrobeniusSymmetry",
    "LabelingSearch",
    "SearchBudget",
    "run_branches",
    "static_vertex_order",
    "exhaustive_permutation_check",
    "search_graceful",
    "hyperplane_lines",
    "search_line_partition",
    "search_nested_set",
    "canonical_translate",
    "search_family",
    "search_subspace_block",
    "subspace_classes",
    "subspaces_through_zero",
]
