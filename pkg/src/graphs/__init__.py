"""
Graphs, Labelings and Difference Lists for qdesign
"""

__version__ = "1.0.0"

from .families import AbstractGraph, make_family_graph, make_rotation
from .labeled import (
    DifferenceList,
    LabeledGraph,
    difference_list,
    difference_table,
    expand_frobenius_seed,
    log_image,
)

__all__ = [
    "AbstractGraph",
    "make_family_graph",
    "make_rotation",
    "DifferenceList",
    "LabeledGraph",
    "difference_list",
    "difference_table",
    "expand_frobenius_seed",
    "log_image",
]
