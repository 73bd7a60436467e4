"""
Singer-Group Geometry for qdesign

Points of PG(F_q^v) as residues modulo [v]_q: spans, lines, hyperplanes,
Desarguesian spreads and the Frobenius action.
"""

__version__ = "1.0.0"

from .singer import (
    SingerContext,
    Subspace,
    SubspaceCheck,
    Spread,
    blocks_are_subspaces,
    frobenius_semiregular_on_nonidentity,
    q_bracket,
)

__all__ = [
    "SingerContext",
    "Subspace",
    "SubspaceCheck",
    "Spread",
    "blocks_are_subspaces",
    "frobenius_semiregular_on_nonidentity",
    "q_bracket",
]
