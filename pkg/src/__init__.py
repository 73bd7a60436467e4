"""
qdesign: verification and search toolkit for graph decompositions of
projective spaces over finite fields.
"""

__version__ = "1.0.0"
