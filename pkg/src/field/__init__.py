"""
Finite Field Arithmetic for qdesign

GF(q^v) in exponent (discrete log) form with Zech tables, built over a
prime or prime-power base field.
"""

__version__ = "1.0.0"

from .galois_field import (
    FieldContext,
    FieldElement,
    build_field,
    build_field_from_descriptor,
    modulus_from_coefficients,
    add,
    mul,
    inv,
    power,
)

__all__ = [
    "FieldContext",
    "FieldElement",
    "build_field",
    "build_field_from_descriptor",
    "modulus_from_coefficients",
    "add",
    "mul",
    "inv",
    "power",
]
