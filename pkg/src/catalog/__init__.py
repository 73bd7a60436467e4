"""
Construction Catalog for qdesign

Shipped records of explicit constructions (and documented negative
results) together with the verdict each is expected to produce.
"""

__version__ = "1.0.0"

from .registry import (
    INCONSISTENT,
    PACKAGED_CATALOG_DIR,
    entry_family,
    export_entries,
    list_entries,
    load_entry,
    raw_entry,
    verify_all,
    verify_entry,
    verify_loaded_entry,
)

__all__ = [
    "INCONSISTENT",
    "PACKAGED_CATALOG_DIR",
    "entry_family",
    "export_entries",
    "list_entries",
    "load_entry",
    "raw_entry",
    "verify_all",
    "verify_entry",
    "verify_loaded_entry",
]
