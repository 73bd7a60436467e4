"""
Data Models for qdesign

Certificates and verdicts, catalog entries and search specifications,
with their JSON forms.
"""

from .catalog_entry import CATALOG_SCHEMA, ENTRY_KINDS, CatalogEntry, EntryVerdict
from .certificates import (
    CERTIFICATE_SCHEMA,
    FAIL,
    PASS,
    SEARCH_SCHEMA,
    DesignVerdict,
    EvenDistributionVerdict,
    FamilyCertificate,
    GracefulVerdict,
    NearResolvableVerdict,
    NestedVerdict,
    SearchResult,
    Violation,
    canonical_json,
    verdict_of,
)
from .search_spec import SEARCH_SPEC_SCHEMA, SEARCH_TARGETS, SearchSpec

__version__ = "1.0.0"
__all__ = [
    "CATALOG_SCHEMA",
    "ENTRY_KINDS",
    "CatalogEntry",
    "EntryVerdict",
    "CERTIFICATE_SCHEMA",
    "FAIL",
    "PASS",
    "SEARCH_SCHEMA",
    "DesignVerdict",
    "EvenDistributionVerdict",
    "FamilyCertificate",
    "GracefulVerdict",
    "NearResolvableVerdict",
    "NestedVerdict",
    "SearchResult",
    "Violation",
    "canonical_json",
    "verdict_of",
    "SEARCH_SPEC_SCHEMA",
    "SEARCH_TARGETS",
    "SearchSpec",
]
