"""
Catalog Entry Model for qdesign

A catalog entry pairs one explicit construction with the verdict it is
expected to produce. Entries are stored as canonical JSON so that loading
and re-serializing an entry reproduces the stored bytes exactly.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.core.error_handling import CorruptEntryError
from src.models.certificates import FAIL, PASS, canonical_json

logger = logging.getLogger(__name__)

CATALOG_SCHEMA = "qdesign.catalog-entry/1"

ENTRY_KINDS = (
    "family",
    "relative_family",
    "initial_blocks",
    "graceful_labeling",
    "design",
    "nested_set",
    "near_resolvable",
    "graceful_search",
)

# data keys every entry of a kind must carry
REQUIRED_DATA = {
    "family": ("blocks",),
    "relative_family": ("blocks", "spread_n"),
    "initial_blocks": ("blocks", "multipliers"),
    "graceful_labeling": ("D",),
    "design": ("blocks", "multipliers"),
    "nested_set": ("D", "subset"),
    "near_resolvable": ("D", "block"),
    "graceful_search": ("D", "graph"),
}


@dataclass
class CatalogEntry:
    """
    One construction with its expected verdict.

    field_spec is a field descriptor ({p, e, v, modulus}) or None for entries
    that live in Z_n without a Singer model; those carry data["n"].
    """

    id: str
    kind: str
    field_spec: Optional[Dict[str, Any]]
    data: Dict[str, Any]
    expected: Dict[str, Any]
    provenance: str = ""
    schema: str = CATALOG_SCHEMA
    extra: Dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def expected_verdict(self) -> str:
        return self.expected.get("verdict", PASS)

    @property
    def lam(self) -> int:
        return int(self.expected.get("lambda", 1))

    def get_validation_errors(self) -> List[str]:
        errors = []
        if self.schema != CATALOG_SCHEMA:
            errors.append(f"schema {self.schema!r} is not {CATALOG_SCHEMA}")
        if not self.id:
            errors.append("missing id")
        if self.kind not in ENTRY_KINDS:
            errors.append(f"unknown kind {self.kind!r}")
        else:
            for key in REQUIRED_DATA[self.kind]:
                if key not in self.data:
                    errors.append(f"kind {self.kind} needs data.{key}")
        if self.expected_verdict not in (PASS, FAIL):
            errors.append(f"expected verdict must be pass or fail, got {self.expected_verdict!r}")
        if self.field_spec is None and "n" not in self.data:
            errors.append("entries without a field descriptor need data.n")
        if self.field_spec is not None:
            missing = [k for k in ("p", "v", "modulus") if k not in self.field_spec]
            if missing:
                errors.append(f"field descriptor lacks {missing}")
        return errors

    def is_valid(self) -> bool:
        return not self.get_validation_errors()

    def to_dict(self) -> Dict[str, Any]:
        data = dict(self.extra)
        data.update(
            {
                "schema": self.schema,
                "id": self.id,
                "kind": self.kind,
                "field": self.field_spec,
                "data": self.data,
                "expected": self.expected,
                "provenance": self.provenance,
            }
        )
        return data

    def serialize(self) -> str:
        """Canonical JSON with a trailing newline"""
        return canonical_json(self.to_dict()) + "\n"

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CatalogEntry":
        """
        Parse and validate a stored entry.

        Raises:
            CorruptEntryError: the record violates the entry schema
        """
        if not isinstance(data, dict):
            raise CorruptEntryError(f"catalog entry must be an object, got {type(data).__name__}")
        entry_id = str(data.get("id", "Unknown"))
        known = {"schema", "id", "kind", "field", "data", "expected", "provenance"}
        try:
            entry = cls(
                id=entry_id,
                kind=str(data["kind"]),
                field_spec=data.get("field"),
                data=dict(data["data"]),
                expected=dict(data["expected"]),
                provenance=str(data.get("provenance", "")),
                schema=str(data.get("schema", "")),
                extra={k: v for k, v in data.items() if k not in known},
            )
        except (KeyError, TypeError, ValueError) as e:
            logger.error(f"Failed to parse catalog entry {entry_id}: {e}")
            raise CorruptEntryError(f"malformed catalog entry: {e}", entry_id=entry_id)

        errors = entry.get_validation_errors()
        if errors:
            raise CorruptEntryError(f"catalog entry {entry_id} is invalid", entry_id=entry_id, errors=errors)
        return entry


@dataclass
class EntryVerdict:
    """Observed verdict of one catalog entry next to the expected one"""

    entry_id: str
    kind: str
    expected: str
    observed: str
    certificates: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return self.expected == self.observed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": "qdesign.entry-verdict/1",
            "id": self.entry_id,
            "kind": self.kind,
            "expected": self.expected,
            "observed": self.observed,
            "matches_expected": self.matches,
            "certificates": self.certificates,
        }
