"""
Certificate Models for qdesign

Structured verdicts returned by the verification and search engines and
their JSON form. A certificate never raises for a failed check; the
verdict and the violation list carry the outcome.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

CERTIFICATE_SCHEMA = "qdesign.certificate/1"
SEARCH_SCHEMA = "qdesign.search-result/1"

PASS = "pass"
FAIL = "fail"


def canonical_json(obj: Any) -> str:
    """Sorted keys, compact separators, ASCII only"""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def verdict_of(passed: bool) -> str:
    return PASS if passed else FAIL


@dataclass(frozen=True)
class Violation:
    """Residue (or encoded pair) whose multiplicity differs from the target"""

    residue: int
    expected: int
    got: int

    def to_dict(self) -> Dict[str, int]:
        return {"residue": self.residue, "expected": self.expected, "got": self.got}

    @classmethod
    def from_triples(cls, triples) -> List["Violation"]:
        return [cls(r, e, g) for r, e, g in triples]


@dataclass
class FamilyCertificate:
    """Outcome of a (relative) difference family check"""

    verdict: str
    lam: int
    n: int
    coverage: Dict[int, int] = field(default_factory=dict, repr=False)
    violations: List[Violation] = field(default_factory=list)
    block_issues: List[Dict[str, Any]] = field(default_factory=list)
    subspace_witnesses: List[List[int]] = field(default_factory=list)
    relative_h: Optional[int] = None
    timing_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self, include_timing: bool = True, violation_limit: int = 50) -> Dict[str, Any]:
        data = {
            "kind": "family",
            "verdict": self.verdict,
            "lambda": self.lam,
            "n": self.n,
            "relative_h": self.relative_h,
            "violations": [v.to_dict() for v in self.violations[:violation_limit]],
            "violation_count": len(self.violations),
            "block_issues": self.block_issues,
            "subspace_witnesses": self.subspace_witnesses,
        }
        if include_timing:
            data["timing_ms"] = self.timing_ms
        return data


@dataclass
class EvenDistributionVerdict:
    """Hits of the initial differences on each multiplier orbit"""

    verdict: str
    lam: int
    orbit_count: int
    orbit_size: int
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "evenly_distributed",
            "verdict": self.verdict,
            "lambda": self.lam,
            "orbit_count": self.orbit_count,
            "orbit_size": self.orbit_size,
            "violations": [v.to_dict() for v in self.violations[:50]],
        }


@dataclass
class DesignVerdict:
    """Outcome of a pair-coverage check on a developed design"""

    verdict: str
    lam: int
    points: int
    blocks: int
    method: str
    pairs_checked: int = 0
    coverage_sum: int = 0
    expected_sum: int = 0
    pair_violations: List[Tuple[int, int, int, int]] = field(default_factory=list)
    subspace_failures: List[int] = field(default_factory=list)
    subspace_method: Optional[str] = None
    gdd_h: Optional[int] = None
    improper_degree: int = 0
    timing_ms: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data = {
            "kind": "design",
            "verdict": self.verdict,
            "lambda": self.lam,
            "points": self.points,
            "blocks": self.blocks,
            "method": self.method,
            "pairs_checked": self.pairs_checked,
            "coverage_sum": self.coverage_sum,
            "expected_sum": self.expected_sum,
            "violations": [
                {"pair": [a, b], "expected": e, "got": g} for a, b, e, g in self.pair_violations[:50]
            ],
            "subspace_failures": self.subspace_failures[:50],
            "subspace_method": self.subspace_method,
            "gdd_h": self.gdd_h,
            "improper_degree": self.improper_degree,
        }
        if include_timing:
            data["timing_ms"] = self.timing_ms
        return data


@dataclass
class GracefulVerdict:
    verdict: str
    lam: int
    n: int
    injective: bool
    labels_in_set: bool
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "graceful",
            "verdict": self.verdict,
            "lambda": self.lam,
            "n": self.n,
            "injective": self.injective,
            "labels_in_set": self.labels_in_set,
            "violations": [v.to_dict() for v in self.violations[:50]],
        }


@dataclass
class NestedVerdict:
    verdict: str
    n: int
    subset: bool
    parameters: Optional[Tuple[int, int, int]]
    expected_lambda: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "nested_set",
            "verdict": self.verdict,
            "n": self.n,
            "subset": self.subset,
            "parameters": list(self.parameters) if self.parameters else None,
            "expected_lambda": self.expected_lambda,
        }


@dataclass
class NearResolvableVerdict:
    verdict: str
    lines: List[bool]
    disjoint: bool
    covers_hyperplane: bool
    clique_sums: List[Optional[int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "near_resolvable",
            "verdict": self.verdict,
            "lines": self.lines,
            "disjoint": self.disjoint,
            "covers_hyperplane": self.covers_hyperplane,
            "clique_sums": self.clique_sums,
        }


@dataclass
class SearchResult:
    """Outcome of a search; found implies the certificate passed"""

    status: str
    target: str
    nodes_explored: int
    witness: Optional[Dict[str, Any]] = None
    certificate: Optional[Dict[str, Any]] = None
    seed: int = 0
    timing_ms: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data = {
            "schema": SEARCH_SCHEMA,
            "status": self.status,
            "target": self.target,
            "nodes_explored": self.nodes_explored,
            "witness": self.witness,
            "certificate": self.certificate,
            "seed": self.seed,
        }
        if include_timing:
            data["timing_ms"] = self.timing_ms
        return data
