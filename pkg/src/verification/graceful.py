"""
Graceful Labelings and Difference Sets

A D-graceful labeling of a graph places its vertices injectively on the
points of a difference set D so that the edge differences cover every
nonzero residue exactly lambda times.
"""

import logging
from typing import Iterable, Optional, Sequence, Tuple

import galois
import numpy as np

from src.core.error_handling import BadPrimeError
from src.graphs.differences import difference_counts, mismatches, set_difference_counts
from src.graphs.families import make_family_graph
from src.graphs.labeled import LabeledGraph
from src.models.certificates import GracefulVerdict, NestedVerdict, Violation, verdict_of

logger = logging.getLogger(__name__)


def _residues(points: Iterable[int], n: int) -> frozenset:
    return frozenset(int(x) % n for x in points)


def verify_graceful_labeling(D: Iterable[int], block: LabeledGraph, lam: int) -> GracefulVerdict:
    n = block.n
    allowed = _residues(D, n)
    injective = block.is_injective
    inside = block.label_set <= allowed

    counts = difference_counts(block.labels, block.edge_array, n)
    expected = np.full(n, lam, dtype=np.int64)
    expected[0] = 0
    violations = Violation.from_triples(mismatches(counts, expected))
    passed = injective and inside and not violations
    logger.debug(f"graceful check over Z_{n}: injective={injective} inside={inside} "
                 f"violations={len(violations)}")
    return GracefulVerdict(
        verdict=verdict_of(passed),
        lam=lam,
        n=n,
        injective=injective,
        labels_in_set=inside,
        violations=violations,
    )


def quadratic_residues(p: int) -> Tuple[int, ...]:
    return tuple(sorted({(x * x) % p for x in range(1, p)}))


def paley_circulant_labeling(p: int, S: Sequence[int]) -> LabeledGraph:
    """
    Label the circulant C(Z_N; S), N = (p-1)/2, by vertex i -> s^i where s
    generates the squares of Z_p. The result is graceful with respect to
    the Paley difference set with lambda = |S|.

    Raises:
        BadPrimeError: p is not a prime congruent to 3 modulo 4
    """
    if p < 7 or not galois.is_prime(p) or p % 4 != 3:
        raise BadPrimeError(f"Paley labelings need a prime p = 3 (mod 4), p >= 7; got {p}", {"p": p})
    N = (p - 1) // 2
    graph = make_family_graph("circulant", n=N, jumps=list(S))
    s = pow(int(galois.primitive_root(p)), 2, p)
    labels = tuple(pow(s, i, p) for i in range(N))
    return LabeledGraph(graph, labels, p)


def difference_set_parameters(points: Iterable[int], n: int) -> Optional[Tuple[int, int, int]]:
    """(n, k, lambda) when the points form a difference set in Z_n, else None"""
    members = _residues(points, n)
    k = len(members)
    if k == 0:
        return None
    counts = set_difference_counts(members, n)[1:]
    if counts.size == 0:
        return (n, k, 0)
    lam = int(counts[0])
    if np.all(counts == lam):
        return (n, k, lam)
    return None


def check_nested_difference_set(
    D: Iterable[int], sub: Iterable[int], n: int, lam: Optional[int] = None
) -> NestedVerdict:
    """D' must lie inside D and be a difference set (with the given lambda, if any)"""
    outer = _residues(D, n)
    inner = _residues(sub, n)
    is_subset = inner <= outer
    parameters = difference_set_parameters(inner, n)
    ok = is_subset and parameters is not None and (lam is None or parameters[2] == lam)
    return NestedVerdict(
        verdict=verdict_of(ok),
        n=n,
        subset=is_subset,
        parameters=parameters,
        expected_lambda=lam,
    )
