"""
D-Graceful Labeling Search

Backtracking over injective maps V(Gamma) -> D with incremental
multiplicity pruning: a residue may never be covered more than lambda
times. Without a symmetry constraint an exhausted search is a proof of
nonexistence at desk scale, cross-checked by a brute-force permutation
oracle.
"""

import logging
from itertools import permutations
from typing import Iterable, Optional

import numpy as np

from src.core.error_handling import InfeasibleCountError, OperationTracker, SearchError
from src.graphs.differences import difference_counts
from src.graphs.families import AbstractGraph
from src.graphs.labeled import LabeledGraph
from src.models.certificates import SearchResult
from src.search.backtracking import (
    FOUND,
    FrobeniusSymmetry,
    LabelingSearch,
    SearchBudget,
    run_branches,
)
from src.services.task_runner import ParallelRunner
from src.verification.graceful import verify_graceful_labeling

logger = logging.getLogger(__name__)


def _check_counts(D: frozenset, graph: AbstractGraph, lam: int, n: int):
    if graph.order > len(D):
        raise InfeasibleCountError(
            f"{graph.order} vertices cannot be labeled injectively from {len(D)} points",
            required=graph.order,
            available=len(D),
        )
    if 2 * graph.size != lam * (n - 1):
        raise InfeasibleCountError(
            f"2|E| = {2 * graph.size} differences cannot cover {n - 1} residues {lam} times",
            required=lam * (n - 1),
            available=2 * graph.size,
        )


def search_graceful(
    D: Iterable[int],
    graph: AbstractGraph,
    lam: int,
    n: int,
    budget: Optional[SearchBudget] = None,
    runner: Optional[ParallelRunner] = None,
    symmetry: Optional[FrobeniusSymmetry] = None,
    v: Optional[int] = None,
    seed: int = 0,
) -> SearchResult:
    """
    Find a D-graceful labeling of graph with multiplicity lam over Z_n.

    Raises:
        InfeasibleCountError: too few points or the edge count cannot
            cover Z_n minus 0 exactly lam times
    """
    points = frozenset(int(x) % n for x in D)
    _check_counts(points, graph, lam, n)
    budget = budget or SearchBudget.from_config()
    capacity = np.full(n, lam, dtype=np.int64)
    capacity[0] = 0
    engine = LabelingSearch(graph, points, n, capacity, symmetry=symmetry, break_cycle=True, v=v)

    with OperationTracker(f"search_graceful(n={n}, order={graph.order})") as tracker:
        outcome = run_branches(
            engine.first_values(),
            lambda value, counter: engine.first(counter, value),
            budget,
            runner,
            label="search_graceful",
        )
    witness = certificate = None
    if outcome.status == FOUND:
        block = LabeledGraph(graph, outcome.witness, n)
        verdict = verify_graceful_labeling(points, block, lam)
        if not verdict.passed:
            raise SearchError(f"search produced a labeling that fails verification: {verdict.to_dict()}")
        witness = {"kind": "graceful_labeling", "D": sorted(points), "lambda": lam, "block": block.to_dict()}
        certificate = verdict.to_dict()
    logger.info(f"search_graceful over Z_{n}: {outcome.status} after {outcome.nodes} nodes")
    return SearchResult(
        status=outcome.status,
        target="graceful_labeling",
        nodes_explored=outcome.nodes,
        witness=witness,
        certificate=certificate,
        seed=seed,
        timing_ms=tracker.elapsed_ms,
    )


def exhaustive_permutation_check(D: Iterable[int], graph: AbstractGraph, lam: int, n: int) -> int:
    """Number of D-graceful labelings found by trying every injective map"""
    points = sorted({int(x) % n for x in D})
    edges = np.asarray(graph.edges, dtype=np.int64).reshape(-1, 2)
    expected = np.full(n, lam, dtype=np.int64)
    expected[0] = 0
    found = 0
    for labels in permutations(points, graph.order):
        if np.array_equal(difference_counts(labels, edges, n), expected):
            found += 1
    return found
