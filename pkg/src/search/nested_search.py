"""
Nested Difference Set Search

Looks for a k'-subset of a difference set D that is itself a
(n, k', lambda') difference set. Subsets are built in ascending order;
a branch dies as soon as some nonzero residue is covered more than
lambda' times.
"""

import logging
from typing import Iterable, List, Optional

from src.core.error_handling import InfeasibleCountError, OperationTracker, SearchError
from src.models.certificates import SearchResult
from src.search.backtracking import FOUND, NodeCounter, SearchBudget, run_branches
from src.services.task_runner import ParallelRunner
from src.verification.graceful import check_nested_difference_set

logger = logging.getLogger(__name__)


class _SubsetSearch:
    def __init__(self, points: List[int], size: int, lam: int, n: int):
        self.points = points
        self.size = size
        self.lam = lam
        self.n = n

    def first(self, start: int, counter: NodeCounter) -> Optional[List[int]]:
        hits = [0] * self.n
        chosen: List[int] = []

        def add(x: int) -> List[int]:
            touched = []
            for y in chosen:
                for d in ((x - y) % self.n, (y - x) % self.n):
                    hits[d] += 1
                    touched.append(d)
            return touched

        def descend(index: int) -> bool:
            if len(chosen) == self.size:
                return True
            # not enough points left to finish
            if len(self.points) - index < self.size - len(chosen):
                return False
            for j in range(index, len(self.points)):
                if len(self.points) - j < self.size - len(chosen):
                    break
                counter.tick()
                x = self.points[j]
                touched = add(x)
                if all(hits[d] <= self.lam for d in touched):
                    chosen.append(x)
                    if descend(j + 1):
                        return True
                    chosen.pop()
                for d in touched:
                    hits[d] -= 1
            return False

        counter.tick()
        chosen.append(self.points[start])
        return list(chosen) if descend(start + 1) else None


def search_nested_set(
    D: Iterable[int],
    size: int,
    lam: int,
    n: int,
    budget: Optional[SearchBudget] = None,
    runner: Optional[ParallelRunner] = None,
    seed: int = 0,
) -> SearchResult:
    """
    First (in ascending order) size-subset of D forming an (n, size, lam)
    difference set.

    Raises:
        InfeasibleCountError: size(size-1) != lam(n-1), or size > |D|
    """
    points = sorted({int(x) % n for x in D})
    if size > len(points) or size < 1:
        raise InfeasibleCountError(
            f"cannot choose {size} points from {len(points)}", required=size, available=len(points)
        )
    if size * (size - 1) != lam * (n - 1):
        raise InfeasibleCountError(
            f"{size} points give {size * (size - 1)} differences; Z_{n} needs {lam * (n - 1)}",
            required=lam * (n - 1),
            available=size * (size - 1),
        )
    budget = budget or SearchBudget.from_config()
    engine = _SubsetSearch(points, size, lam, n)
    branches = list(range(len(points) - size + 1))

    with OperationTracker(f"search_nested_set(n={n}, k={size})") as tracker:
        outcome = run_branches(branches, engine.first, budget, runner, label="search_nested_set")

    witness = certificate = None
    if outcome.status == FOUND:
        verdict = check_nested_difference_set(points, outcome.witness, n, lam)
        if not verdict.passed:
            raise SearchError(f"search produced a subset that fails verification: {verdict.to_dict()}")
        witness = {"kind": "nested_set", "D": points, "subset": sorted(outcome.witness), "lambda": lam}
        certificate = verdict.to_dict()
    logger.info(f"search_nested_set in Z_{n}: {outcome.status} after {outcome.nodes} nodes")
    return SearchResult(
        status=outcome.status,
        target="nested_set",
        nodes_explored=outcome.nodes,
        witness=witness,
        certificate=certificate,
        seed=seed,
        timing_ms=tracker.elapsed_ms,
    )
