"""
Backtracking Core for qdesign Searches

Budgets, the deterministic branch reduction shared by every search, and
LabelingSearch: injective assignment of graph vertices to candidate
labels such that the edge differences, grouped into bins (residues or
multiplier orbits), never exceed a per-bin capacity.

Vertex order is static: the highest-degree vertex first, then repeatedly
the highest-degree unassigned vertex adjacent to the assigned ones, ties
broken by the lowest index. Values are tried in ascending order.
"""

import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from src.core.error_handling import BadParamsError
from src.graphs.families import AbstractGraph, permutation_order
from src.services.config_loader import get_config
from src.services.task_runner import ParallelRunner

logger = logging.getLogger(__name__)

FOUND = "found"
EXHAUSTED = "exhausted"
BUDGET_EXCEEDED = "budget-exceeded"

TIME_CHECK_INTERVAL = 4096


class BudgetExceeded(Exception):
    """Raised inside a branch when its node or time budget runs out"""


@dataclass(frozen=True)
class SearchBudget:
    nodes: int
    seconds: float

    @classmethod
    def from_config(cls, nodes: Optional[int] = None, seconds: Optional[float] = None) -> "SearchBudget":
        config = get_config()
        return cls(
            nodes=int(nodes if nodes is not None else config.budget_nodes),
            seconds=float(seconds if seconds is not None else config.budget_seconds),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"nodes": self.nodes, "seconds": self.seconds}


class NodeCounter:
    """
    Counts search nodes of one branch against its budget. Branches of one
    search share a deadline, so the seconds budget bounds the whole search.
    """

    def __init__(self, budget: SearchBudget, deadline: Optional[float] = None):
        self.budget = budget
        self.nodes = 0
        self.started = time.perf_counter()
        self.deadline = deadline if deadline is not None else self.started + budget.seconds

    def expired(self) -> bool:
        return time.perf_counter() > self.deadline

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.nodes:
            raise BudgetExceeded()
        if self.nodes % TIME_CHECK_INTERVAL == 0 and self.expired():
            raise BudgetExceeded()


@dataclass
class BranchOutcome:
    status: str
    nodes: int
    witness: Any = None


def run_branches(
    branches: Sequence[Any],
    explore: Callable[[Any, NodeCounter], Any],
    budget: SearchBudget,
    runner: Optional[ParallelRunner] = None,
    label: str = "search",
    deadline: Optional[float] = None,
) -> BranchOutcome:
    """
    Explore top-level branches in order; explore returns a witness or None.

    Every branch runs with the full node budget, and all branches share one
    wall-clock deadline (budget.seconds from dispatch unless given).
    Outcomes are reduced in branch order: the first branch that finds a
    witness or runs out of budget decides the result, and the node total
    is cumulative up to it. When the cumulative count passes the budget
    before that, the search is budget-exceeded. Apart from the deadline the
    outcome is the same for any number of workers.
    """
    runner = runner or ParallelRunner(1)
    branches = list(branches)
    if deadline is None:
        deadline = time.perf_counter() + budget.seconds

    def task(branch) -> BranchOutcome:
        counter = NodeCounter(budget, deadline)
        if counter.expired():
            return BranchOutcome(BUDGET_EXCEEDED, 0)
        try:
            witness = explore(branch, counter)
        except BudgetExceeded:
            return BranchOutcome(BUDGET_EXCEEDED, counter.nodes)
        return BranchOutcome(FOUND if witness is not None else EXHAUSTED, counter.nodes, witness)

    total = 0

    def accept(outcome: BranchOutcome) -> bool:
        nonlocal total
        total += outcome.nodes
        return outcome.status != EXHAUSTED or total > budget.nodes

    outcomes = runner.first_in_order(task, branches, accept, label=label)
    nodes = sum(o.nodes for o in outcomes)
    if not outcomes:
        return BranchOutcome(EXHAUSTED, 0)
    last = outcomes[-1]
    if last.status == FOUND:
        return BranchOutcome(FOUND, nodes, last.witness)
    if last.status == BUDGET_EXCEEDED or (nodes > budget.nodes and len(outcomes) < len(branches)):
        logger.warning(f"{label}: budget of {budget.nodes} nodes / {budget.seconds}s exceeded")
        return BranchOutcome(BUDGET_EXCEEDED, nodes)
    return BranchOutcome(EXHAUSTED, nodes)


def static_vertex_order(graph: AbstractGraph) -> List[int]:
    """Fail-first order over all vertices, including isolated ones"""
    degrees = graph.degrees()
    adjacency = graph.adjacency()
    remaining = set(range(graph.order))
    frontier = set()
    order: List[int] = []
    while remaining:
        pool = frontier & remaining or remaining
        vertex = min(pool, key=lambda x: (-degrees[x], x))
        order.append(vertex)
        remaining.discard(vertex)
        frontier.update(adjacency[vertex])
    return order


@dataclass(frozen=True)
class FrobeniusSymmetry:
    """Labels satisfy label(rotation(x)) = multiplier * label(x) mod n"""

    rotation: Tuple[int, ...]
    multiplier: int

    def orbit(self, vertex: int) -> List[int]:
        members = [vertex]
        x = self.rotation[vertex]
        while x != vertex:
            members.append(x)
            x = self.rotation[x]
        return members

    def to_dict(self) -> Dict[str, Any]:
        return {"rotation": list(self.rotation), "multiplier": self.multiplier}


class LabelingSearch:
    """
    Depth-first enumeration of labelings of `graph` by distinct `values`.

    Each difference d of an edge (both orientations) lands in bin_of[d];
    capacity[b] bounds the hits of bin b. With a Frobenius symmetry whole
    rotation orbits are labeled at once. break_cycle keeps only labelings
    of a cycle with the smallest label on vertex 0 and label(1) < label(k-1).
    """

    def __init__(
        self,
        graph: AbstractGraph,
        values: Sequence[int],
        n: int,
        capacity: np.ndarray,
        bin_of: Optional[np.ndarray] = None,
        symmetry: Optional[FrobeniusSymmetry] = None,
        break_cycle: bool = False,
        v: Optional[int] = None,
    ):
        self.graph = graph
        self.n = n
        self.values = sorted({int(x) % n for x in values})
        self.allowed = set(self.values)
        self.bin_of = (np.arange(n) if bin_of is None else np.asarray(bin_of)).tolist()
        self.capacity = [int(c) for c in capacity]
        self.adjacency = graph.adjacency()
        self.symmetry = symmetry
        self.break_cycle = break_cycle and graph.family == "cycle" and symmetry is None

        if symmetry is not None:
            if sorted(symmetry.rotation) != list(range(graph.order)):
                raise BadParamsError("rotation is not a permutation of the vertices", family=graph.family)
            if v is not None and v % permutation_order(symmetry.rotation):
                raise BadParamsError(
                    f"rotation order {permutation_order(symmetry.rotation)} does not divide {v}",
                    family=graph.family,
                )

        self.steps: List[List[Tuple[int, int]]] = []
        seen = set()
        for vertex in static_vertex_order(graph):
            if vertex in seen:
                continue
            if symmetry is None:
                members = [(vertex, 1)]
            else:
                members = [
                    (x, pow(symmetry.multiplier, j, n)) for j, x in enumerate(symmetry.orbit(vertex))
                ]
            seen.update(x for x, _ in members)
            self.steps.append(members)

    def _place(self, labels: List[Optional[int]], hits: List[int], vertex: int, value: int,
               undo: List[int]) -> bool:
        labels[vertex] = value
        n = self.n
        for w in self.adjacency[vertex]:
            other = labels[w]
            if other is None or w == vertex:
                continue
            d = (value - other) % n
            for b in (self.bin_of[d], self.bin_of[n - d]):
                hits[b] += 1
                undo.append(b)
                if hits[b] > self.capacity[b]:
                    return False
        return True

    def _assign(self, labels, hits, used, step, value) -> Tuple[bool, List[int], List[int]]:
        undo_bins: List[int] = []
        placed: List[int] = []
        for vertex, mult in step:
            label = (value * mult) % self.n
            if label not in self.allowed or label in used:
                return False, undo_bins, placed
            used.add(label)
            placed.append(vertex)
            if not self._place(labels, hits, vertex, label, undo_bins):
                return False, undo_bins, placed
        return True, undo_bins, placed

    def _release(self, labels, hits, used, undo_bins, placed):
        for b in undo_bins:
            hits[b] -= 1
        for vertex in placed:
            used.discard(labels[vertex])
            labels[vertex] = None

    def _cycle_ok(self, labels, vertex: int, value: int) -> bool:
        if vertex == 0:
            return True
        if labels[0] is not None and value <= labels[0]:
            return False
        k = self.graph.order
        if vertex == k - 1 and labels[1] is not None and value <= labels[1]:
            return False
        return True

    def solutions(self, counter: NodeCounter, first_value: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Yield complete labelings in the fixed node order"""
        labels: List[Optional[int]] = [None] * self.graph.order
        hits = [0] * len(self.capacity)
        used: set = set()
        depth_limit = len(self.steps)

        def descend(depth: int):
            if depth == depth_limit:
                yield tuple(labels)
                return
            step = self.steps[depth]
            head = step[0][0]
            candidates = self.values if depth or first_value is None else [first_value]
            for value in candidates:
                if self.break_cycle and not self._cycle_ok(labels, head, value):
                    continue
                counter.tick()
                ok, undo_bins, placed = self._assign(labels, hits, used, step, value)
                if ok:
                    yield from descend(depth + 1)
                self._release(labels, hits, used, undo_bins, placed)

        if depth_limit == 0:
            yield ()
            return
        yield from descend(0)

    def first(self, counter: NodeCounter, first_value: Optional[int] = None) -> Optional[Tuple[int, ...]]:
        return next(self.solutions(counter, first_value), None)

    def first_values(self) -> List[int]:
        """Top-level branches: candidate values of the first step"""
        return list(self.values)
