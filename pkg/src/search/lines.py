"""
Line Partitions of a Singer Hyperplane

A cyclic near-resolvable 2-(v, 2, 1)_q design exists when the points of a
hyperplane split into lines whose internal differences cover every
nonzero residue exactly once. The search is an exact cover of the
hyperplane points, always extending the smallest uncovered point.
"""

import logging
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.core.error_handling import InfeasibleCountError, NotHyperplaneError, OperationTracker, SearchError
from src.geometry.singer import SingerContext
from src.graphs.differences import set_difference_counts
from src.graphs.families import make_family_graph
from src.graphs.labeled import LabeledGraph
from src.models.certificates import SearchResult
from src.search.backtracking import FOUND, NodeCounter, SearchBudget, run_branches
from src.services.task_runner import ParallelRunner
from src.verification.designs import verify_near_resolvable
from src.verification.graceful import verify_graceful_labeling

logger = logging.getLogger(__name__)


def hyperplane_lines(ctx: SingerContext, points: Iterable[int]) -> List[Tuple[int, ...]]:
    """Lines inside the point set with no repeated internal difference"""
    members = sorted({int(p) % ctx.v_q for p in points})
    inside = set(members)
    lines = set()
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            line = ctx.line_points(a, b)
            if line[0] == a and set(line) <= inside:
                lines.add(line)
    usable = [line for line in sorted(lines) if set_difference_counts(line, ctx.v_q).max() <= 1]
    logger.debug(f"{len(usable)} of {len(lines)} lines in the hyperplane have distinct differences")
    return usable


def _cover(
    points: List[int], lines: List[Tuple[int, ...]], n: int, first: Tuple[int, ...], counter: NodeCounter
) -> Optional[List[Tuple[int, ...]]]:
    through: Dict[int, List[Tuple[int, ...]]] = {p: [] for p in points}
    for line in lines:
        for p in line:
            through[p].append(line)
    uncovered = set(points)
    used = np.zeros(n, dtype=np.int64)
    chosen: List[Tuple[int, ...]] = []

    def take(line) -> bool:
        diffs = set_difference_counts(line, n)
        used[:] += diffs
        uncovered.difference_update(line)
        chosen.append(line)
        return not np.any(used[1:] > 1)

    def drop(line):
        used[:] -= set_difference_counts(line, n)
        uncovered.update(line)
        chosen.pop()

    def descend() -> bool:
        if not uncovered:
            return True
        p = min(uncovered)
        for line in through[p]:
            if not uncovered.issuperset(line):
                continue
            counter.tick()
            if take(line) and descend():
                return True
            drop(line)
        return False

    counter.tick()
    if take(first) and descend():
        return list(chosen)
    return None


def search_line_partition(
    ctx: SingerContext,
    hyperplane: Optional[Iterable[int]] = None,
    budget: Optional[SearchBudget] = None,
    runner: Optional[ParallelRunner] = None,
    seed: int = 0,
) -> SearchResult:
    """
    Partition a hyperplane (default: the trace-zero one) into lines forming
    a ([v]_q, [2]_q, 1) difference family.

    Raises:
        NotHyperplaneError: the given points are not a hyperplane
        InfeasibleCountError: the line count cannot match [v]_q - 1
    """
    points = sorted({int(p) % ctx.v_q for p in (hyperplane if hyperplane is not None else ctx.default_hyperplane)})
    check = ctx.is_subspace(points)
    if not (check.is_subspace and check.dim == ctx.v - 2):
        raise NotHyperplaneError(f"{len(points)} points do not form a hyperplane of PG({ctx.v - 1},{ctx.q})")
    line_size = ctx.q + 1
    count, rest = divmod(len(points), line_size)
    if rest or count * ctx.q * line_size != ctx.v_q - 1:
        raise InfeasibleCountError(
            f"{len(points)} hyperplane points in lines of {line_size} cannot cover {ctx.v_q - 1} differences",
            required=ctx.v_q - 1,
            available=count * ctx.q * line_size,
        )
    budget = budget or SearchBudget.from_config()

    with OperationTracker(f"search_line_partition({ctx})") as tracker:
        lines = hyperplane_lines(ctx, points)
        branches = [line for line in lines if points[0] in line]
        outcome = run_branches(
            branches,
            lambda line, counter: _cover(points, lines, ctx.v_q, line, counter),
            budget,
            runner,
            label="search_line_partition",
        )

    witness = certificate = None
    if outcome.status == FOUND:
        graph = make_family_graph("clique_union", sizes=[line_size] * len(outcome.witness))
        labels = [p for line in outcome.witness for p in line]
        block = LabeledGraph(graph, labels, ctx.v_q)
        graceful = verify_graceful_labeling(points, block, 1)
        near = verify_near_resolvable(block, ctx)
        if not (graceful.passed and near.passed):
            raise SearchError("search produced a line partition that fails verification")
        witness = {"kind": "near_resolvable", "D": points, "lambda": 1, "block": block.to_dict()}
        certificate = near.to_dict()
    logger.info(f"search_line_partition: {outcome.status} after {outcome.nodes} nodes")
    return SearchResult(
        status=outcome.status,
        target="line_partition",
        nodes_explored=outcome.nodes,
        witness=witness,
        certificate=certificate,
        seed=seed,
        timing_ms=tracker.elapsed_ms,
    )
