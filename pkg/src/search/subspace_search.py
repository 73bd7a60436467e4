"""
Subspace Block and Family Search

Blocks of a design over F_q are graphs whose vertex sets are subspaces.
Subspaces are enumerated through the point 0 and reduced to one
representative per translation class (and per multiplier class when a
multiplier group is given), since differences are translation invariant.

search_subspace_block looks for one block whose differences meet every
multiplier orbit exactly lambda times: first the subspace's full
difference list must reach every orbit, then a labeling of the graph on
its points is searched. search_family selects several blocks whose
differences cover the target exactly lambda times (exact cover over
residues, or over orbits when a multiplier group is given).
"""

import logging
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.admissibility.predicates import bracket_exponent
from src.core.error_handling import InfeasibleCountError, OperationTracker, SearchError
from src.geometry.singer import SingerContext, Spread
from src.graphs.differences import difference_counts, set_difference_counts
from src.graphs.families import AbstractGraph
from src.graphs.labeled import LabeledGraph
from src.models.certificates import SearchResult
from src.search.backtracking import (
    BUDGET_EXCEEDED,
    EXHAUSTED,
    FOUND,
    BranchOutcome,
    BudgetExceeded,
    LabelingSearch,
    NodeCounter,
    SearchBudget,
    run_branches,
)
from src.services.task_runner import ParallelRunner
from src.verification.families import (
    FamilyCandidate,
    InitialBlocks,
    check_evenly_distributed,
    expand_initial_blocks,
    verify_family,
)

logger = logging.getLogger(__name__)


def subspaces_through_zero(ctx: SingerContext, dim: int) -> List[Tuple[int, ...]]:
    """All dim-dimensional subspaces containing the point 0, sorted"""
    level: Set[Tuple[int, ...]] = {(0,)}
    for _ in range(dim):
        found: Set[Tuple[int, ...]] = set()
        for base in sorted(level):
            points = np.asarray(base, dtype=np.int64)
            covered = set(base)
            for x in range(1, ctx.v_q):
                if x in covered:
                    continue
                joined = tuple(ctx.join(points, x).tolist())
                covered.update(joined)
                found.add(joined)
        level = found
    return sorted(level)


def canonical_translate(points: Sequence[int], n: int, multipliers: Sequence[int] = (1,)) -> Tuple[int, ...]:
    """Lexicographically smallest sorted image of m*points + t"""
    best: Optional[Tuple[int, ...]] = None
    for m in multipliers:
        image = [(int(p) * m) % n for p in points]
        for t in image:
            candidate = tuple(sorted((x - t) % n for x in image))
            if best is None or candidate < best:
                best = candidate
    return best


def subspace_classes(
    ctx: SingerContext, dim: int, multipliers: Sequence[int] = (1,)
) -> List[Tuple[int, ...]]:
    """One representative (containing 0) per translation/multiplier class"""
    classes = {canonical_translate(s, ctx.v_q, multipliers) for s in subspaces_through_zero(ctx, dim)}
    logger.debug(f"{len(classes)} classes of {dim}-subspaces in {ctx}")
    return sorted(classes)


class CoverageTarget:
    """Bins (residues or multiplier orbits) and their required multiplicities"""

    def __init__(
        self,
        ctx: SingerContext,
        lam: int,
        multipliers: Optional[Sequence[int]] = None,
        spread: Optional[Spread] = None,
    ):
        n = ctx.v_q
        self.n = n
        self.lam = lam
        self.multipliers = tuple(sorted({m % n for m in (multipliers or (1,))}))
        mask = np.ones(n, dtype=bool)
        mask[0] = False
        if spread is not None:
            mask[:: spread.h] = False
        self.mask = mask
        if self.multipliers == (1,):
            reps = np.arange(n)
        else:
            reps = ctx.orbit_index(self.multipliers)
        target_reps = np.unique(reps[mask])
        self.bins = len(target_reps)
        # off-target residues share the last bin, whose capacity stays 0
        lookup = np.full(n, self.bins, dtype=np.int64)
        lookup[target_reps] = np.arange(self.bins)
        self.bin_of = np.where(mask, lookup[reps], self.bins)
        self.required = np.append(np.full(self.bins, lam, dtype=np.int64), 0)
        if self.multipliers != (1,):
            # raises SemiregularityError when a target orbit is short
            check_evenly_distributed(InitialBlocks(n, [], lam, self.multipliers, ctx, spread))

    def hits(self, block: LabeledGraph) -> np.ndarray:
        counts = difference_counts(block.labels, block.edge_array, self.n)
        return np.bincount(self.bin_of, weights=counts, minlength=self.bins + 1).astype(np.int64)


def _subspace_dim(ctx: SingerContext, graph: AbstractGraph) -> int:
    k = bracket_exponent(graph.order, ctx.q)
    if k is None or k > ctx.v:
        raise SearchError(f"graph order {graph.order} is not [k]_{ctx.q} for any k <= {ctx.v}")
    return k - 1


def _is_complete(graph: AbstractGraph) -> bool:
    return graph.size == graph.order * (graph.order - 1) // 2


def search_subspace_block(
    ctx: SingerContext,
    graph: AbstractGraph,
    lam: int = 1,
    multipliers: Optional[Sequence[int]] = None,
    budget: Optional[SearchBudget] = None,
    runner: Optional[ParallelRunner] = None,
    seed: int = 0,
) -> SearchResult:
    """
    One graph block on a subspace whose differences meet every orbit of the
    multiplier group (default: Frobenius) exactly lam times.

    Raises:
        InfeasibleCountError: 2|E| differs from lam times the orbit count
    """
    if multipliers is None:
        multipliers = ctx.frobenius_multipliers()
    target = CoverageTarget(ctx, lam, multipliers)
    if 2 * graph.size != lam * target.bins:
        raise InfeasibleCountError(
            f"one block has {2 * graph.size} differences; {target.bins} orbits need {lam * target.bins}",
            required=lam * target.bins,
            available=2 * graph.size,
        )
    dim = _subspace_dim(ctx, graph)
    budget = budget or SearchBudget.from_config()

    with OperationTracker(f"search_subspace_block({graph.family}, n={ctx.v_q})") as tracker:
        classes = subspace_classes(ctx, dim, target.multipliers)
        # a subspace qualifies only if its full difference list reaches every orbit
        surjective = []
        for points in classes:
            full = set_difference_counts(points, ctx.v_q)
            reached = np.bincount(target.bin_of, weights=full, minlength=target.bins + 1)
            if np.all(reached[: target.bins] > 0):
                surjective.append(points)
        logger.info(f"{len(surjective)} of {len(classes)} subspace classes reach every orbit")

        def explore(points, counter: NodeCounter):
            engine = LabelingSearch(graph, points, ctx.v_q, target.required, target.bin_of, break_cycle=True)
            if _is_complete(graph):
                counter.tick()
                block = LabeledGraph(graph, points, ctx.v_q)
                return points if np.array_equal(target.hits(block), target.required) else None
            return engine.first(counter)

        outcome = run_branches(surjective, explore, budget, runner, label="search_subspace_block")

    witness = certificate = None
    if outcome.status == FOUND:
        block = LabeledGraph(graph, outcome.witness, ctx.v_q, subspace_dim=dim)
        initial = InitialBlocks(ctx.v_q, [block], lam, target.multipliers, ctx, subspace_required=True)
        even = check_evenly_distributed(initial)
        family = verify_family(expand_initial_blocks(initial))
        if not (even.passed and family.passed):
            raise SearchError("search produced a block that fails verification")
        witness = {
            "kind": "initial_blocks",
            "lambda": lam,
            "multipliers": list(target.multipliers),
            "blocks": [block.to_dict()],
            "subspace": sorted(outcome.witness),
        }
        certificate = family.to_dict(include_timing=False)
    logger.info(f"search_subspace_block: {outcome.status} after {outcome.nodes} nodes")
    return SearchResult(
        status=outcome.status,
        target="subspace_block",
        nodes_explored=outcome.nodes,
        witness=witness,
        certificate=certificate,
        seed=seed,
        timing_ms=tracker.elapsed_ms,
    )


def _candidate_blocks(
    ctx: SingerContext,
    graph: AbstractGraph,
    target: CoverageTarget,
    remaining: np.ndarray,
    counter: NodeCounter,
) -> List[Tuple[Tuple[int, ...], np.ndarray]]:
    """
    Labelings on every subspace class that fit the remaining capacity,
    deduplicated by hit vector. Each row stands for all blocks with its hits
    and may be used as often as capacity allows.
    """
    dim = _subspace_dim(ctx, graph)
    rows: List[Tuple[Tuple[int, ...], np.ndarray]] = []
    seen = set()
    for points in subspace_classes(ctx, dim, target.multipliers):
        if _is_complete(graph):
            labelings = [tuple(points)]
        else:
            engine = LabelingSearch(graph, points, ctx.v_q, remaining, target.bin_of, break_cycle=True)
            labelings = engine.solutions(counter)
        for labels in labelings:
            hits = target.hits(LabeledGraph(graph, labels, ctx.v_q))
            if np.any(hits > remaining):
                continue
            key = hits.tobytes()
            if key in seen:
                continue
            seen.add(key)
            rows.append((labels, hits))
    return rows


def _exact_cover(
    rows: List[np.ndarray], deficit: np.ndarray, counter: NodeCounter, first_row: Optional[int] = None
) -> Optional[List[int]]:
    """
    Row indices whose hit vectors add up to deficit; smallest deficient bin
    first. A row may be chosen repeatedly while capacity remains. Rows
    chosen for one bin are nondecreasing, so each multiset is tried once.
    """
    bins = deficit.size - 1
    by_bin: Dict[int, List[int]] = {b: [] for b in range(bins)}
    for index, hits in enumerate(rows):
        for b in np.flatnonzero(hits[:bins]).tolist():
            by_bin[b].append(index)
    current = deficit.copy()
    chosen: List[int] = []
    floor: Dict[int, int] = {}

    def descend() -> bool:
        open_bins = np.flatnonzero(current[:bins] > 0)
        if open_bins.size == 0:
            return not np.any(current[bins:])
        b = int(open_bins[0])
        start = floor.get(b, -1)
        candidates = by_bin[b]
        if not chosen and first_row is not None:
            candidates = [first_row] if first_row in candidates else []
        for index in candidates:
            if index < start:
                continue
            hits = rows[index]
            if np.any(hits > current):
                continue
            counter.tick()
            current[:] -= hits
            chosen.append(index)
            previous = floor.get(b)
            floor[b] = index
            if descend():
                return True
            if previous is None:
                del floor[b]
            else:
                floor[b] = previous
            chosen.pop()
            current[:] += hits
        return False

    return list(chosen) if descend() else None


def search_family(
    ctx: SingerContext,
    graph: AbstractGraph,
    lam: int = 1,
    spread_n: Optional[int] = None,
    multipliers: Optional[Sequence[int]] = None,
    fixed_blocks: Sequence[LabeledGraph] = (),
    budget: Optional[SearchBudget] = None,
    runner: Optional[ParallelRunner] = None,
    seed: int = 0,
) -> SearchResult:
    """
    Blocks (graphs on subspaces) whose differences, together with any fixed
    blocks, cover Z_[v]_q minus 0 (or minus the spread subgroup when
    spread_n is given) exactly lam times. With multipliers the search is
    over initial blocks and coverage is counted per multiplier orbit.

    Raises:
        InfeasibleCountError: the remaining coverage is not a multiple of 2|E|
    """
    spread = ctx.desarguesian_spread(spread_n) if spread_n else None
    target = CoverageTarget(ctx, lam, multipliers, spread)
    deficit = target.required.copy()
    for block in fixed_blocks:
        deficit -= target.hits(block)
    if np.any(deficit < 0):
        raise InfeasibleCountError(
            "fixed blocks already over-cover the target",
            required=int(target.required.sum()),
            available=int(target.required.sum() - deficit.sum()),
        )
    per_block = 2 * graph.size
    if per_block == 0 or int(deficit.sum()) % per_block:
        raise InfeasibleCountError(
            f"{int(deficit.sum())} missing hits are not a multiple of {per_block}",
            required=int(deficit.sum()),
            available=per_block,
        )
    budget = budget or SearchBudget.from_config()
    runner = runner or ParallelRunner(1)

    with OperationTracker(f"search_family({graph.family}, n={ctx.v_q})") as tracker:
        setup = NodeCounter(budget)
        try:
            rows = _candidate_blocks(ctx, graph, target, deficit, setup)
        except BudgetExceeded:
            rows = None
        if rows is None:
            outcome = BranchOutcome(BUDGET_EXCEEDED, setup.nodes)
        elif not deficit[: target.bins].any():
            outcome = BranchOutcome(FOUND, setup.nodes, [])
        else:
            hits = [h for _, h in rows]
            first_bin = int(np.flatnonzero(deficit[: target.bins] > 0)[0])
            branches = [i for i, h in enumerate(hits) if h[first_bin] > 0]
            outcome = run_branches(
                branches,
                lambda index, counter: _exact_cover(hits, deficit, counter, first_row=index),
                budget,
                runner,
                label="search_family",
                deadline=setup.deadline,
            )
            outcome.nodes += setup.nodes
            if outcome.status == EXHAUSTED:
                logger.info(f"search_family: no cover among {len(rows)} candidate blocks")

    witness = certificate = None
    if outcome.status == FOUND:
        dim = _subspace_dim(ctx, graph)
        found = [LabeledGraph(graph, rows[i][0], ctx.v_q, subspace_dim=dim) for i in outcome.witness]
        blocks = list(fixed_blocks) + found
        if target.multipliers == (1,):
            candidate = FamilyCandidate(ctx.v_q, blocks, lam, ctx, spread, subspace_required=True)
        else:
            candidate = expand_initial_blocks(
                InitialBlocks(ctx.v_q, blocks, lam, target.multipliers, ctx, spread, subspace_required=True)
            )
        family = verify_family(candidate)
        if not family.passed:
            raise SearchError("search produced a family that fails verification")
        if target.multipliers != (1,):
            kind = "initial_blocks"
        else:
            kind = "relative_family" if spread else "family"
        witness = {
            "kind": kind,
            "lambda": lam,
            "multipliers": list(target.multipliers),
            "spread_n": spread_n,
            "blocks": [b.to_dict() for b in blocks],
        }
        certificate = family.to_dict(include_timing=False)
    logger.info(f"search_family: {outcome.status} after {outcome.nodes} nodes")
    return SearchResult(
        status=outcome.status,
        target="family",
        nodes_explored=outcome.nodes,
        witness=witness,
        certificate=certificate,
        seed=seed,
        timing_ms=tracker.elapsed_ms,
    )
