"""
Search Service for qdesign

Turns a parsed search specification into a call of the matching search
engine: builds the field model, the graph, the optional rotation symmetry
and the partial family, then returns the engine's SearchResult.
"""

import logging
from typing import List, Optional, Sequence

from src.core.error_handling import UsageError
from src.field.galois_field import build_field_from_descriptor
from src.geometry.singer import SingerContext
from src.graphs.families import AbstractGraph, make_rotation
from src.graphs.labeled import LabeledGraph
from src.models.certificates import SearchResult
from src.models.search_spec import SearchSpec
from src.search.backtracking import FrobeniusSymmetry, SearchBudget
from src.search.graceful_search import search_graceful
from src.search.lines import search_line_partition
from src.search.nested_search import search_nested_set
from src.search.subspace_search import search_family, search_subspace_block
from src.services.task_runner import ParallelRunner

logger = logging.getLogger(__name__)


def _context(spec: SearchSpec) -> Optional[SingerContext]:
    if spec.field_spec is None:
        return None
    return SingerContext(build_field_from_descriptor(spec.field_spec))


def _modulus(spec: SearchSpec, ctx: Optional[SingerContext]) -> int:
    if spec.n is not None:
        if ctx is not None and spec.n != ctx.v_q:
            raise UsageError(f"n={spec.n} disagrees with the field, whose Singer group has order {ctx.v_q}")
        return spec.n
    return ctx.v_q


def _multipliers(spec: SearchSpec, ctx: SingerContext) -> Optional[Sequence[int]]:
    if spec.multipliers is None:
        return None
    if spec.multipliers == "frobenius":
        return ctx.frobenius_multipliers()
    if isinstance(spec.multipliers, str):
        raise UsageError(f"multipliers must be 'frobenius' or a list, got {spec.multipliers!r}")
    return tuple(int(m) for m in spec.multipliers)


def _symmetry(spec: SearchSpec, graph: AbstractGraph) -> Optional[FrobeniusSymmetry]:
    if not spec.symmetry:
        return None
    rotation = make_rotation(graph, int(spec.symmetry["step"]))
    return FrobeniusSymmetry(rotation, int(spec.symmetry["multiplier"]))


def _fixed_blocks(spec: SearchSpec, n: int) -> List[LabeledGraph]:
    return [LabeledGraph.from_dict(block, n) for block in spec.fixed_blocks]


def budget_for(spec: SearchSpec) -> SearchBudget:
    """Spec budget where given, configuration (already carrying CLI flags) otherwise"""
    return SearchBudget.from_config(spec.budget_nodes, spec.budget_seconds)


def run_search(spec: SearchSpec, runner: Optional[ParallelRunner] = None) -> SearchResult:
    """
    Dispatch a search specification to its engine.

    Raises:
        UsageError: the specification names inconsistent inputs
        InfeasibleCountError: counting alone rules the target out
    """
    runner = runner or ParallelRunner(1)
    budget = budget_for(spec)
    ctx = _context(spec)
    logger.info(f"Running search target={spec.target} budget={budget.nodes} nodes/{budget.seconds}s")

    if spec.target == "graceful_labeling":
        n = _modulus(spec, ctx)
        graph = AbstractGraph.from_dict(spec.graph)
        return search_graceful(
            spec.D,
            graph,
            spec.lam,
            n,
            budget,
            runner,
            symmetry=_symmetry(spec, graph),
            v=ctx.v if ctx is not None else None,
            seed=spec.seed,
        )

    if spec.target == "nested_set":
        return search_nested_set(spec.D, spec.size, spec.lam, _modulus(spec, ctx), budget, runner, seed=spec.seed)

    if spec.target == "subspace_block":
        graph = AbstractGraph.from_dict(spec.graph)
        return search_subspace_block(
            ctx, graph, spec.lam, _multipliers(spec, ctx), budget, runner, seed=spec.seed
        )

    if spec.target == "family":
        graph = AbstractGraph.from_dict(spec.graph)
        return search_family(
            ctx,
            graph,
            spec.lam,
            spread_n=spec.spread_n,
            multipliers=_multipliers(spec, ctx),
            fixed_blocks=_fixed_blocks(spec, ctx.v_q),
            budget=budget,
            runner=runner,
            seed=spec.seed,
        )

    if spec.target == "line_partition":
        return search_line_partition(ctx, spec.hyperplane, budget, runner, seed=spec.seed)

    raise UsageError(f"unknown search target {spec.target!r}")
