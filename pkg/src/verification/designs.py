"""
Development and Design Verification

dev F is the set of all translates B + t, t in Z_n. A DesignInstance keeps
one base block per translate orbit plus blocks that are not developed
(Hamiltonian cycle systems or complete blocks on spread classes), and
verification counts how often each unordered point pair is adjacent.

Pairs {a, b} with a < b are indexed row by row:
    index(a, b) = a (2n - a - 1) / 2 + (b - a - 1)
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from src.core.error_handling import (
    BadParamsError,
    EvenOrderError,
    FamilyNotVerifiedError,
    OperationTracker,
    VerificationError,
)
from src.geometry.singer import SingerContext, Spread, blocks_are_subspaces
from src.graphs.families import AbstractGraph, make_family_graph
from src.graphs.labeled import LabeledGraph
from src.models.certificates import DesignVerdict, NearResolvableVerdict, verdict_of
from src.services.config_loader import get_config
from src.services.task_runner import ParallelRunner
from src.verification.families import FamilyCandidate, verify_family

logger = logging.getLogger(__name__)

CLASS_DESIGNS = ("walecki", "complete")


@dataclass
class DesignInstance:
    """Developed family plus undeveloped class blocks"""

    n: int
    lam: int
    orbits: List[LabeledGraph]
    extra_blocks: List[LabeledGraph] = field(default_factory=list)
    context: Optional[SingerContext] = None
    subspace_required: bool = False
    gdd_spread: Optional[Spread] = None
    materialized: bool = True
    family_spread: Optional[Spread] = None

    @property
    def block_count(self) -> int:
        return len(self.orbits) * self.n + len(self.extra_blocks)

    @property
    def improper_degree(self) -> int:
        graphs = [b.graph for b in self.orbits + self.extra_blocks]
        return max((g.isolated_count for g in graphs), default=0)

    def orbit_labels(self, base: LabeledGraph) -> np.ndarray:
        """Labels of base + t for every t, shape (n, order)"""
        shifts = np.arange(self.n, dtype=np.int64)[:, None]
        return (base.label_array[None, :] + shifts) % self.n

    def iter_blocks(self) -> Iterator[LabeledGraph]:
        for base in self.orbits:
            for t in range(self.n):
                yield base.translate(t)
        yield from self.extra_blocks


def walecki_hcs(u: int) -> List[Tuple[int, ...]]:
    """
    (u-1)/2 Hamiltonian cycles of K_u partitioning its edges. Vertex u-1
    is the hub; cycle i visits the hub and then the zig-zag path
    0, 1, -1, 2, -2, ..., (u-1)/2 of Z_(u-1) shifted by i.

    Raises:
        EvenOrderError: u is even
    """
    if u % 2 == 0:
        raise EvenOrderError(f"K_{u} has odd degree; no Hamiltonian cycle system", {"u": u})
    if u < 3:
        raise BadParamsError(f"Hamiltonian cycles need at least 3 vertices, got {u}")
    m = u - 1
    zigzag = [0]
    for j in range(1, m // 2):
        zigzag += [j, m - j]
    zigzag.append(m // 2)
    hub = u - 1
    return [tuple([hub] + [(x + i) % m for x in zigzag]) for i in range(m // 2)]


def _class_blocks(
    candidate: FamilyCandidate, class_design: str
) -> List[LabeledGraph]:
    spread = candidate.spread
    if spread is None:
        raise VerificationError("class designs need a relative family")
    size = len(spread.classes[0])
    blocks = []
    if class_design == "walecki":
        cycle = make_family_graph("cycle", k=size)
        for points in spread.classes:
            for order in walecki_hcs(size):
                blocks.append(LabeledGraph(cycle, tuple(points[i] for i in order), candidate.n))
    elif class_design == "complete":
        complete = make_family_graph("complete", k=size)
        for points in spread.classes:
            blocks.append(LabeledGraph(complete, tuple(points), candidate.n))
    else:
        raise VerificationError(f"unknown class design {class_design!r}; use one of {CLASS_DESIGNS}")
    return blocks


def develop(
    candidate: FamilyCandidate,
    class_design: Optional[str] = None,
    materialize: Optional[bool] = None,
    runner: Optional[ParallelRunner] = None,
) -> DesignInstance:
    """
    Develop a verified family. A relative family becomes a design when a
    class design is supplied; without one it stays a GDD over the spread.

    Raises:
        FamilyNotVerifiedError: the family does not verify
    """
    certificate = verify_family(candidate, runner)
    if not certificate.passed:
        raise FamilyNotVerifiedError(
            f"family over Z_{candidate.n} does not verify",
            {"violations": len(certificate.violations), "block_issues": len(certificate.block_issues)},
        )
    if materialize is None:
        materialize = candidate.n <= get_config().materialize_limit

    extra = _class_blocks(candidate, class_design) if class_design else []
    design = DesignInstance(
        n=candidate.n,
        lam=candidate.lam,
        orbits=list(candidate.blocks),
        extra_blocks=extra,
        context=candidate.context,
        subspace_required=candidate.subspace_required,
        gdd_spread=candidate.spread if candidate.spread is not None and not class_design else None,
        materialized=materialize,
        family_spread=candidate.spread,
    )
    logger.info(
        f"Developed {len(candidate.blocks)} base blocks over Z_{candidate.n}: "
        f"{design.block_count} blocks ({'materialized' if materialize else 'implicit'})"
    )
    return design


def _pair_indices(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return lo * (2 * n - lo - 1) // 2 + (hi - lo - 1)


def _decode_pair(index: int, n: int) -> Tuple[int, int]:
    a = 0
    remaining = index
    while remaining >= n - a - 1:
        remaining -= n - a - 1
        a += 1
    return a, a + 1 + remaining


def _orbit_pair_indices(design: DesignInstance, base: LabeledGraph) -> Tuple[np.ndarray, int]:
    labels = design.orbit_labels(base)
    edges = base.edge_array
    if edges.size == 0:
        return np.empty(0, dtype=np.int64), 0
    a = labels[:, edges[:, 0]].ravel()
    b = labels[:, edges[:, 1]].ravel()
    loops = int(np.count_nonzero(a == b))
    keep = a != b
    return _pair_indices(a[keep], b[keep], design.n), loops


def _check_subspaces(design: DesignInstance, runner: ParallelRunner) -> Tuple[List[int], str]:
    """Indices of base/extra blocks (in orbit order) that are not subspaces"""
    config = get_config()
    ctx = design.context
    failures: List[int] = []
    full = design.materialized and design.block_count <= config.subspace_check_limit
    method = "all-blocks" if full else "orbit-representatives"

    def check(item):
        index, base, developed = item
        rows = design.orbit_labels(base) if developed else base.label_array[None, :]
        ok = blocks_are_subspaces(ctx, rows)
        return index, bool(ok.all())

    items = [(i, b, full) for i, b in enumerate(design.orbits)]
    items += [(len(design.orbits) + i, b, False) for i, b in enumerate(design.extra_blocks)]
    for index, ok in runner.map_ordered(check, items, label="subspace_check"):
        if not ok:
            failures.append(index)
    return failures, method


@dataclass
class _ClassCoverage:
    pairs: int = 0
    coverage_sum: int = 0
    expected_sum: int = 0
    wrong: int = 0
    loops: int = 0
    violations: List[Tuple[int, int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.wrong == 0 and self.loops == 0


def _class_block_coverage(design: DesignInstance, spread: Spread) -> _ClassCoverage:
    """
    Pair coverage of the undeveloped blocks alone: lambda on every pair
    inside a spread class and nothing across classes, which the relative
    family already covers.
    """
    n, h, lam = design.n, spread.h, design.lam
    size = n // h
    per_class = size * (size - 1) // 2
    coverage = np.zeros(h * per_class, dtype=np.int64)
    result = _ClassCoverage(pairs=h * per_class, expected_sum=lam * h * per_class)
    for block in design.extra_blocks:
        edges = block.edge_array
        if edges.size == 0:
            continue
        labels = block.label_array % n
        a, b = labels[edges[:, 0]], labels[edges[:, 1]]
        result.loops += int(np.count_nonzero(a == b))
        keep = a != b
        a, b = a[keep], b[keep]
        across = (a - b) % h != 0
        for x, y in zip(a[across].tolist(), b[across].tolist()):
            result.wrong += 1
            result.violations.append((min(x, y), max(x, y), lam, lam + 1))
        a, b = a[~across], b[~across]
        # point x sits at position x // h of class x % h
        np.add.at(coverage, (a % h) * per_class + _pair_indices(a // h, b // h, size), 1)
    wrong = np.flatnonzero(coverage != lam)
    result.wrong += int(wrong.size)
    for index in wrong[:50].tolist():
        cls, local = divmod(index, per_class)
        i, j = _decode_pair(local, size)
        result.violations.append((cls + i * h, cls + j * h, lam, int(coverage[index])))
    result.violations = result.violations[:50]
    result.coverage_sum = int(coverage.sum())
    return result


def verify_design(design: DesignInstance, runner: Optional[ParallelRunner] = None) -> DesignVerdict:
    """
    Every unordered pair of distinct points must be adjacent in exactly
    lambda blocks (GDD: lambda across classes, 0 inside a class), and with
    subspace_required every block's full vertex set, isolated vertices
    included, must be a subspace.
    """
    runner = runner or ParallelRunner(1)
    config = get_config()
    n = design.n
    with OperationTracker(f"verify_design(n={n}, blocks={design.block_count})") as tracker:
        subspace_failures: List[int] = []
        subspace_method = None
        if design.subspace_required and design.context is not None:
            subspace_failures, subspace_method = _check_subspaces(design, runner)

        if not design.materialized:
            certificate = verify_family(
                FamilyCandidate(n, design.orbits, design.lam, design.context, design.family_spread,
                                design.subspace_required),
                runner,
            )
            class_check = _ClassCoverage()
            if design.extra_blocks:
                if design.family_spread is None:
                    raise VerificationError("class blocks need the spread of a relative family")
                class_check = _class_block_coverage(design, design.family_spread)
            passed = certificate.passed and not subspace_failures and class_check.passed
            if not passed:
                logger.info(f"Design over Z_{n} fails: family {certificate.verdict}, "
                            f"{class_check.wrong} class pairs, {class_check.loops} loops")
            return DesignVerdict(
                verdict=verdict_of(passed),
                lam=design.lam,
                points=n,
                blocks=design.block_count,
                method="difference-family",
                pairs_checked=class_check.pairs,
                coverage_sum=class_check.coverage_sum,
                expected_sum=class_check.expected_sum,
                pair_violations=class_check.violations,
                subspace_failures=subspace_failures,
                subspace_method=subspace_method,
                gdd_h=design.gdd_spread.h if design.gdd_spread else None,
                improper_degree=design.improper_degree,
                timing_ms=tracker.elapsed_ms,
            )

        total_pairs = n * (n - 1) // 2
        coverage = np.zeros(total_pairs, dtype=np.uint16 if design.lam < 60000 else np.int64)
        loops = 0
        chunk = max(1, config.pair_chunk_blocks // max(1, n) * max(1, runner.jobs))
        for start in range(0, len(design.orbits), chunk):
            batch = design.orbits[start: start + chunk]
            for idx, orbit_loops in runner.map_ordered(
                lambda base: _orbit_pair_indices(design, base), batch, label="pair_indices"
            ):
                np.add.at(coverage, idx, 1)
                loops += orbit_loops
        for block in design.extra_blocks:
            labels = block.label_array
            edges = block.edge_array
            if edges.size:
                a, b = labels[edges[:, 0]], labels[edges[:, 1]]
                loops += int(np.count_nonzero(a == b))
                keep = a != b
                np.add.at(coverage, _pair_indices(a[keep], b[keep], n), 1)

        if design.gdd_spread is not None:
            rows, cols = np.triu_indices(n, 1)
            expected = np.where((cols - rows) % design.gdd_spread.h == 0, 0, design.lam)
            expected_sum = int(expected.sum())
        else:
            expected = design.lam
            expected_sum = design.lam * total_pairs
        wrong = np.flatnonzero(coverage != expected)
        pair_violations = []
        for index in wrong[:50].tolist():
            a, b = _decode_pair(index, n)
            want = int(expected if np.isscalar(expected) else expected[index])
            pair_violations.append((a, b, want, int(coverage[index])))
        coverage_sum = int(coverage.sum(dtype=np.int64))
        passed = wrong.size == 0 and loops == 0 and not subspace_failures

    if not passed:
        logger.info(f"Design over Z_{n} fails: {wrong.size} pairs, {loops} loops, "
                    f"{len(subspace_failures)} non-subspace blocks")
    return DesignVerdict(
        verdict=verdict_of(passed),
        lam=design.lam,
        points=n,
        blocks=design.block_count,
        method="pair-coverage",
        pairs_checked=total_pairs,
        coverage_sum=coverage_sum,
        expected_sum=expected_sum,
        pair_violations=pair_violations,
        subspace_failures=subspace_failures,
        subspace_method=subspace_method,
        gdd_h=design.gdd_spread.h if design.gdd_spread else None,
        improper_degree=design.improper_degree,
        timing_ms=tracker.elapsed_ms,
    )


def verify_near_resolvable(
    design: Union[DesignInstance, LabeledGraph], context: Optional[SingerContext] = None
) -> NearResolvableVerdict:
    """
    The cliques of a clique-union block must be lines, pairwise disjoint,
    and together exactly the points of a hyperplane. Translation carries
    the verdict to every class of the development, so a developed design
    is checked on its single base block; a bare base block is accepted too.

    Raises:
        BadParamsError: v = 2, where a hyperplane is a single point, or the
            design is not the development of one base block
    """
    if isinstance(design, DesignInstance):
        if len(design.orbits) != 1 or design.extra_blocks:
            raise BadParamsError(
                f"near-resolvable designs develop one base block, got {len(design.orbits)} "
                f"and {len(design.extra_blocks)} undeveloped blocks"
            )
        block = design.orbits[0]
        context = context or design.context
    else:
        block = design
    if context is None:
        raise BadParamsError("near-resolvable check needs a field context", family=block.graph.family)
    if context.v <= 2:
        raise BadParamsError(
            f"near-resolvable designs need v >= 3, got v={context.v}", family=block.graph.family
        )
    graph = block.graph.to_networkx()
    cliques = [sorted(component) for component in nx.connected_components(graph)]
    cliques.sort()
    lines: List[bool] = []
    sums: List[Optional[int]] = []
    for component in cliques:
        points = [block.labels[i] for i in component]
        complete = graph.subgraph(component).number_of_edges() == len(component) * (len(component) - 1) // 2
        check = context.is_subspace(points)
        lines.append(bool(complete and check.is_subspace and check.dim == 1 and len(set(points)) == len(points)))
        sums.append(context.point_sum(points).exponent)
    disjoint = block.is_injective
    hyperplane = context.is_subspace(block.labels)
    covers = bool(hyperplane.is_subspace and hyperplane.dim == context.v - 2 and disjoint)
    passed = all(lines) and disjoint and covers
    return NearResolvableVerdict(
        verdict=verdict_of(passed),
        lines=lines,
        disjoint=disjoint,
        covers_hyperplane=covers,
        clique_sums=sums,
    )
