"""
Difference Family Verification over F_q

A family of labeled graphs over Z_n covers the target with multiplicity
lambda when every target residue appears lambda times in the union of the
difference lists. Plain families target Z_n minus 0; relative families
target Z_n minus the spread subgroup H, which must not be covered at all.
Over F_q every block must also be a subspace, and in the relative case no
edge may join two points of one spread class.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.error_handling import OperationTracker, SemiregularityError, VerificationError
from src.geometry.singer import SingerContext, Spread
from src.graphs.differences import difference_counts, mismatches
from src.graphs.labeled import DifferenceList, LabeledGraph, differences_of, log_image
from src.models.certificates import (
    EvenDistributionVerdict,
    FamilyCertificate,
    Violation,
    verdict_of,
)
from src.services.task_runner import ParallelRunner

logger = logging.getLogger(__name__)


@dataclass
class FamilyCandidate:
    """Blocks over Z_n claimed to form a (relative) difference family"""

    n: int
    blocks: List[LabeledGraph]
    lam: int
    context: Optional[SingerContext] = None
    spread: Optional[Spread] = None
    subspace_required: bool = False

    def __post_init__(self):
        if self.lam < 0:
            raise VerificationError(f"lambda must be non-negative, got {self.lam}")
        for block in self.blocks:
            if block.n != self.n:
                raise VerificationError(f"block over Z_{block.n} in a family over Z_{self.n}")
        if self.context is not None and self.context.v_q != self.n:
            raise VerificationError(f"context has {self.context.v_q} points, family is over Z_{self.n}")
        if self.subspace_required and self.context is None:
            raise VerificationError("subspace blocks need a Singer context")

    def target_mask(self) -> np.ndarray:
        """True on residues that must be covered lambda times"""
        mask = np.ones(self.n, dtype=bool)
        mask[0] = False
        if self.spread is not None:
            mask[:: self.spread.h] = False
        return mask

    def translate(self, t: int) -> "FamilyCandidate":
        return FamilyCandidate(
            self.n, [b.translate(t) for b in self.blocks], self.lam,
            self.context, self.spread, self.subspace_required,
        )


@dataclass
class InitialBlocks:
    """Representatives of multiplier orbits of blocks"""

    n: int
    blocks: List[LabeledGraph]
    lam: int
    multipliers: Tuple[int, ...] = (1,)
    context: Optional[SingerContext] = None
    spread: Optional[Spread] = None
    subspace_required: bool = False

    def candidate(self) -> FamilyCandidate:
        return FamilyCandidate(
            self.n, list(self.blocks), self.lam, self.context, self.spread, self.subspace_required
        )


def _block_report(
    index: int, block: LabeledGraph, candidate: FamilyCandidate
) -> Tuple[np.ndarray, List[dict], Optional[List[int]]]:
    counts = difference_counts(block.labels, block.edge_array, candidate.n)
    issues = []
    witness = None
    if not block.is_injective:
        issues.append({"block": index, "issue": "labels are not injective"})
    if candidate.subspace_required:
        check = candidate.context.is_subspace(block.labels)
        if check.is_subspace:
            witness = list(check.generators)
        else:
            issues.append(
                {"block": index, "issue": f"not a subspace, pair {list(check.violating_pair or ())}"}
            )
    if candidate.spread is not None:
        h = candidate.spread.h
        for i, j in block.graph.edges:
            if (block.labels[i] - block.labels[j]) % h == 0:
                issues.append({"block": index, "issue": f"edge ({i},{j}) inside a spread class"})
                break
    return counts, issues, witness


def verify_family(
    candidate: FamilyCandidate, runner: Optional[ParallelRunner] = None
) -> FamilyCertificate:
    """
    Aggregate the difference lists of all blocks and compare with lambda on
    the target and 0 elsewhere. Blocks are processed in parallel when a
    multi-worker runner is given; the sum is taken in block order.
    """
    runner = runner or ParallelRunner(1)
    with OperationTracker(f"verify_family(n={candidate.n}, blocks={len(candidate.blocks)})") as tracker:
        reports = runner.map_ordered(
            lambda item: _block_report(item[0], item[1], candidate),
            list(enumerate(candidate.blocks)),
            label="verify_family",
        )
        counts = np.zeros(candidate.n, dtype=np.int64)
        issues: List[dict] = []
        witnesses: List[List[int]] = []
        for block_counts, block_issues, witness in reports:
            counts += block_counts
            issues.extend(block_issues)
            if witness is not None:
                witnesses.append(witness)

        expected = np.where(candidate.target_mask(), candidate.lam, 0)
        violations = Violation.from_triples(mismatches(counts, expected))
        passed = not violations and not issues

    if not passed:
        logger.info(
            f"Family over Z_{candidate.n} fails: {len(violations)} residue violations, "
            f"{len(issues)} block issues"
        )
    return FamilyCertificate(
        verdict=verdict_of(passed),
        lam=candidate.lam,
        n=candidate.n,
        coverage={int(r): int(counts[r]) for r in np.flatnonzero(counts)},
        violations=violations,
        block_issues=issues,
        subspace_witnesses=witnesses,
        relative_h=candidate.spread.h if candidate.spread else None,
        timing_ms=tracker.elapsed_ms,
    )


def family_coverage(candidate: FamilyCandidate) -> DifferenceList:
    counts = np.zeros(candidate.n, dtype=np.int64)
    for block in candidate.blocks:
        counts += difference_counts(block.labels, block.edge_array, candidate.n)
    return DifferenceList(candidate.n, counts)


def _check_multipliers(n: int, multipliers: Sequence[int], context: Optional[SingerContext]):
    group = {m % n for m in multipliers}
    if any((a * b) % n not in group for a in group for b in group):
        raise VerificationError(f"multipliers {sorted(group)} are not closed modulo {n}")
    if context is not None:
        frobenius = {pow(context.q, j, n) for j in range(context.v)}
        if not group <= frobenius:
            raise VerificationError(f"multipliers {sorted(group - frobenius)} are not Frobenius powers")


def expand_initial_blocks(initial: InitialBlocks) -> FamilyCandidate:
    """F = {B^m : B initial, m multiplier}, block by block"""
    _check_multipliers(initial.n, initial.multipliers, initial.context)
    blocks = [b.multiply(m) for b in initial.blocks for m in initial.multipliers]
    return FamilyCandidate(
        initial.n, blocks, initial.lam, initial.context, initial.spread, initial.subspace_required
    )


def check_evenly_distributed(initial: InitialBlocks) -> EvenDistributionVerdict:
    """
    True iff the initial differences hit every multiplier orbit of the
    target exactly lambda times.

    Raises:
        SemiregularityError: some target orbit is shorter than the group
    """
    _check_multipliers(initial.n, initial.multipliers, initial.context)
    n = initial.n
    mults = np.array(sorted({m % n for m in initial.multipliers}), dtype=np.int64)
    target = initial.candidate().target_mask()
    residues = np.flatnonzero(target)

    images = (residues[:, None] * mults[None, :]) % n
    representative = np.zeros(n, dtype=np.int64)
    representative[residues] = images.min(axis=1)
    orbit_sizes = np.array([np.unique(row).size for row in images])
    if np.any(orbit_sizes != mults.size):
        short = int(residues[np.argmax(orbit_sizes != mults.size)])
        raise SemiregularityError(
            f"orbit of {short} has {int(orbit_sizes.min())} elements, group has {mults.size}",
            {"n": n, "residue": short},
        )

    hits = np.zeros(n, dtype=np.int64)
    for block in initial.blocks:
        diffs = differences_of(block)
        on_target = diffs[target[diffs]]
        np.add.at(hits, representative[on_target], 1)
        off_target = diffs[~target[diffs]]
        if off_target.size:
            np.add.at(hits, off_target, 1)

    orbit_reps = np.unique(representative[residues])
    expected = np.zeros(n, dtype=np.int64)
    expected[orbit_reps] = initial.lam
    violations = Violation.from_triples(mismatches(hits, expected))
    return EvenDistributionVerdict(
        verdict=verdict_of(not violations),
        lam=initial.lam,
        orbit_count=int(orbit_reps.size),
        orbit_size=int(mults.size),
        violations=violations,
    )


def verify_log_route(
    n: int, root: int, classes: int, blocks: Sequence[LabeledGraph], lam: int = 1
) -> Tuple[bool, np.ndarray]:
    """Log maps the initial differences onto Z_classes exactly lambda times each"""
    total = DifferenceList.empty(n)
    for block in blocks:
        total = total + DifferenceList(n, difference_counts(block.labels, block.edge_array, n))
    image = log_image(n, root, total, classes)
    return bool(np.all(image == lam)), image
