"""
Catalog Registry for qdesign

Loads the shipped construction records (src/catalog/data/*.json, or the
directory named by QDESIGN_CATALOG_DIR / catalog.dir) and re-verifies
them. Each entry kind is dispatched to the verification engine; the
observed verdict is compared with the stored expectation, so negative
results (non-graceful pairs, cliques that are not lines) are checked as
first-class entries.
"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.core.error_handling import CorruptEntryError, OperationTracker, UnknownEntryError
from src.field.galois_field import build_field_from_descriptor
from src.geometry.singer import SingerContext
from src.graphs.families import AbstractGraph, make_rotation
from src.graphs.labeled import LabeledGraph, expand_frobenius_seed
from src.models.catalog_entry import CatalogEntry, EntryVerdict
from src.models.certificates import PASS, verdict_of
from src.search.backtracking import BUDGET_EXCEEDED, SearchBudget
from src.search.graceful_search import search_graceful
from src.services.config_loader import get_config
from src.services.task_runner import ParallelRunner
from src.verification.designs import develop, verify_design, verify_near_resolvable
from src.verification.families import (
    FamilyCandidate,
    InitialBlocks,
    check_evenly_distributed,
    expand_initial_blocks,
    verify_family,
    verify_log_route,
)
from src.verification.graceful import check_nested_difference_set, verify_graceful_labeling

logger = logging.getLogger(__name__)

PACKAGED_CATALOG_DIR = Path(__file__).resolve().parent / "data"

# observed verdict when a sub-check disagrees with its own expectation
INCONSISTENT = "inconsistent"


def catalog_dir(directory: Optional[str] = None) -> Path:
    """Explicit directory, then configuration / environment, then the packaged data"""
    chosen = directory or get_config().catalog_dir
    return Path(chosen) if chosen else PACKAGED_CATALOG_DIR


def list_entries(directory: Optional[str] = None) -> List[str]:
    return sorted(path.stem for path in catalog_dir(directory).glob("*.json"))


def raw_entry(entry_id: str, directory: Optional[str] = None) -> str:
    """
    Stored text of an entry.

    Raises:
        UnknownEntryError: no file carries the id
    """
    path = catalog_dir(directory) / f"{entry_id}.json"
    if not path.is_file():
        raise UnknownEntryError(f"no catalog entry {entry_id!r} in {path.parent}", entry_id=entry_id)
    return path.read_text(encoding="ascii")


def load_entry(entry_id: str, directory: Optional[str] = None) -> CatalogEntry:
    """
    Raises:
        UnknownEntryError: no file carries the id
        CorruptEntryError: the file is not valid JSON or violates the schema
    """
    text = raw_entry(entry_id, directory)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorruptEntryError(f"catalog entry {entry_id} is not valid JSON: {e}", entry_id=entry_id)
    entry = CatalogEntry.from_dict(data)
    if entry.id != entry_id:
        raise CorruptEntryError(f"file {entry_id}.json holds entry {entry.id!r}", entry_id=entry_id)
    return entry


def export_entries(destination: str, directory: Optional[str] = None) -> List[Path]:
    """Write every entry, re-serialized canonically, into destination"""
    target = Path(destination)
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for entry_id in list_entries(directory):
        path = target / f"{entry_id}.json"
        path.write_text(load_entry(entry_id, directory).serialize(), encoding="ascii")
        written.append(path)
    logger.info(f"Exported {len(written)} catalog entries to {target}")
    return written


# Entry decoding


def entry_context(entry: CatalogEntry) -> Optional[SingerContext]:
    if entry.field_spec is None:
        return None
    return SingerContext(build_field_from_descriptor(entry.field_spec))


def _modulus(entry: CatalogEntry, context: Optional[SingerContext]) -> int:
    return context.v_q if context is not None else int(entry.data["n"])


def _multipliers(entry: CatalogEntry, context: Optional[SingerContext]) -> Tuple[int, ...]:
    value = entry.data.get("multipliers", [1])
    if value == "frobenius":
        if context is None:
            raise CorruptEntryError("frobenius multipliers need a field", entry_id=entry.id)
        return context.frobenius_multipliers()
    return tuple(int(m) for m in value)


def _labeled(data: Dict[str, Any], n: int, entry: CatalogEntry) -> LabeledGraph:
    """A stored block: explicit labels, or a seed expanded along a rotation"""
    if "seed" not in data:
        return LabeledGraph.from_dict(data, n)
    graph = AbstractGraph.from_dict(data["graph"])
    seed = {int(vertex): int(label) for vertex, label in data["seed"].items()}
    rotation = make_rotation(graph, int(data["step"]))
    v = entry.field_spec["v"] if entry.field_spec else None
    return expand_frobenius_seed(graph, seed, rotation, n, int(data["multiplier"]), v=v)


def _blocks(entry: CatalogEntry, n: int) -> List[LabeledGraph]:
    return [_labeled(b, n, entry) for b in entry.data["blocks"]]


def entry_family(entry: CatalogEntry) -> FamilyCandidate:
    """
    The (expanded) family an entry describes, for develop and the
    oracle checks. Graceful labelings on a Singer set give one-block families.
    """
    context = entry_context(entry)
    n = _modulus(entry, context)
    subspace = bool(entry.data.get("subspace", context is not None))
    spread = None
    if entry.data.get("spread_n"):
        spread = context.desarguesian_spread(int(entry.data["spread_n"]))

    if entry.kind in ("family", "relative_family"):
        return FamilyCandidate(n, _blocks(entry, n), entry.lam, context, spread, subspace)
    if entry.kind in ("initial_blocks", "design"):
        initial = InitialBlocks(
            n, _blocks(entry, n), entry.lam, _multipliers(entry, context), context, spread, subspace
        )
        return expand_initial_blocks(initial)
    if entry.kind == "graceful_labeling" and context is not None:
        block = _labeled(entry.data["block"], n, entry)
        return FamilyCandidate(n, [block], entry.lam, context, None, subspace)
    raise CorruptEntryError(f"entry kind {entry.kind} does not describe a family", entry_id=entry.id)


# Verification per kind


def _verify_family_kind(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    certificate = verify_family(entry_family(entry), runner)
    return verdict_of(certificate.passed), [certificate.to_dict(include_timing=False)]


def _verify_initial_blocks(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    context = entry_context(entry)
    n = _modulus(entry, context)
    spread = context.desarguesian_spread(int(entry.data["spread_n"])) if entry.data.get("spread_n") else None
    blocks = _blocks(entry, n)
    initial = InitialBlocks(
        n, blocks, entry.lam, _multipliers(entry, context), context, spread,
        bool(entry.data.get("subspace", context is not None)),
    )
    even = check_evenly_distributed(initial)
    family = verify_family(expand_initial_blocks(initial), runner)
    certificates = [even.to_dict(), family.to_dict(include_timing=False)]
    passed = even.passed and family.passed

    generators = entry.data.get("generators")
    if generators:
        spans_ok = all(
            set(context.span([0, *pair]).points) == set(block.labels)
            for pair, block in zip(generators, blocks)
        ) and len(generators) == len(blocks)
        certificates.append({"kind": "generators", "verdict": verdict_of(spans_ok)})
        passed = passed and spans_ok

    route = entry.data.get("log_route")
    if route:
        ok, image = verify_log_route(n, int(route["root"]), int(route["classes"]), blocks, entry.lam)
        certificates.append(
            {"kind": "log_route", "verdict": verdict_of(ok), "root": int(route["root"]),
             "classes": int(route["classes"]), "misses": int((image != entry.lam).sum())}
        )
        passed = passed and ok
    return verdict_of(passed), certificates


def _verify_design(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    design = develop(entry_family(entry), entry.data.get("class_design"), runner=runner)
    verdict = verify_design(design, runner)
    passed = verdict.passed
    if "improper_degree" in entry.expected:
        passed = passed and verdict.improper_degree == int(entry.expected["improper_degree"])
    return verdict_of(passed), [verdict.to_dict(include_timing=False)]


def _verify_graceful(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    context = entry_context(entry)
    n = _modulus(entry, context)
    block = _labeled(entry.data["block"], n, entry)
    verdict = verify_graceful_labeling(entry.data["D"], block, entry.lam)
    certificates = [verdict.to_dict()]
    passed = verdict.passed
    if entry.data.get("hyperplane"):
        translate = context.hyperplane_translate(entry.data["D"])
        certificates.append(
            {"kind": "singer_set", "verdict": verdict_of(translate is not None), "translate": translate}
        )
        passed = passed and translate is not None
    if entry.data.get("develop") and passed:
        design = develop(entry_family(entry), runner=runner)
        design_verdict = verify_design(design, runner)
        certificates.append(design_verdict.to_dict(include_timing=False))
        passed = design_verdict.passed
    return verdict_of(passed), certificates


def _verify_nested(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    context = entry_context(entry)
    n = _modulus(entry, context)
    verdict = check_nested_difference_set(entry.data["D"], entry.data["subset"], n, entry.expected.get("lambda"))
    certificates = [verdict.to_dict()]
    passed = verdict.passed
    if entry.data.get("hyperplane"):
        translate = context.hyperplane_translate(entry.data["D"])
        certificates.append(
            {"kind": "singer_set", "verdict": verdict_of(translate is not None), "translate": translate}
        )
        passed = passed and translate is not None
    return verdict_of(passed), certificates


def _verify_near_resolvable(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    context = entry_context(entry)
    block = _labeled(entry.data["block"], context.v_q, entry)
    graceful = verify_graceful_labeling(entry.data["D"], block, entry.lam)
    near = verify_near_resolvable(block, context)
    expected_graceful = entry.expected.get("graceful", PASS)
    if graceful.verdict != expected_graceful:
        logger.warning(f"{entry.id}: graceful verdict {graceful.verdict}, expected {expected_graceful}")
        return INCONSISTENT, [graceful.to_dict(), near.to_dict()]
    return near.verdict, [graceful.to_dict(), near.to_dict()]


def _verify_graceful_search(entry: CatalogEntry, runner: ParallelRunner) -> Tuple[str, List[Dict]]:
    context = entry_context(entry)
    n = _modulus(entry, context)
    graph = AbstractGraph.from_dict(entry.data["graph"])
    result = search_graceful(entry.data["D"], graph, entry.lam, n, SearchBudget.from_config(), runner)
    if result.status == BUDGET_EXCEEDED:
        logger.warning(f"{entry.id}: search ran out of budget before deciding")
        return BUDGET_EXCEEDED, [result.to_dict(include_timing=False)]
    return verdict_of(result.found), [result.to_dict(include_timing=False)]


VERIFIERS: Dict[str, Callable[[CatalogEntry, ParallelRunner], Tuple[str, List[Dict]]]] = {
    "family": _verify_family_kind,
    "relative_family": _verify_family_kind,
    "initial_blocks": _verify_initial_blocks,
    "design": _verify_design,
    "graceful_labeling": _verify_graceful,
    "nested_set": _verify_nested,
    "near_resolvable": _verify_near_resolvable,
    "graceful_search": _verify_graceful_search,
}


def verify_loaded_entry(entry: CatalogEntry, runner: Optional[ParallelRunner] = None) -> EntryVerdict:
    runner = runner or ParallelRunner(1)
    with OperationTracker(f"verify_entry({entry.id})"):
        observed, certificates = VERIFIERS[entry.kind](entry, runner)
    verdict = EntryVerdict(
        entry_id=entry.id,
        kind=entry.kind,
        expected=entry.expected_verdict,
        observed=observed,
        certificates=certificates,
    )
    if verdict.matches:
        logger.info(f"Catalog entry {entry.id}: {verdict.observed} (as expected)")
    else:
        logger.warning(f"Catalog entry {entry.id}: {verdict.observed}, expected {verdict.expected}")
    return verdict


def verify_entry(
    entry_id: str, runner: Optional[ParallelRunner] = None, directory: Optional[str] = None
) -> EntryVerdict:
    return verify_loaded_entry(load_entry(entry_id, directory), runner)


def verify_all(runner: Optional[ParallelRunner] = None, directory: Optional[str] = None) -> List[EntryVerdict]:
    """Every entry in id order"""
    return [verify_entry(entry_id, runner, directory) for entry_id in list_entries(directory)]
