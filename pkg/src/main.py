"""
Command line entry point for qdesign.

    python -m src.main verify --catalog steiner-13-3-1-q2
    python -m src.main verify --all
    python -m src.main search --input spec.json --jobs 4
    python -m src.main admissible --v 7 --k 3 --q 5 --steiner
    python -m src.main sizes --table steiner
    python -m src.main catalog list
    python -m src.main develop --catalog cycle-6-C3-q2-relative --class-design walecki

Exit codes: 0 pass / found, 1 fail / exhausted, 2 usage or schema error,
3 search budget exceeded. Diagnostics go to stderr; JSON goes to stdout
and, with --output, to a file.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from src.admissibility import (
    admissibility_table,
    admissible_general,
    admissible_parameters,
    cycle_admissible,
    fano_size_table,
    path_admissible,
    singer_graceful_admissible,
    steiner_admissible,
    steiner_size_table,
    table_to_tsv,
)
from src.catalog import entry_family, export_entries, list_entries, load_entry, raw_entry
from src.catalog import verify_entry, verify_loaded_entry
from src.core.error_handling import (
    FamilyNotVerifiedError,
    InfeasibleCountError,
    LoggingManager,
    QDesignError,
    UsageError,
)
from src.graphs.families import AbstractGraph
from src.models.catalog_entry import CatalogEntry, EntryVerdict
from src.models.certificates import canonical_json
from src.models.search_spec import SearchSpec
from src.search.backtracking import BUDGET_EXCEEDED, FOUND
from src.services.config_loader import ToolkitConfig, use_config
from src.services.search_service import run_search
from src.services.task_runner import ParallelRunner
from src.verification.designs import CLASS_DESIGNS, develop, verify_design

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


# ==============================================================================
# Argument parsing
# ==============================================================================


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML configuration file (default: config.yml)")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Override logging.level")
    common.add_argument("--jobs", type=int, help="Worker count for verification and search")
    common.add_argument("--output", help="Write the JSON document (or exported entries) here")
    common.add_argument("--format", choices=["json", "tsv"], help="Output format for tables and verdicts")
    common.add_argument("--seed", type=int, help="Recorded in search output; has no effect on the search")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="qdesign",
        description="Verify and search graph decompositions of projective spaces over finite fields",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Exit codes: 0 pass/found, 1 fail/exhausted, 2 usage/schema error, 3 budget exceeded",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    verify = sub.add_parser("verify", parents=[common], help="Re-verify catalog entries or an entry file")
    source = verify.add_mutually_exclusive_group(required=True)
    source.add_argument("--catalog", metavar="ID", help="Catalog entry id")
    source.add_argument("--input", metavar="FILE", help="Entry document in the catalog schema")
    source.add_argument("--all", action="store_true", help="Every catalog entry")
    verify.add_argument("--emit-certificate", action="store_true", help="Print full certificates")

    search = sub.add_parser("search", parents=[common], help="Run a search specification")
    search.add_argument("--input", metavar="FILE", required=True, help="Search specification document")
    search.add_argument("--budget-nodes", type=int, help="Node budget (overrides config and spec)")
    search.add_argument("--budget-seconds", type=float, help="Wall clock budget (overrides config and spec)")
    search.add_argument("--emit-certificate", action="store_true", help="Include the witness certificate")

    admissible = sub.add_parser("admissible", parents=[common], help="Necessary conditions for a design")
    admissible.add_argument("--v", type=int, required=True)
    admissible.add_argument("--q", type=int, required=True)
    admissible.add_argument("--k", type=int)
    admissible.add_argument("--lambda", dest="lam", type=int, default=1)
    kind = admissible.add_mutually_exclusive_group()
    kind.add_argument("--steiner", action="store_true", help="2-(v,k,1)_q designs")
    kind.add_argument("--cycle", action="store_true", help="Cycles of length [k]_q")
    kind.add_argument("--path", action="store_true", help="Paths on [k]_q vertices")
    kind.add_argument("--graph", metavar="JSON", help="Graph description, e.g. '{\"family\":\"q3star\"}'")
    kind.add_argument("--table", action="store_true", help="All admissible (order, size) pairs")
    admissible.add_argument("--singer-graceful", action="store_true", help="With --graph: Singer-graceful conditions")
    admissible.add_argument("--order", type=int)
    admissible.add_argument("--size", type=int)
    admissible.add_argument("--degree-gcd", type=int)

    sizes = sub.add_parser("sizes", parents=[common], help="Steiner family size tables")
    sizes.add_argument("--table", choices=["steiner", "fano"])
    sizes.add_argument("--v", type=int)
    sizes.add_argument("--k", type=int)
    sizes.add_argument("--q", type=int)

    catalog = sub.add_parser("catalog", parents=[common], help="List, show or export catalog entries")
    catalog.add_argument("action", choices=["list", "show", "export"])
    catalog.add_argument("entry_id", nargs="?", help="Entry id for show")

    dev = sub.add_parser("develop", parents=[common], help="Develop a catalog family and verify the design")
    dev.add_argument("--catalog", metavar="ID", required=True)
    dev.add_argument("--class-design", choices=list(CLASS_DESIGNS))
    materialize = dev.add_mutually_exclusive_group()
    materialize.add_argument("--materialize", dest="materialize", action="store_true", default=None)
    materialize.add_argument("--implicit", dest="materialize", action="store_false")
    return parser


# ==============================================================================
# Configuration and output
# ==============================================================================


def _configure(args: argparse.Namespace) -> ToolkitConfig:
    """Load config.yml (or --config), then apply flags; flags win over file and environment"""
    config = ToolkitConfig.from_file(args.config)
    if args.log_level:
        config.log_level = args.log_level
    if args.jobs is not None:
        if args.jobs < 1:
            raise UsageError(f"--jobs must be at least 1, got {args.jobs}")
        config.jobs = args.jobs
    if getattr(args, "budget_nodes", None) is not None:
        config.budget_nodes = args.budget_nodes
    if getattr(args, "budget_seconds", None) is not None:
        config.budget_seconds = args.budget_seconds
    use_config(config)
    LoggingManager.setup_logging(config.log_level, config.log_file)
    return config


def _read_json(path: str) -> Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}")


def _emit(render: Callable[[bool], Dict[str, Any]], args: argparse.Namespace, config: ToolkitConfig):
    """Pretty JSON on stdout; canonical JSON in --output, without timing when output is reproducible"""
    print(json.dumps(render(True), indent=2, sort_keys=True))
    if args.output:
        document = render(not config.reproducible_output)
        with open(args.output, "w") as f:
            f.write(canonical_json(document) + "\n")
        logger.info(f"Wrote {args.output}")


def _emit_frame(frame, args: argparse.Namespace):
    if args.format == "json":
        text = json.dumps(frame.to_dict(orient="records"), indent=2)
    else:
        text = table_to_tsv(frame)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if args.output:
        with open(args.output, "w") as f:
            f.write(text if text.endswith("\n") else text + "\n")


def _verdict_exit(verdicts: List[EntryVerdict]) -> int:
    if any(v.observed == BUDGET_EXCEEDED for v in verdicts):
        return EXIT_BUDGET
    return EXIT_OK if all(v.matches for v in verdicts) else EXIT_FAIL


# ==============================================================================
# Subcommands
# ==============================================================================


def cmd_verify(args: argparse.Namespace, config: ToolkitConfig) -> int:
    runner = ParallelRunner(config.jobs)
    if args.all:
        verdicts = [verify_entry(entry_id, runner) for entry_id in list_entries()]
        if args.emit_certificate or args.output:
            _emit(lambda timing: {"entries": [v.to_dict() for v in verdicts]}, args, config)
        if not args.emit_certificate:
            for v in verdicts:
                mark = "ok" if v.matches else "MISMATCH"
                print(f"{v.entry_id}\t{v.kind}\texpected={v.expected}\tobserved={v.observed}\t{mark}")
        return _verdict_exit(verdicts)

    if args.catalog:
        verdict = verify_entry(args.catalog, runner)
    else:
        verdict = verify_loaded_entry(CatalogEntry.from_dict(_read_json(args.input)), runner)

    _emit(lambda timing: verdict.to_dict(), args, config)
    return _verdict_exit([verdict])


def cmd_search(args: argparse.Namespace, config: ToolkitConfig) -> int:
    spec = SearchSpec.from_dict(_read_json(args.input))
    if args.budget_nodes is not None:
        spec.budget_nodes = args.budget_nodes
    if args.budget_seconds is not None:
        spec.budget_seconds = args.budget_seconds
    if args.seed is not None:
        spec.seed = args.seed
    result = run_search(spec, ParallelRunner(config.jobs, processes=config.search_processes))

    def render(timing: bool) -> Dict[str, Any]:
        data = result.to_dict(include_timing=timing)
        if not args.emit_certificate:
            data.pop("certificate")
        return data

    _emit(render, args, config)
    if result.status == FOUND:
        return EXIT_OK
    if result.status == BUDGET_EXCEEDED:
        return EXIT_BUDGET
    return EXIT_FAIL


def _admissibility_verdict(args: argparse.Namespace):
    if args.steiner or args.cycle or args.path:
        if args.k is None:
            raise UsageError("--k is required with --steiner, --cycle and --path")
        if args.steiner:
            return steiner_admissible(args.v, args.k, args.q)
        if args.cycle:
            return cycle_admissible(args.v, args.k, args.q)
        return path_admissible(args.v, args.k, args.q)
    if args.graph:
        try:
            graph = AbstractGraph.from_dict(json.loads(args.graph))
        except json.JSONDecodeError as e:
            raise UsageError(f"--graph is not valid JSON: {e}")
        if args.singer_graceful:
            return singer_graceful_admissible(args.v, args.q, graph, args.lam)
        return admissible_general(args.v, args.q, args.lam, graph)
    if None in (args.order, args.size, args.degree_gcd):
        raise UsageError("give --steiner, --cycle, --path, --graph, --table or all of --order --size --degree-gcd")
    return admissible_parameters(args.v, args.q, args.lam, args.order, args.size, args.degree_gcd)


def cmd_admissible(args: argparse.Namespace, config: ToolkitConfig) -> int:
    if args.table:
        _emit_frame(admissibility_table(args.v, args.q, args.lam), args)
        return EXIT_OK
    verdict = _admissibility_verdict(args)
    if args.format == "json" or args.output:
        _emit(lambda timing: verdict.to_dict(), args, config)
    if args.format != "json":
        if verdict.admissible:
            print("admissible")
        else:
            print(f"not admissible: {', '.join(verdict.failed)}")
    return EXIT_OK if verdict.admissible else EXIT_FAIL


def cmd_sizes(args: argparse.Namespace, config: ToolkitConfig) -> int:
    if args.table == "steiner":
        frame = steiner_size_table(config.steiner_rows)
    elif args.table == "fano":
        frame = fano_size_table(config.fano_q)
    elif None not in (args.v, args.k, args.q):
        frame = steiner_size_table([(args.v, args.k, args.q)])
    else:
        raise UsageError("give --table steiner|fano or all of --v --k --q")
    _emit_frame(frame, args)
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace, config: ToolkitConfig) -> int:
    if args.action == "list":
        ids = list_entries()
        if args.format == "json":
            print(json.dumps(ids, indent=2))
        else:
            for entry_id in ids:
                entry = load_entry(entry_id)
                print(f"{entry_id}\t{entry.kind}\t{entry.expected_verdict}")
        return EXIT_OK
    if args.action == "show":
        if not args.entry_id:
            raise UsageError("catalog show needs an entry id")
        sys.stdout.write(raw_entry(args.entry_id))
        return EXIT_OK
    if not args.output:
        raise UsageError("catalog export needs --output DIR")
    written = export_entries(args.output)
    print(f"exported {len(written)} entries to {args.output}")
    return EXIT_OK


def cmd_develop(args: argparse.Namespace, config: ToolkitConfig) -> int:
    runner = ParallelRunner(config.jobs)
    entry = load_entry(args.catalog)
    design = develop(entry_family(entry), args.class_design, args.materialize, runner)
    verdict = verify_design(design, runner)
    _emit(lambda timing: verdict.to_dict(include_timing=timing), args, config)
    return EXIT_OK if verdict.passed else EXIT_FAIL


COMMANDS = {
    "verify": cmd_verify,
    "search": cmd_search,
    "admissible": cmd_admissible,
    "sizes": cmd_sizes,
    "catalog": cmd_catalog,
    "develop": cmd_develop,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one subcommand and return its exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = _configure(args)
    except (OSError, QDesignError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        print(f"error: configuration could not be loaded: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args, config)
    except (InfeasibleCountError, FamilyNotVerifiedError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_FAIL
    except QDesignError as e:
        logger.error(f"{args.command}: {e}")
        context = getattr(e, "context", None)
        if context:
            logger.error(f"{args.command}: context {context}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
