import time
import unittest

from src.core.error_handling import InfeasibleCountError, NotHyperplaneError
from src.field.galois_field import build_field
from src.geometry.singer import SingerContext
from src.graphs.families import make_family_graph
from src.graphs.labeled import LabeledGraph
from src.search.backtracking import (
    BUDGET_EXCEEDED,
    EXHAUSTED,
    FOUND,
    TIME_CHECK_INTERVAL,
    SearchBudget,
    run_branches,
)
from src.search.graceful_search import exhaustive_permutation_check, search_graceful
from src.search.lines import hyperplane_lines, search_line_partition
from src.search.nested_search import search_nested_set
from src.search.subspace_search import canonical_translate, search_family, search_subspace_block
from src.services.task_runner import ParallelRunner
from src.verification.graceful import quadratic_residues

from test_verification import CYCLES_127, D15, D31, D31_NESTING

BUDGET = SearchBudget(nodes=10_000_000, seconds=600.0)


def gf2(v, *exponents):
    modulus = [None] * (v + 1)
    for i in exponents:
        modulus[i] = 0
    return SingerContext(build_field(2, 1, v, modulus))


class TestGracefulSearch(unittest.TestCase):
    def test_heptagon_on_d15(self):
        result = search_graceful(D15, make_family_graph("cycle", k=7), 1, 15, BUDGET)
        self.assertEqual(result.status, FOUND)
        self.assertEqual(result.certificate["verdict"], "pass")
        self.assertEqual(exhaustive_permutation_check(D15, make_family_graph("cycle", k=7), 1, 15), 112)

    def test_triangle_and_square_are_not_d15_graceful(self):
        graph = make_family_graph("cycle_union", sizes=[3, 4])
        result = search_graceful(D15, graph, 1, 15, BUDGET)
        self.assertEqual(result.status, EXHAUSTED)
        self.assertIsNone(result.witness)
        self.assertEqual(exhaustive_permutation_check(D15, graph, 1, 15), 0)

    def test_prism_on_the_paley_set(self):
        result = search_graceful(quadratic_residues(19), make_family_graph("prism", n=3), 1, 19, BUDGET)
        self.assertTrue(result.found)
        self.assertEqual(result.witness["kind"], "graceful_labeling")

    def test_budget(self):
        graph = make_family_graph("cycle_union", sizes=[3, 4])
        result = search_graceful(D15, graph, 1, 15, SearchBudget(nodes=5, seconds=60.0))
        self.assertEqual(result.status, BUDGET_EXCEEDED)
        self.assertGreater(result.nodes_explored, 5)

    def test_infeasible_counts(self):
        with self.assertRaises(InfeasibleCountError):
            search_graceful(D15, make_family_graph("cycle", k=6), 1, 15, BUDGET)
        with self.assertRaises(InfeasibleCountError):
            search_graceful([0, 1, 2], make_family_graph("cycle", k=7), 1, 15, BUDGET)

    def test_outcome_does_not_depend_on_worker_count(self):
        graph = make_family_graph("cycle", k=7)
        expected = search_graceful(D15, graph, 1, 15, BUDGET, ParallelRunner(1)).to_dict(include_timing=False)
        for jobs in (2, 8):
            with self.subTest(jobs=jobs):
                result = search_graceful(D15, graph, 1, 15, BUDGET, ParallelRunner(jobs))
                self.assertEqual(result.to_dict(include_timing=False), expected)
        forked = search_graceful(D15, graph, 1, 15, BUDGET, ParallelRunner(4, processes=True))
        self.assertEqual(forked.to_dict(include_timing=False), expected)


class TestSubspaceSearch(unittest.TestCase):
    def test_canonical_translate(self):
        self.assertEqual(canonical_translate([5, 6, 8], 7), (0, 1, 3))
        self.assertEqual(canonical_translate([3, 4, 6], 7), canonical_translate([0, 1, 3], 7))

    def test_cube_block_is_rediscovered(self):
        ctx = gf2(7, 0, 1, 7)
        result = search_subspace_block(ctx, make_family_graph("q3star"), 1, budget=BUDGET)
        self.assertTrue(result.found)
        self.assertEqual(result.witness["kind"], "initial_blocks")
        self.assertEqual(result.witness["multipliers"], [1, 2, 4, 8, 16, 32, 64])
        self.assertTrue(ctx.is_subspace(result.witness["subspace"]))

    def test_one_block_must_meet_every_orbit(self):
        with self.assertRaises(InfeasibleCountError):
            search_subspace_block(gf2(7, 0, 1, 7), make_family_graph("cycle", k=7), 1, budget=BUDGET)

    def test_ninth_heptagon_completes_the_family(self):
        ctx = gf2(7, 0, 1, 7)
        cycle = make_family_graph("cycle", k=7)
        fixed = [LabeledGraph(cycle, labels, 127) for labels in CYCLES_127[:8]]
        result = search_family(ctx, cycle, 1, fixed_blocks=fixed, budget=BUDGET)
        self.assertTrue(result.found)
        self.assertEqual(len(result.witness["blocks"]), 9)
        self.assertEqual(result.certificate["verdict"], "pass")
        self.assertEqual(result.witness["kind"], "family")

    def test_relative_family_over_the_line_spread(self):
        ctx = gf2(6, 0, 1, 3, 4, 6)
        result = search_family(ctx, make_family_graph("cycle", k=7), 1, spread_n=3, budget=BUDGET)
        self.assertTrue(result.found)
        self.assertEqual(result.witness["kind"], "relative_family")
        self.assertEqual(len(result.witness["blocks"]), 4)
        self.assertEqual(result.certificate["relative_h"], 9)

    def test_higher_lambda_reuses_blocks(self):
        ctx = gf2(3, 0, 1, 3)
        triangle = make_family_graph("complete", k=3)
        for lam in (1, 2, 3):
            with self.subTest(lam=lam):
                result = search_family(ctx, triangle, lam, budget=BUDGET)
                self.assertEqual(result.status, FOUND)
                self.assertEqual(len(result.witness["blocks"]), lam)
                self.assertEqual(result.certificate["verdict"], "pass")
                self.assertEqual(result.certificate["lambda"], lam)

    def test_fixed_blocks_that_overlap(self):
        ctx = gf2(7, 0, 1, 7)
        cycle = make_family_graph("cycle", k=7)
        fixed = [LabeledGraph(cycle, CYCLES_127[0], 127)] * 2
        with self.assertRaises(InfeasibleCountError):
            search_family(ctx, cycle, 1, fixed_blocks=fixed, budget=BUDGET)


class TestNestedSearch(unittest.TestCase):
    def test_first_planar_subset(self):
        result = search_nested_set(D31_NESTING, 6, 1, 31, BUDGET)
        self.assertTrue(result.found)
        self.assertEqual(result.witness["subset"], [1, 3, 6, 7, 17, 25])
        self.assertEqual(result.certificate["parameters"], [31, 6, 1])

    def test_parameters_must_count(self):
        with self.assertRaises(InfeasibleCountError):
            search_nested_set(D15, 3, 1, 15, BUDGET)
        with self.assertRaises(InfeasibleCountError):
            search_nested_set([0, 1, 2], 6, 1, 31, BUDGET)


class TestLinePartitions(unittest.TestCase):
    def test_trace_zero_hyperplane_splits_into_lines(self):
        ctx = gf2(5, 0, 3, 5)
        self.assertTrue(hyperplane_lines(ctx, D31))
        result = search_line_partition(ctx, D31, BUDGET)
        self.assertTrue(result.found)
        self.assertEqual(result.certificate["verdict"], "pass")
        labels = result.witness["block"]["labels"]
        self.assertEqual(sorted(labels), D31)

    def test_default_hyperplane(self):
        result = search_line_partition(gf2(3, 0, 1, 3), budget=BUDGET)
        self.assertEqual(result.status, FOUND)

    def test_printed_set_is_not_a_hyperplane_under_another_modulus(self):
        with self.assertRaises(NotHyperplaneError):
            search_line_partition(gf2(5, 0, 2, 5), D31, BUDGET)


class TestBranchBudget(unittest.TestCase):
    @staticmethod
    def slow_branch(branch, counter):
        time.sleep(0.2)
        for _ in range(TIME_CHECK_INTERVAL):
            counter.tick()
        return None

    def test_seconds_budget_covers_all_branches(self):
        budget = SearchBudget(nodes=10_000_000, seconds=0.5)
        for jobs in (1, 4):
            with self.subTest(jobs=jobs):
                started = time.perf_counter()
                outcome = run_branches(range(10), self.slow_branch, budget, ParallelRunner(jobs))
                self.assertEqual(outcome.status, BUDGET_EXCEEDED)
                self.assertLess(time.perf_counter() - started, 1.5)

    def test_fast_branches_finish_within_the_deadline(self):
        budget = SearchBudget(nodes=10_000_000, seconds=60.0)
        outcome = run_branches(range(3), self.slow_branch, budget)
        self.assertEqual(outcome.status, EXHAUSTED)
        self.assertEqual(outcome.nodes, 3 * TIME_CHECK_INTERVAL)


if __name__ == "__main__":
    unittest.main()
