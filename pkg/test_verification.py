import random
import unittest
from itertools import combinations

from src.core.error_handling import (
    BadParamsError,
    BadPrimeError,
    EvenOrderError,
    FamilyNotVerifiedError,
    SemiregularityError,
)
from src.field.galois_field import build_field
from src.geometry.singer import SingerContext
from src.graphs.families import make_family_graph
from src.graphs.labeled import LabeledGraph
from src.services.task_runner import ParallelRunner
from src.verification.designs import DesignInstance, develop, verify_design, verify_near_resolvable, walecki_hcs
from src.verification.families import (
    FamilyCandidate,
    InitialBlocks,
    check_evenly_distributed,
    expand_initial_blocks,
    verify_family,
    verify_log_route,
)
from src.verification.graceful import (
    check_nested_difference_set,
    difference_set_parameters,
    paley_circulant_labeling,
    quadratic_residues,
    verify_graceful_labeling,
)


def gf2(v, *exponents):
    modulus = [None] * (v + 1)
    for i in exponents:
        modulus[i] = 0
    return SingerContext(build_field(2, 1, v, modulus))


CYCLES_127 = [
    (0, 1, 3, 7, 15, 31, 63),
    (0, 7, 1, 71, 74, 79, 92),
    (0, 18, 42, 14, 2, 114, 53),
    (0, 14, 47, 70, 91, 2, 22),
    (0, 80, 2, 75, 41, 14, 102),
    (0, 55, 3, 111, 63, 13, 96),
    (0, 29, 19, 8, 95, 65, 56),
    (0, 37, 20, 89, 63, 3, 46),
    (0, 51, 10, 72, 108, 40, 85),
]
RELATIVE_CYCLES_63 = [
    (0, 1, 58, 25, 21, 56, 42),
    (0, 50, 42, 49, 2, 21, 53),
    (0, 2, 27, 10, 49, 9, 60),
    (0, 22, 27, 12, 46, 9, 52),
]
D15 = [0, 1, 2, 4, 5, 8, 10]
D31 = [1, 2, 3, 4, 6, 8, 12, 15, 16, 17, 23, 24, 27, 29, 30]
D31_NESTING = [1, 3, 5, 6, 7, 11, 17, 18, 20, 21, 24, 25, 26, 27, 29]
TRIANGLES_31 = (1, 29, 3, 2, 27, 6, 4, 23, 12, 8, 24, 15, 16, 30, 17)
Q3STAR = (14, 5, 2, 0, 65, 95, 54)


class TestDifferenceFamilies(unittest.TestCase):
    def setUp(self):
        self.ctx = gf2(7, 0, 1, 7)
        cycle = make_family_graph("cycle", k=7)
        self.blocks = [LabeledGraph(cycle, labels, 127) for labels in CYCLES_127]

    def test_heptagon_family_covers_z127(self):
        certificate = verify_family(FamilyCandidate(127, self.blocks, 1, self.ctx, subspace_required=True))
        self.assertTrue(certificate.passed)
        self.assertEqual(len(certificate.subspace_witnesses), 9)
        self.assertEqual(sum(certificate.coverage.values()), 126)

    def test_translates_keep_the_verdict(self):
        candidate = FamilyCandidate(127, self.blocks, 1, self.ctx, subspace_required=True)
        for t in random.Random(7).sample(range(1, 127), 10):
            with self.subTest(t=t):
                self.assertTrue(verify_family(candidate.translate(t)).passed)

    def test_missing_block_is_reported(self):
        certificate = verify_family(FamilyCandidate(127, self.blocks[:-1], 1, self.ctx, subspace_required=True))
        self.assertFalse(certificate.passed)
        self.assertEqual(len(certificate.violations), 14)
        self.assertTrue(all(v.got == 0 and v.expected == 1 for v in certificate.violations))

    def test_worker_count_does_not_change_the_certificate(self):
        candidate = FamilyCandidate(127, self.blocks, 1, self.ctx, subspace_required=True)
        sequential = verify_family(candidate, ParallelRunner(1)).to_dict(include_timing=False)
        for jobs in (2, 8):
            parallel = verify_family(candidate, ParallelRunner(jobs)).to_dict(include_timing=False)
            self.assertEqual(parallel, sequential)

    def test_relative_family_over_the_line_spread(self):
        ctx = gf2(6, 0, 1, 3, 4, 6)
        cycle = make_family_graph("cycle", k=7)
        blocks = [LabeledGraph(cycle, labels, 63) for labels in RELATIVE_CYCLES_63]
        candidate = FamilyCandidate(63, blocks, 1, ctx, ctx.desarguesian_spread(3), subspace_required=True)
        certificate = verify_family(candidate)
        self.assertTrue(certificate.passed)
        self.assertEqual(certificate.relative_h, 9)


class TestInitialBlocks(unittest.TestCase):
    def setUp(self):
        self.ctx = gf2(7, 0, 1, 7)
        self.block = LabeledGraph(make_family_graph("q3star"), Q3STAR, 127)

    def test_cube_block_is_evenly_distributed(self):
        initial = InitialBlocks(127, [self.block], 1, self.ctx.frobenius_multipliers(), self.ctx,
                                subspace_required=True)
        verdict = check_evenly_distributed(initial)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.orbit_count, 18)
        self.assertEqual(verdict.orbit_size, 7)
        family = expand_initial_blocks(initial)
        self.assertEqual(len(family.blocks), 7)
        self.assertTrue(verify_family(family).passed)

    def test_log_route(self):
        ok, image = verify_log_route(127, 3, 18, [self.block])
        self.assertTrue(ok)
        self.assertEqual(image.tolist(), [1] * 18)

    def test_short_orbits_are_rejected(self):
        ctx = gf2(6, 0, 1, 6)
        initial = InitialBlocks(63, [], 1, ctx.frobenius_multipliers(), ctx)
        with self.assertRaises(SemiregularityError):
            check_evenly_distributed(initial)


class TestGracefulLabelings(unittest.TestCase):
    def test_heptagon_on_the_singer_set(self):
        block = LabeledGraph(make_family_graph("cycle", k=7), (10, 4, 8, 1, 0, 2, 5), 15)
        self.assertTrue(verify_graceful_labeling(D15, block, 1).passed)

    def test_prism_on_the_residues_mod_19(self):
        block = LabeledGraph(make_family_graph("prism", n=3), (17, 9, 11, 16, 4, 1), 19)
        self.assertTrue(verify_graceful_labeling(quadratic_residues(19), block, 1).passed)

    def test_label_outside_the_set(self):
        block = LabeledGraph(make_family_graph("cycle", k=7), (10, 4, 8, 1, 0, 2, 6), 15)
        verdict = verify_graceful_labeling(D15, block, 1)
        self.assertFalse(verdict.passed)
        self.assertFalse(verdict.labels_in_set)

    def test_paley_circulants(self):
        rng = random.Random(11)
        for p in (7, 11, 19, 23, 31):
            N = (p - 1) // 2
            jump_sets = [[1]] + [sorted(rng.sample(range(1, N // 2 + 1), rng.randint(1, N // 2)))
                                 for _ in range(5)]
            for S in jump_sets:
                with self.subTest(p=p, S=S):
                    block = paley_circulant_labeling(p, S)
                    self.assertTrue(verify_graceful_labeling(quadratic_residues(p), block, len(S)).passed)

    def test_paley_needs_p_three_mod_four(self):
        for p in (13, 9, 3):
            with self.assertRaises(BadPrimeError):
                paley_circulant_labeling(p, [1])


class TestDifferenceSets(unittest.TestCase):
    def test_singer_parameters(self):
        self.assertEqual(difference_set_parameters(D15, 15), (15, 7, 3))
        self.assertEqual(difference_set_parameters(D31, 31), (31, 15, 7))
        self.assertIsNone(difference_set_parameters([0, 1, 2], 15))

    def test_planar_set_nested_in_a_singer_set(self):
        verdict = check_nested_difference_set(D31_NESTING, [1, 5, 11, 24, 25, 27], 31, 1)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.parameters, (31, 6, 1))

    def test_consecutive_triple_is_not_a_difference_set(self):
        verdict = check_nested_difference_set(D15, [0, 1, 2], 15)
        self.assertFalse(verdict.passed)
        self.assertTrue(verdict.subset)


class TestDevelopment(unittest.TestCase):
    def test_singer_heptagon_develops_into_a_design(self):
        ctx = gf2(4, 0, 1, 4)
        block = LabeledGraph(make_family_graph("cycle", k=7), (10, 4, 8, 1, 0, 2, 5), 15)
        design = develop(FamilyCandidate(15, [block], 1, ctx, subspace_required=True))
        self.assertEqual(design.block_count, 15)
        verdict = verify_design(design)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.pairs_checked, 105)
        self.assertEqual(verdict.coverage_sum, 105)

    def test_unverified_family_is_not_developed(self):
        block = LabeledGraph(make_family_graph("cycle", k=7), (10, 4, 8, 1, 0, 2, 6), 15)
        with self.assertRaises(FamilyNotVerifiedError):
            develop(FamilyCandidate(15, [block], 1))

    def test_relative_family_as_gdd_and_with_walecki_classes(self):
        ctx = gf2(6, 0, 1, 3, 4, 6)
        cycle = make_family_graph("cycle", k=7)
        blocks = [LabeledGraph(cycle, labels, 63) for labels in RELATIVE_CYCLES_63]
        candidate = FamilyCandidate(63, blocks, 1, ctx, ctx.desarguesian_spread(3), subspace_required=True)

        gdd = verify_design(develop(candidate))
        self.assertTrue(gdd.passed)
        self.assertEqual(gdd.gdd_h, 9)

        design = develop(candidate, class_design="walecki")
        self.assertEqual(design.block_count, 4 * 63 + 9 * 3)
        verdict = verify_design(design)
        self.assertTrue(verdict.passed)
        self.assertIsNone(verdict.gdd_h)

    def test_relative_family_with_classes_without_materializing(self):
        ctx = gf2(6, 0, 1, 3, 4, 6)
        cycle = make_family_graph("cycle", k=7)
        blocks = [LabeledGraph(cycle, labels, 63) for labels in RELATIVE_CYCLES_63]
        candidate = FamilyCandidate(63, blocks, 1, ctx, ctx.desarguesian_spread(3), subspace_required=True)

        for class_design in ("walecki", "complete"):
            with self.subTest(class_design=class_design):
                full = verify_design(develop(candidate, class_design=class_design, materialize=True))
                implicit = verify_design(develop(candidate, class_design=class_design, materialize=False))
                self.assertTrue(full.passed)
                self.assertTrue(implicit.passed, implicit.to_dict())
                self.assertEqual(implicit.method, "difference-family")
                self.assertEqual(implicit.pairs_checked, 9 * 21)
                self.assertEqual(implicit.coverage_sum, 9 * 21)

        design = develop(candidate, class_design="walecki", materialize=False)
        design.extra_blocks.pop()
        verdict = verify_design(design)
        self.assertFalse(verdict.passed)
        self.assertTrue(all(g == 0 for _, _, _, g in verdict.pair_violations))

    def test_implicit_development_checks_the_family(self):
        ctx = gf2(7, 0, 1, 7)
        cycle = make_family_graph("cycle", k=7)
        blocks = [LabeledGraph(cycle, labels, 127) for labels in CYCLES_127]
        design = develop(FamilyCandidate(127, blocks, 1, ctx, subspace_required=True), materialize=False)
        verdict = verify_design(design)
        self.assertTrue(verdict.passed)
        self.assertEqual(verdict.method, "difference-family")
        self.assertEqual(verdict.blocks, 9 * 127)


class TestWalecki(unittest.TestCase):
    def test_cycles_partition_the_complete_graph(self):
        for u in range(3, 100, 2):
            with self.subTest(u=u):
                seen = []
                for cycle in walecki_hcs(u):
                    self.assertEqual(sorted(cycle), list(range(u)))
                    seen += [frozenset((cycle[i], cycle[(i + 1) % u])) for i in range(u)]
                self.assertEqual(len(seen), len(set(seen)))
                self.assertEqual(set(seen), {frozenset(e) for e in combinations(range(u), 2)})

    def test_even_order(self):
        with self.assertRaises(EvenOrderError):
            walecki_hcs(8)


class TestNearResolvable(unittest.TestCase):
    def setUp(self):
        self.graph = make_family_graph("clique_union", sizes=[3, 3, 3, 3, 3])

    def test_triangles_on_the_trace_zero_hyperplane_are_lines(self):
        ctx = gf2(5, 0, 3, 5)
        block = LabeledGraph(self.graph, TRIANGLES_31, 31)
        self.assertTrue(verify_graceful_labeling(D31, block, 1).passed)
        verdict = verify_near_resolvable(block, ctx)
        self.assertTrue(verdict.passed)
        self.assertTrue(all(s is None for s in verdict.clique_sums))

    def test_developed_design_is_checked_on_its_base_block(self):
        ctx = gf2(5, 0, 3, 5)
        block = LabeledGraph(self.graph, TRIANGLES_31, 31)
        design = DesignInstance(n=31, lam=1, orbits=[block], context=ctx)
        self.assertEqual(verify_near_resolvable(design).to_dict(), verify_near_resolvable(block, ctx).to_dict())
        with self.assertRaises(BadParamsError):
            verify_near_resolvable(DesignInstance(n=31, lam=1, orbits=[block, block], context=ctx))
        with self.assertRaises(BadParamsError):
            verify_near_resolvable(block)

    def test_same_triangles_fail_in_another_field_model(self):
        ctx = gf2(5, 0, 2, 5)
        block = LabeledGraph(self.graph, TRIANGLES_31, 31)
        verdict = verify_near_resolvable(block, ctx)
        self.assertFalse(verdict.passed)
        self.assertFalse(verdict.covers_hyperplane)
        self.assertFalse(all(verdict.lines))


if __name__ == "__main__":
    unittest.main()
