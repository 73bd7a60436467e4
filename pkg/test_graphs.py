import unittest

import numpy as np

from src.core.error_handling import (
    BadParamsError,
    CollisionError,
    NotPrimeError,
    NotPrimitiveRootError,
    SeedIncompleteError,
)
from src.graphs.families import AbstractGraph, make_family_graph, make_rotation, permutation_order
from src.graphs.labeled import (
    LabeledGraph,
    difference_list,
    difference_table,
    expand_frobenius_seed,
    log_image,
)

D127 = [1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 15, 16, 17, 18, 20, 22, 23, 24, 29, 30, 32, 33, 34, 36, 39,
        40, 44, 46, 48, 49, 55, 57, 58, 59, 60, 64, 65, 66, 68, 69, 71, 72, 75, 78, 80, 83, 88, 91, 92,
        93, 96, 98, 99, 101, 105, 109, 110, 113, 114, 116, 118, 120]
C63_SEED = {0: 1, 1: 3, 2: 9, 3: 101, 4: 91, 5: 5, 6: 83, 7: 113, 8: 11}


class TestFamilies(unittest.TestCase):
    def test_orders_and_sizes(self):
        cases = [
            ("complete", {"k": 7}, 7, 21),
            ("cycle", {"k": 7}, 7, 7),
            ("path", {"k": 13}, 13, 12),
            ("prism", {"n": 20}, 40, 60),
            ("petersen", {"n": 20, "t": 3}, 40, 60),
            ("moebius", {"n": 20}, 40, 60),
            ("q3star", {}, 7, 9),
            ("clique_union", {"sizes": [3, 3, 3, 3, 3]}, 15, 15),
            ("cycle_union", {"sizes": [3, 4]}, 7, 7),
        ]
        for tag, params, order, size in cases:
            with self.subTest(tag=tag):
                graph = make_family_graph(tag, **params)
                self.assertEqual(graph.order, order)
                self.assertEqual(graph.size, size)

    def test_q3star_degrees(self):
        graph = make_family_graph("q3star")
        self.assertEqual(sorted(graph.degrees()), [2, 2, 2, 3, 3, 3, 3])
        self.assertEqual(graph.edges[:3], ((0, 1), (0, 2), (0, 4)))

    def test_prism_numbering(self):
        graph = make_family_graph("prism", n=3)
        self.assertIn((0, 3), graph.edges)
        self.assertIn((3, 4), graph.edges)
        self.assertIn((0, 2), graph.edges)
        self.assertTrue(graph.is_regular())

    def test_null_union_appends_isolated_vertices(self):
        graph = make_family_graph("null_union", base={"family": "prism", "params": {"n": 3}}, d=1)
        self.assertEqual(graph.order, 7)
        self.assertEqual(graph.size, 9)
        self.assertEqual(graph.isolated_count, 1)
        self.assertEqual(graph.degrees()[6], 0)

    def test_bad_parameters(self):
        with self.assertRaises(BadParamsError):
            make_family_graph("petersen", n=20, t=10)
        with self.assertRaises(BadParamsError):
            make_family_graph("cycle", k=2)
        with self.assertRaises(BadParamsError):
            make_family_graph("hypercube", k=3)
        with self.assertRaises(BadParamsError):
            AbstractGraph(order=3, edges=((0, 0),))

    def test_dict_round_trip(self):
        graph = make_family_graph("petersen", n=20, t=7)
        self.assertEqual(AbstractGraph.from_dict(graph.to_dict()).edges, graph.edges)
        custom = AbstractGraph(order=3, edges=((1, 0), (1, 2)))
        self.assertEqual(AbstractGraph.from_dict(custom.to_dict()).edges, ((0, 1), (1, 2)))


class TestRotations(unittest.TestCase):
    def test_prism_rotation(self):
        perm = make_rotation(make_family_graph("prism", n=20), 4)
        self.assertEqual(perm[0], 4)
        self.assertEqual(perm[20], 24)
        self.assertEqual(permutation_order(perm), 5)

    def test_moebius_rotation(self):
        perm = make_rotation(make_family_graph("moebius", n=20), 8)
        self.assertEqual(permutation_order(perm), 5)

    def test_null_union_rotation_fixes_isolated_vertices(self):
        graph = make_family_graph("null_union", base={"family": "cycle", "params": {"k": 6}}, d=2)
        perm = make_rotation(graph, 2)
        self.assertEqual(perm[6:], (6, 7))

    def test_no_rotation_for_q3star(self):
        with self.assertRaises(BadParamsError):
            make_rotation(make_family_graph("q3star"), 1)


class TestLabeledGraphs(unittest.TestCase):
    def test_graceful_cycle_difference_list(self):
        block = LabeledGraph(make_family_graph("cycle", k=7), (10, 4, 8, 1, 0, 2, 5), 15)
        diffs = difference_list(block)
        self.assertEqual(diffs.total, 14)
        self.assertEqual(diffs.multiplicity(0), 0)
        self.assertTrue(all(diffs.multiplicity(x) == 1 for x in range(1, 15)))
        self.assertTrue(diffs.is_symmetric())

    def test_labels_are_reduced_and_checked(self):
        block = LabeledGraph(make_family_graph("path", k=3), (0, 8, 3), 7)
        self.assertEqual(block.labels, (0, 1, 3))
        self.assertEqual(LabeledGraph(make_family_graph("path", k=3), (0, 7, 3), 7).get_validation_errors(),
                         ["labels are not injective"])
        with self.assertRaises(BadParamsError):
            LabeledGraph(make_family_graph("path", k=3), (0, 1), 7)

    def test_difference_table(self):
        block = LabeledGraph(make_family_graph("path", k=3), (0, 1, 3), 7)
        table = difference_table(block)
        self.assertEqual(table.loc[0, 1], 6)
        self.assertEqual(table.loc[1, 0], 1)
        self.assertEqual(table.loc[3, 1], 2)
        self.assertTrue(table.isna().loc[0, 3])

    def test_log_route_of_the_cube_block(self):
        block = LabeledGraph(make_family_graph("q3star"), (14, 5, 2, 0, 65, 95, 54), 127)
        image = log_image(127, 3, difference_list(block), 18)
        self.assertTrue(np.all(image == 1))
        self.assertEqual(log_image(127, 3, [1, 3, 9]), [0, 1, 2])

    def test_log_needs_prime_and_primitive_root(self):
        with self.assertRaises(NotPrimeError):
            log_image(15, 2, [1])
        with self.assertRaises(NotPrimitiveRootError):
            log_image(127, 2, [1])


class TestSeedExpansion(unittest.TestCase):
    def setUp(self):
        self.cycle = make_family_graph("cycle", k=63)

    def test_expands_to_the_singer_set(self):
        block = expand_frobenius_seed(self.cycle, C63_SEED, make_rotation(self.cycle, 9), 127, 2, v=7)
        self.assertEqual(sorted(block.labels), D127)
        self.assertEqual(block.labels[9], 2)

    def test_missing_orbit(self):
        with self.assertRaises(SeedIncompleteError):
            expand_frobenius_seed(self.cycle, {0: 1}, make_rotation(self.cycle, 9), 127, 2, v=7)

    def test_inconsistent_seed(self):
        seed = dict(C63_SEED)
        seed[9] = 3
        with self.assertRaises(CollisionError):
            expand_frobenius_seed(self.cycle, seed, make_rotation(self.cycle, 9), 127, 2, v=7)

    def test_rotation_order_must_divide_v(self):
        with self.assertRaises(BadParamsError):
            expand_frobenius_seed(self.cycle, C63_SEED, make_rotation(self.cycle, 7), 127, 2, v=7)


if __name__ == "__main__":
    unittest.main()
