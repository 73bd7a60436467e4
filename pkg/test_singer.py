import unittest

from src.core.error_handling import EqualPointsError, NotDivisibleError, NotHyperplaneError
from src.field.galois_field import build_field
from src.geometry.singer import (
    SingerContext,
    blocks_are_subspaces,
    frobenius_semiregular_on_nonidentity,
    q_bracket,
)


def gf2(v, *exponents):
    modulus = [None] * (v + 1)
    for i in exponents:
        modulus[i] = 0
    return SingerContext(build_field(2, 1, v, modulus))


D15 = [0, 1, 2, 4, 5, 8, 10]
D31 = [1, 2, 3, 4, 6, 8, 12, 15, 16, 17, 23, 24, 27, 29, 30]
D31_NESTING = [1, 3, 5, 6, 7, 11, 17, 18, 20, 21, 24, 25, 26, 27, 29]
D63 = [0, 1, 2, 3, 4, 6, 7, 8, 9, 12, 13, 14, 16, 18, 19, 24, 26, 27, 28, 32, 33, 35, 36, 38, 41, 45,
       48, 49, 52, 54, 56]
Q3STAR_LABELS = [14, 5, 2, 0, 65, 95, 54]


class TestBrackets(unittest.TestCase):
    def test_gaussian_integers(self):
        self.assertEqual(q_bracket(7, 2), 127)
        self.assertEqual(q_bracket(5, 3), 121)
        self.assertEqual(q_bracket(1, 5), 1)
        self.assertEqual(q_bracket(0, 2), 0)

    def test_frobenius_semiregularity(self):
        self.assertTrue(frobenius_semiregular_on_nonidentity(7, 2))
        self.assertTrue(frobenius_semiregular_on_nonidentity(13, 2))
        self.assertFalse(frobenius_semiregular_on_nonidentity(6, 2))
        self.assertFalse(frobenius_semiregular_on_nonidentity(5, 11))


class TestLinesAndSpans(unittest.TestCase):
    def setUp(self):
        self.ctx = gf2(7, 0, 1, 7)

    def test_singer_group_order(self):
        self.assertEqual(self.ctx.v_q, 127)

    def test_line_through_one_and_g(self):
        # 1 + g = g^7
        self.assertEqual(self.ctx.line_points(0, 1), (0, 1, 7))
        with self.assertRaises(EqualPointsError):
            self.ctx.line_points(3, 130)

    def test_span_of_three_points_is_a_plane(self):
        plane = self.ctx.span([0, 1, 3])
        self.assertEqual(len(plane), 7)
        self.assertEqual(plane.dim, 2)
        self.assertTrue(self.ctx.is_subspace(plane.points))
        self.assertIn(7, plane)

    def test_catalog_plane(self):
        check = self.ctx.is_subspace(Q3STAR_LABELS)
        self.assertTrue(check.is_subspace)
        self.assertEqual(check.dim, 2)

    def test_non_subspace_reports_a_pair(self):
        check = self.ctx.is_subspace([0, 1, 2])
        self.assertFalse(check)
        self.assertIsNotNone(check.violating_pair)

    def test_translates_and_multiples_of_subspaces_are_subspaces(self):
        plane = self.ctx.span([0, 1, 3]).points
        self.assertTrue(self.ctx.is_subspace([(x + 40) % 127 for x in plane]))
        self.assertTrue(self.ctx.is_subspace([(x * 2) % 127 for x in plane]))

    def test_bulk_subspace_check(self):
        plane = list(self.ctx.span([0, 1, 3]).points)
        rows = [plane, [(x + 5) % 127 for x in plane], [0, 1, 2, 3, 4, 5, 6]]
        self.assertEqual(blocks_are_subspaces(self.ctx, rows).tolist(), [True, True, False])

    def test_point_sum(self):
        self.assertEqual(self.ctx.point_sum([0, 1]).exponent, 7)
        self.assertTrue(self.ctx.point_sum([0, 1, 7]).is_zero)

    def test_frobenius_orbits(self):
        self.assertEqual(self.ctx.frobenius_multipliers(), (1, 2, 4, 8, 16, 32, 64))
        orbits = self.ctx.frobenius_orbits()
        self.assertEqual(len(orbits), 18)
        self.assertTrue(all(len(o) == 7 for o in orbits))
        self.assertEqual(self.ctx.orbit_index()[3], 3)
        self.assertEqual(self.ctx.orbit_index()[6], 3)


class TestSpreads(unittest.TestCase):
    def test_line_spread_of_pg5_over_gf8(self):
        ctx = gf2(6, 0, 1, 3, 4, 6)
        spread = ctx.desarguesian_spread(3)
        self.assertEqual(spread.h, 9)
        self.assertEqual(len(spread.classes), 9)
        self.assertTrue(all(len(c) == 7 for c in spread.classes))
        self.assertEqual(spread.subgroup, (0, 9, 18, 27, 36, 45, 54))
        self.assertEqual(spread.class_of(10), 1)
        self.assertTrue(spread.same_class(3, 12))
        self.assertTrue(ctx.is_subspace(spread.classes[4]))

    def test_plane_spread_of_pg8(self):
        spread = gf2(9, 0, 4, 9).desarguesian_spread(3)
        self.assertEqual(spread.h, 73)
        self.assertEqual(len(spread.subgroup), 7)

    def test_dimension_must_divide(self):
        with self.assertRaises(NotDivisibleError):
            gf2(6, 0, 1, 6).desarguesian_spread(4)


class TestHyperplanes(unittest.TestCase):
    def test_default_hyperplane_is_the_classical_set(self):
        ctx = gf2(4, 0, 1, 4)
        self.assertEqual(ctx.default_hyperplane, tuple(D15))
        self.assertEqual(ctx.singer_difference_set(), tuple(D15))
        self.assertEqual(ctx.hyperplane_translate(D15), 0)
        self.assertEqual(ctx.hyperplane_translate([(x + 3) % 15 for x in D15]), 12)

    def test_hyperplane_from_generators(self):
        ctx = gf2(4, 0, 1, 4)
        self.assertEqual(len(ctx.singer_difference_set([0, 1, 3])), 7)
        with self.assertRaises(NotHyperplaneError):
            ctx.singer_difference_set([0, 1])

    def test_printed_sets_depend_on_the_modulus(self):
        self.assertEqual(gf2(5, 0, 3, 5).hyperplane_translate(D31), 0)
        self.assertEqual(gf2(5, 0, 1, 2, 3, 5).hyperplane_translate(D31_NESTING), 15)
        self.assertIsNone(gf2(5, 0, 2, 5).hyperplane_translate(D31))
        self.assertIsNone(gf2(5, 0, 2, 5).hyperplane_translate(D31_NESTING))

    def test_order_63(self):
        self.assertEqual(gf2(6, 0, 1, 6).hyperplane_translate(D63), 0)
        self.assertIsNone(gf2(6, 0, 1, 3, 4, 6).hyperplane_translate(D63))


if __name__ == "__main__":
    unittest.main()
