# Standard Library
import math
from unittest import mock

# Third Party
import numpy as np

# Django
from django.core.cache import cache
from django.test import SimpleTestCase

# Curie-Weiss App
from curieweiss import app_settings
from curieweiss.exceptions import CapacityError, DomainError
from curieweiss.fixed_point import solve_fixed_point
from curieweiss.log_weights import (
    brute_force_pmf,
    build_log_weight_table,
    exact_cdf_critical,
    exact_tail_critical,
    exact_tail_standardized,
    first_index_above,
    get_log_weight_table,
)
from curieweiss.model_params import Conditioning, ModelParams
from curieweiss.special_functions import normal_cdf


class TestLogWeightTable(SimpleTestCase):
    def setUp(self):
        cache.clear()

    def test_two_spins(self):
        table = build_log_weight_table(ModelParams(2))
        pmf = table.pmf()
        self.assertAlmostEqual(pmf[2], math.e / (2 * math.e + 2), delta=1e-15)
        self.assertAlmostEqual(pmf[2], 0.3655293, delta=1e-7)
        self.assertAlmostEqual(table.log_Z, math.log(2 * math.exp(1.5) + 2 * math.exp(0.5)), places=14)

    def test_probabilities_sum_to_one(self):
        for params in (ModelParams(1000), ModelParams(10**5, 0.5, 0.1), ModelParams(1000, 2.0)):
            with self.subTest(params=params):
                table = build_log_weight_table(params)
                self.assertAlmostEqual(math.fsum(table.probabilities), 1.0, delta=1e-12)
                self.assertTrue(np.all(np.isfinite(table.log_weights)))

    def test_symmetric_without_field(self):
        probabilities = build_log_weight_table(ModelParams(501, 2.0)).probabilities
        np.testing.assert_allclose(probabilities, probabilities[::-1], rtol=1e-12, atol=0)

    def test_million_spins_do_not_overflow(self):
        table = build_log_weight_table(ModelParams(10**6))
        self.assertTrue(math.isfinite(table.log_Z))
        self.assertAlmostEqual(table.tail_from(0), 1.0, delta=1e-12)

    def test_table_is_cached(self):
        params = ModelParams(300)
        first = get_log_weight_table(params)
        second = get_log_weight_table(params)
        np.testing.assert_array_equal(first.log_weights, second.log_weights)
        self.assertIsNotNone(cache.get(f"curieweiss_log_weights:{params.cache_key()}"))

    def test_capacity(self):
        with mock.patch.object(app_settings, "MAX_TABLE_SIZE", 10):
            with self.assertRaises(CapacityError):
                build_log_weight_table(ModelParams(11))

    def test_mass_clips(self):
        table = build_log_weight_table(ModelParams(10))
        self.assertEqual(table.mass(5, 5), 0.0)
        self.assertAlmostEqual(table.mass(-3, 100), 1.0, delta=1e-15)


class TestBruteForce(SimpleTestCase):
    def test_agrees_with_table(self):
        for n, beta, h in ((2, 1.0, 0.0), (7, 0.5, 0.2), (12, 2.0, 0.0), (12, 1.0, -0.3)):
            params = ModelParams(n, beta, h)
            with self.subTest(params=params):
                exact = build_log_weight_table(params).pmf()
                enumerated = brute_force_pmf(params)
                for s, p in exact.items():
                    self.assertAlmostEqual(enumerated[s], p, delta=1e-12 * max(p, 1e-300) + 1e-15)

    def test_limit(self):
        with self.assertRaises(CapacityError):
            brute_force_pmf(ModelParams(app_settings.BRUTE_FORCE_MAX_N + 1))


class TestTails(SimpleTestCase):
    def test_first_index_above_is_strict(self):
        self.assertEqual(first_index_above(3.0, 4), 4)
        self.assertEqual(first_index_above(2.999, 4), 3)
        self.assertEqual(first_index_above(-0.5, 4), 0)
        self.assertEqual(first_index_above(4.0, 4), 5)
        with self.assertRaises(DomainError):
            first_index_above(math.nan, 4)

    def test_critical_tail_at_zero(self):
        odd = get_log_weight_table(ModelParams(1001))
        self.assertAlmostEqual(exact_tail_critical(odd, 0.0), 0.5, delta=1e-12)
        even = get_log_weight_table(ModelParams(1000))
        atom = even.pmf()[0]
        self.assertAlmostEqual(exact_tail_critical(even, 0.0), (1.0 - atom) / 2.0, delta=1e-12)

    def test_tail_and_cdf_complement(self):
        table = get_log_weight_table(ModelParams(10**4))
        for x in (-2.0, 0.0, 0.7, 2.15):
            self.assertAlmostEqual(exact_tail_critical(table, x) + exact_cdf_critical(table, x), 1.0, delta=1e-12)

    def test_critical_tail_needs_critical_table(self):
        with self.assertRaises(DomainError):
            exact_tail_critical(get_log_weight_table(ModelParams(100, 0.5)), 0.0)

    def test_standardized_tail(self):
        params = ModelParams(10**4, 0.5)
        tail = exact_tail_standardized(get_log_weight_table(params), solve_fixed_point(0.5, 0.0), 0.0)
        self.assertAlmostEqual(tail, normal_cdf(0.0), delta=0.01)

        pair = ModelParams(10**4, 2.0)
        table = get_log_weight_table(pair)
        roots = solve_fixed_point(2.0, 0.0)
        positive = exact_tail_standardized(table, roots, 0.0, Conditioning.POSITIVE_SPIN)
        self.assertAlmostEqual(positive, 0.5, delta=0.02)
        with self.assertRaises(DomainError):
            exact_tail_standardized(table, roots, 0.0)

    def test_standardized_tail_rejects_critical(self):
        with self.assertRaises(DomainError):
            exact_tail_standardized(
                get_log_weight_table(ModelParams(100)), solve_fixed_point(1.0, 0.0), 0.0
            )
