# Standard Library
import math

# Django
from django.test import SimpleTestCase

# Curie-Weiss App
from curieweiss.decomposition import decomposition, log_normalized_weights
from curieweiss.exceptions import DomainError
from curieweiss.log_weights import exact_tail_critical, get_log_weight_table
from curieweiss.model_params import ModelParams


class TestDecomposition(SimpleTestCase):
    def test_identity(self):
        for n, xs in ((100, (0.0, 0.5, 1.0)), (10**4, (0.0, 0.5, 1.0, 1.9))):
            table = get_log_weight_table(ModelParams(n))
            for x in xs:
                with self.subTest(n=n, x=x):
                    direct = exact_tail_critical(table, x)
                    self.assertAlmostEqual(decomposition(table, x).tail / direct, 1.0, delta=1e-12)

    def test_far_sums(self):
        sums = decomposition(get_log_weight_table(ModelParams(2000)), 0.0)
        self.assertGreater(sums.A_hat, 0.0)
        self.assertLessEqual(sums.A_hat, sums.A)
        self.assertLessEqual(sums.A, math.exp(-0.004 * 2000))
        self.assertGreater(sums.B, sums.B_x)

    def test_normalised_centre_weight(self):
        for n in (100, 10**4):
            y = log_normalized_weights(get_log_weight_table(ModelParams(n)))
            self.assertLess(abs(math.exp(y[n // 2]) - 1.0), 1.0 / n)

    def test_needs_critical_table(self):
        with self.assertRaises(DomainError):
            decomposition(get_log_weight_table(ModelParams(100, 0.5)), 0.0)
