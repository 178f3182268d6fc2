# Standard Library
import math

# Third Party
import numpy as np
import mpmath
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

# Django
from django.test import SimpleTestCase

# Curie-Weiss App
from curieweiss.exceptions import DomainError, NumericalFailure
from curieweiss.special_functions import (
    log_factorial,
    log_quartic_tail_integral,
    log_sum_exp,
    normal_cdf,
    quartic_moment,
    quartic_tail_integral,
    shifted_exp_sum,
    stirling_bounds,
    upper_incomplete_gamma,
)

GAMMA_ORDERS = (0.25, 0.75, 1.25, 1.75, 3.25, 3.75)


def quad_tail(k, x):
    value, _ = integrate.quad(
        lambda t: t**k * math.exp(-(t**4) / 12.0), x, math.inf, epsabs=0.0, epsrel=1e-13, limit=200
    )
    return value


class TestLogFactorial(SimpleTestCase):
    def test_small_values(self):
        self.assertEqual(log_factorial(0), 0.0)
        self.assertEqual(log_factorial(1), 0.0)
        self.assertAlmostEqual(log_factorial(10), math.log(3628800), places=12)

    def test_accepts_arrays(self):
        result = log_factorial(np.arange(5))
        self.assertIsInstance(result, np.ndarray)
        np.testing.assert_allclose(result, np.log([1, 1, 2, 6, 24]), rtol=1e-14, atol=1e-15)

    def test_negative_is_rejected(self):
        with self.assertRaises(DomainError):
            log_factorial(-1)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=1, max_value=100))
    def test_stirling_brackets(self, n):
        lower, upper = stirling_bounds(n)
        value = log_factorial(n)
        self.assertLess(lower, upper)
        self.assertLessEqual(lower, value + 1e-12)
        self.assertLessEqual(value, upper + 1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=1, max_value=10**6))
    def test_stirling_brackets_in_extended_precision(self, n):
        with mpmath.workdps(40):
            exact = mpmath.loggamma(n + 1)
            base = mpmath.log(2 * mpmath.pi * n) / 2 + n * mpmath.log(n) - n
            lower = base + mpmath.mpf(1) / (12 * n + 1)
            upper = base + mpmath.mpf(1) / (12 * n)
            self.assertTrue(lower <= exact <= upper)
        float_lower, float_upper = stirling_bounds(n)
        scale = max(1.0, float(exact))
        self.assertLessEqual(abs(float_lower - float(lower)) / scale, 1e-14)
        self.assertLessEqual(abs(float_upper - float(upper)) / scale, 1e-14)

    def test_stirling_needs_positive_n(self):
        with self.assertRaises(DomainError):
            stirling_bounds(0)


class TestIncompleteGamma(SimpleTestCase):
    def test_exponential_case(self):
        for z in (0.5, 2.0, 10.0, 40.0):
            self.assertAlmostEqual(upper_incomplete_gamma(1.0, z) / math.exp(-z), 1.0, delta=1e-13)

    def test_zero_and_infinity(self):
        self.assertAlmostEqual(upper_incomplete_gamma(2.5, 0.0), special.gamma(2.5), delta=1e-14)
        self.assertEqual(upper_incomplete_gamma(2.5, math.inf), 0.0)

    @settings(max_examples=200, deadline=None)
    @given(
        st.floats(min_value=0.1, max_value=10.0),
        st.floats(min_value=0.0, max_value=50.0),
    )
    def test_against_scipy(self, s, z):
        expected = special.gammaincc(s, z) * special.gamma(s)
        self.assertAlmostEqual(upper_incomplete_gamma(s, z) / expected, 1.0, delta=1e-11)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(GAMMA_ORDERS), st.floats(min_value=0.0, max_value=50.0))
    def test_recurrence(self, s, z):
        expected = s * upper_incomplete_gamma(s, z) + z**s * math.exp(-z)
        self.assertAlmostEqual(upper_incomplete_gamma(s + 1.0, z) / expected, 1.0, delta=1e-12)

    def test_decreasing_in_z(self):
        zs = np.linspace(0.0, 50.0, 501)
        for s in GAMMA_ORDERS:
            with self.subTest(s=s):
                values = np.array([upper_incomplete_gamma(s, z) for z in zs])
                self.assertTrue(np.all(np.diff(values) < 0.0))
                self.assertAlmostEqual(values[0] / special.gamma(s), 1.0, delta=1e-13)

    def test_domain(self):
        with self.assertRaises(DomainError):
            upper_incomplete_gamma(0.0, 1.0)
        with self.assertRaises(DomainError):
            upper_incomplete_gamma(1.0, -1.0)

    def test_iteration_cap(self):
        with self.assertRaises(NumericalFailure):
            upper_incomplete_gamma(5.0, 3.0, max_iterations=2)
        with self.assertRaises(NumericalFailure):
            upper_incomplete_gamma(1.5, 30.0, max_iterations=1)


class TestQuarticTails(SimpleTestCase):
    def test_normaliser(self):
        c1 = quartic_moment(0)
        self.assertAlmostEqual(c1, 3.374055, delta=1e-6)
        self.assertAlmostEqual(c1, 2.0 * 12.0**0.25 * special.gamma(1.25), delta=1e-12 * c1)

    def test_against_quadrature(self):
        for k in (0, 2, 4, 6, 8, 12, 14):
            for x in (-2.0, 0.0, 1.0, 3.0):
                with self.subTest(k=k, x=x):
                    reference = quad_tail(k, x)
                    self.assertAlmostEqual(quartic_tail_integral(k, x) / reference, 1.0, delta=1e-10)

    def test_minus_infinity_is_the_full_moment(self):
        for k in (0, 2, 6):
            self.assertEqual(quartic_tail_integral(k, -math.inf), quartic_moment(k))

    def test_half_moment_at_zero(self):
        self.assertAlmostEqual(quartic_tail_integral(4, 0.0), quartic_moment(4) / 2.0, delta=1e-13)

    def test_odd_power_is_rejected(self):
        with self.assertRaises(DomainError):
            quartic_tail_integral(3, 1.0)

    def test_log_tail_survives_underflow(self):
        self.assertEqual(quartic_tail_integral(0, 20.0), 0.0)
        log_tail = log_quartic_tail_integral(0, 20.0)
        self.assertTrue(math.isfinite(log_tail))
        self.assertLess(log_tail, -13000.0)
        self.assertAlmostEqual(log_quartic_tail_integral(6, 2.0), math.log(quartic_tail_integral(6, 2.0)), places=12)


class TestNormalAndSums(SimpleTestCase):
    def test_normal_cdf(self):
        self.assertAlmostEqual(normal_cdf(1.0), 0.8413447460685429, delta=1e-12)
        self.assertEqual(normal_cdf(0.0), 0.5)
        values = normal_cdf(np.array([-1.0, 1.0]))
        self.assertAlmostEqual(values[0] + values[1], 1.0, delta=1e-15)

    def test_log_sum_exp_large_arguments(self):
        self.assertAlmostEqual(log_sum_exp(np.array([1000.0, 1000.0])), 1000.0 + math.log(2.0), places=12)
        self.assertEqual(log_sum_exp(np.array([])), -math.inf)

    def test_shifted_sum(self):
        shift, total = shifted_exp_sum(np.array([0.0, math.log(3.0)]))
        self.assertAlmostEqual(shift, math.log(3.0))
        self.assertAlmostEqual(total, 4.0 / 3.0, places=15)
