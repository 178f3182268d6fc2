# Standard Library
import math

# Third Party
from hypothesis import given, settings
from hypothesis import strategies as st

# Django
from django.test import SimpleTestCase

# Curie-Weiss App
from curieweiss.entropy import J, J_derivative, entropy_I
from curieweiss.exceptions import DomainError

interior = st.floats(min_value=0.01, max_value=0.99)


class TestEntropy(SimpleTestCase):
    def test_endpoints_and_centre(self):
        self.assertEqual(entropy_I(0.0), 0.0)
        self.assertEqual(entropy_I(1.0), 0.0)
        self.assertAlmostEqual(entropy_I(0.5), math.log(2.0), places=15)
        self.assertAlmostEqual(J(0.5), math.log(2.0), places=15)
        self.assertAlmostEqual(J(0.0), 0.5, places=15)

    def test_outside_unit_interval(self):
        with self.assertRaises(DomainError):
            entropy_I(1.5)

    @settings(max_examples=100, deadline=None)
    @given(interior)
    def test_symmetry(self, t):
        self.assertAlmostEqual(J(t), J(1.0 - t), delta=1e-14)
        for order in range(1, 9):
            left = J_derivative(order, t)
            right = (-1) ** order * J_derivative(order, 1.0 - t)
            self.assertAlmostEqual(left, right, delta=1e-10 * max(1.0, abs(left)))


class TestJDerivatives(SimpleTestCase):
    def test_exact_values_at_half(self):
        self.assertEqual(J_derivative(4, 0.5), -32.0)
        self.assertEqual(J_derivative(6, 0.5), -1536.0)
        self.assertEqual(J_derivative(8, 0.5), -184320.0)

    def test_vanishing_derivatives(self):
        for order in (1, 2, 3, 5, 7):
            with self.subTest(order=order):
                self.assertLessEqual(abs(J_derivative(order, 0.5)), 1e-12)

    def test_second_derivative_against_finite_difference(self):
        t, h = 0.3, 1e-4
        estimate = (
            -J_derivative(1, t + 2 * h)
            + 8 * J_derivative(1, t + h)
            - 8 * J_derivative(1, t - h)
            + J_derivative(1, t - 2 * h)
        ) / (12 * h)
        exact = J_derivative(2, t)
        self.assertAlmostEqual(exact, -1 / 0.3 - 1 / 0.7 + 4, places=12)
        self.assertAlmostEqual(estimate, exact, delta=1e-6)

    @settings(max_examples=100, deadline=None)
    @given(interior)
    def test_second_derivative_is_negative(self, t):
        if t != 0.5:
            self.assertLess(J_derivative(2, t), 0.0)

    def test_order_and_point_are_validated(self):
        with self.assertRaises(DomainError):
            J_derivative(0, 0.5)
        with self.assertRaises(DomainError):
            J_derivative(9, 0.5)
        with self.assertRaises(DomainError):
            J_derivative(2, 0.0)
        with self.assertRaises(DomainError):
            J_derivative(2, 1.0)
