# Standard Library
import math

# Third Party
from hypothesis import given, settings
from hypothesis import strategies as st

# Django
from django.test import SimpleTestCase

# Curie-Weiss App
from curieweiss.exceptions import DomainError
from curieweiss.fixed_point import fixed_point_residual, solve_fixed_point
from curieweiss.model_params import Conditioning, ModelParams, Regime, classify_regime


class TestModelParams(SimpleTestCase):
    def test_regimes(self):
        self.assertIs(classify_regime(1.0, 0.0), Regime.CRITICAL)
        self.assertIs(classify_regime(2.0, 0.0), Regime.PAIR)
        self.assertIs(classify_regime(0.5, 0.0), Regime.UNIQUE)
        self.assertIs(classify_regime(2.0, 0.1), Regime.UNIQUE)
        self.assertTrue(ModelParams(10).is_critical)

    def test_validation(self):
        with self.assertRaises(DomainError):
            ModelParams(0)
        with self.assertRaises(DomainError):
            ModelParams(10, beta=0.0)
        with self.assertRaises(DomainError):
            ModelParams(2.5)

    def test_cache_key_distinguishes_parameters(self):
        self.assertNotEqual(ModelParams(10, 1.0, 0.0).cache_key(), ModelParams(10, 1.0, 0.1).cache_key())


class TestSolveFixedPoint(SimpleTestCase):
    def test_pair_roots(self):
        roots = solve_fixed_point(2.0, 0.0)
        self.assertIs(roots.regime, Regime.PAIR)
        self.assertAlmostEqual(roots.m2, 0.9575040, delta=1e-6)
        self.assertEqual(roots.m1, -roots.m2)
        self.assertEqual(len(roots.roots()), 2)

    def test_critical_and_symmetric_unique(self):
        self.assertEqual(solve_fixed_point(1.0, 0.0).m0, 0.0)
        self.assertEqual(solve_fixed_point(0.5, 0.0).m0, 0.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=-1.0, max_value=1.0))
    def test_roots_solve_the_equation(self, beta, h):
        for m in solve_fixed_point(beta, h).roots():
            self.assertLessEqual(abs(fixed_point_residual(m, beta, h)), 1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(min_value=0.1, max_value=5.0), st.floats(min_value=0.01, max_value=1.0))
    def test_field_sign_is_followed(self, beta, h):
        self.assertGreater(solve_fixed_point(beta, h).m0, 0.0)
        self.assertLess(solve_fixed_point(beta, -h).m0, 0.0)

    def test_conditioning_rules(self):
        pair = solve_fixed_point(2.0, 0.0)
        with self.assertRaises(DomainError):
            pair.root_for(Conditioning.NONE)
        self.assertEqual(pair.root_for(Conditioning.NEGATIVE_SPIN), pair.m1)
        unique = solve_fixed_point(0.5, 0.0)
        with self.assertRaises(DomainError):
            unique.root_for(Conditioning.POSITIVE_SPIN)

    def test_scale_factor(self):
        unique = solve_fixed_point(0.5, 0.0)
        self.assertAlmostEqual(unique.scale_factor(0.0), math.sqrt(2.0), places=15)
        self.assertAlmostEqual(unique.v(100), 10.0 * math.sqrt(2.0), places=12)
        with self.assertRaises(DomainError):
            solve_fixed_point(1.0, 0.0).scale_factor(0.0)
