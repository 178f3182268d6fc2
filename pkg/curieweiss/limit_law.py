"""
Critical-case limit objects.

p1(t) = e^{-t^4/12}, p2(t) = (t^2/2 - t^6/30) e^{-t^4/12} and the remainder
family r(t, n) = (1 + t^4 + t^8 + t^12 + t^14/sqrt(n)) e^{-t^4/12}. Every tail
integral is a combination of monomial tails ∫_x^∞ t^k e^{-t^4/12} dt, which
``quartic_tail_integral`` evaluates through the incomplete gamma function.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

# Third Party
import numpy as np

from . import app_settings
from .exceptions import RangeError
from .special_functions import (
    log_quartic_tail_integral,
    quartic_moment,
    quartic_tail_integral,
)

logger = logging.getLogger(__name__)

# (power, coefficient) pairs of each density's polynomial factor
P1_TERMS = ((0, 1.0),)
P2_TERMS = ((2, 0.5), (6, -1.0 / 30.0))
R_TERMS = ((0, 1.0), (4, 1.0), (8, 1.0), (12, 1.0))
R_SCALED_POWER = 14  # carries the 1/sqrt(n) factor
MONOMIAL_POWERS = (0, 2, 4, 6, 8, 12, 14)


def _quartic_weight(t):
    return np.exp(-np.asarray(t, dtype=float) ** 4 / 12.0)


def _as_float(values):
    if np.ndim(values) == 0:
        return float(values)
    return values


# Each density and derivative is a polynomial factor times e^{-t^4/12}; the
# factors keep their sign where the exponential underflows.


def p2_polynomial(t):
    t = np.asarray(t, dtype=float)
    return t**2 / 2.0 - t**6 / 30.0


def r_polynomial(t, n: int):
    t = np.asarray(t, dtype=float)
    return 1.0 + t**4 + t**8 + t**12 + t**14 / math.sqrt(n)


def p1_prime_polynomial(t):
    t = np.asarray(t, dtype=float)
    return -(t**3) / 3.0


def p2_prime_polynomial(t):
    t = np.asarray(t, dtype=float)
    return t - 11.0 * t**5 / 30.0 + t**9 / 90.0


def r_prime_polynomial(t, n: int):
    t = np.asarray(t, dtype=float)
    derivative = 4.0 * t**3 + 8.0 * t**7 + 12.0 * t**11 + 14.0 * t**13 / math.sqrt(n)
    return derivative - r_polynomial(t, n) * t**3 / 3.0


def limit_density_p1(t):
    return _as_float(_quartic_weight(t))


def limit_density_p2(t):
    return _as_float(p2_polynomial(t) * _quartic_weight(t))


def remainder_r(t, n: int):
    return _as_float(r_polynomial(t, n) * _quartic_weight(t))


def limit_density_p1_prime(t):
    return _as_float(p1_prime_polynomial(t) * _quartic_weight(t))


def limit_density_p2_prime(t):
    return _as_float(p2_prime_polynomial(t) * _quartic_weight(t))


def remainder_r_prime(t, n: int):
    return _as_float(r_prime_polynomial(t, n) * _quartic_weight(t))


@dataclass(frozen=True)
class TailFunctionals:
    P1_hat: float
    P2_hat: float
    R_hat: float | None = None


@dataclass(frozen=True)
class LimitLaw:
    """
    Normalisers of the limit law plus its evaluators.

    c1 = ∫ p1 over the line (the normaliser of F), c2 = ∫ p2 over the line.
    """

    c1: float
    c2: float
    moments: dict[int, float] = field(default_factory=dict)
    saturation: float = 40.0

    def monomial_tail(self, k: int, x: float) -> float:
        if x <= -self.saturation:
            return self.moments[k]
        if x >= self.saturation:
            return 0.0
        return quartic_tail_integral(k, x)

    def _combination(self, terms, x: float) -> float:
        return math.fsum(coefficient * self.monomial_tail(k, x) for k, coefficient in terms)

    def P1_hat(self, x: float) -> float:
        return self._combination(P1_TERMS, x)

    def P2_hat(self, x: float) -> float:
        return self._combination(P2_TERMS, x)

    def R_hat(self, x: float, n: int) -> float:
        return self._combination(R_TERMS, x) + self.monomial_tail(
            R_SCALED_POWER, x
        ) / math.sqrt(n)

    def tail_functionals(self, x: float, n: int | None = None) -> TailFunctionals:
        return TailFunctionals(
            P1_hat=self.P1_hat(x),
            P2_hat=self.P2_hat(x),
            R_hat=self.R_hat(x, n) if n is not None else None,
        )

    def F(self, x: float) -> float:
        """F(x) = ∫_{-∞}^x p1 / c1."""
        if x <= -self.saturation:
            return 0.0
        if x >= self.saturation:
            return 1.0
        if x < 0.0:
            return self.P1_hat(-x) / self.c1
        return 1.0 - self.P1_hat(x) / self.c1

    def survival(self, x: float) -> float:
        """1 - F(x) without cancellation for large x."""
        if x <= -self.saturation:
            return 1.0
        if x >= self.saturation:
            return 0.0
        return self.P1_hat(x) / self.c1

    def tail_ratio(self, terms, x: float) -> float:
        """
        Σ coefficient ∫_x^∞ t^k p1 / ∫_x^∞ p1, computed from log tails for x > 0.
        """
        if x <= 0.0:
            return self._combination(terms, x) / self.P1_hat(x)
        log_base = log_quartic_tail_integral(0, x)
        return math.fsum(
            coefficient * math.exp(log_quartic_tail_integral(k, x) - log_base)
            for k, coefficient in terms
        )

    def G(self, x: float) -> float:
        """G(x) = P2_hat(x) / P1_hat(x) - c2 / c1."""
        return self.tail_ratio(P2_TERMS, x) - self.c2 / self.c1

    def corrected_tail(self, n: int, x: float) -> float:
        """(1 - F(x)) (1 + G(x) / sqrt(n))."""
        return self.survival(x) * (1.0 + self.G(x) / math.sqrt(n))

    def second_order_limit(self, x: float) -> float:
        """lim sqrt(n) (F_n(x) - F(x)) = (F(x) - 1) G(x)."""
        survival = self.survival(x)
        if survival == 0.0:
            return 0.0
        return -survival * self.G(x)


def error_envelope(n: int, x: float, allow_out_of_range: bool = False) -> float:
    """
    (x^12 + n^{1/3}) / n, the unit-constant envelope for 0 <= x <= n^{1/12}.
    """
    if not allow_out_of_range and not 0.0 <= x <= theorem_range_edge(n):
        raise RangeError(f"x={x} is outside [0, n^(1/12)] for n={n}")
    return (x**12 + n ** (1.0 / 3.0)) / n


def theorem_range_edge(n: int) -> float:
    # tiny slack so that x = n**(1/12) computed by callers is accepted
    return n ** (1.0 / 12.0) * (1.0 + 1e-12)


@lru_cache(maxsize=None)
def _build_limit_law(saturation: float) -> LimitLaw:
    moments = {k: quartic_moment(k) for k in MONOMIAL_POWERS}
    c1 = moments[0]
    c2 = 0.5 * moments[2] - moments[6] / 30.0
    logger.debug("Limit law normalisers c1=%r c2=%r", c1, c2)
    return LimitLaw(c1=c1, c2=c2, moments=moments, saturation=saturation)


def get_limit_law() -> LimitLaw:
    return _build_limit_law(float(app_settings.SATURATION_PROXY))


def limit_cdf_F(x: float) -> float:
    return get_limit_law().F(x)


def correction_G(x: float) -> float:
    return get_limit_law().G(x)


def tail_functionals(x: float, n: int | None = None) -> TailFunctionals:
    return get_limit_law().tail_functionals(x, n)


def corrected_tail(n: int, x: float) -> float:
    return get_limit_law().corrected_tail(n, x)


def second_order_limit(x: float) -> float:
    return get_limit_law().second_order_limit(x)
