"""
Scalar kernels the rest of the app builds on.

The incomplete gamma routine follows the classic split: a power series for the
lower function when z < s + 1 and a modified-Lentz continued fraction for the
upper function otherwise. Both have fixed iteration caps and raise
``NumericalFailure`` instead of returning an unconverged value.
"""

from __future__ import annotations

# Standard Library
import logging
import math
import sys

# Third Party
import numpy as np
from scipy import special

from . import app_settings
from .exceptions import DomainError, NumericalFailure

logger = logging.getLogger(__name__)

_TINY = sys.float_info.min / sys.float_info.epsilon


def log_factorial(n):
    """
    ln(n!) through the log-gamma identity; accepts an int or an integer array.
    """
    values = np.asarray(n)
    if np.any(values < 0):
        raise DomainError(f"log_factorial needs n >= 0, got {n!r}")
    result = special.gammaln(values + 1.0)
    if result.ndim == 0:
        return float(result)
    return result


def stirling_bounds(n: int) -> tuple[float, float]:
    """
    Lower and upper Stirling brackets for ln(n!), valid for every n >= 1.
    """
    if n < 1:
        raise DomainError(f"stirling_bounds needs n >= 1, got {n}")
    base = 0.5 * math.log(2.0 * math.pi * n) + n * math.log(n) - n
    return base + 1.0 / (12.0 * n + 1.0), base + 1.0 / (12.0 * n)


def upper_incomplete_gamma(
    s: float,
    z: float,
    tolerance: float | None = None,
    max_iterations: int | None = None,
) -> float:
    """
    Non-regularised upper incomplete gamma Γ(s, z) for s > 0, z >= 0.
    """
    tolerance = tolerance or app_settings.GAMMA_TOLERANCE
    max_iterations = max_iterations or app_settings.GAMMA_MAX_ITERATIONS
    if s <= 0.0:
        raise DomainError(f"upper_incomplete_gamma needs s > 0, got {s}")
    if z < 0.0:
        raise DomainError(f"upper_incomplete_gamma needs z >= 0, got {z}")

    if z == 0.0:
        return float(special.gamma(s))
    if math.isinf(z):
        return 0.0

    log_prefactor = -z + s * math.log(z)
    if z < s + 1.0:
        lower = _lower_gamma_series(s, z, tolerance, max_iterations)
        return float(special.gamma(s)) - lower * math.exp(log_prefactor)
    return _upper_gamma_continued_fraction(s, z, tolerance, max_iterations) * math.exp(
        log_prefactor
    )


def log_upper_incomplete_gamma(
    s: float,
    z: float,
    tolerance: float | None = None,
    max_iterations: int | None = None,
) -> float:
    """
    ln Γ(s, z); stays finite where Γ(s, z) itself underflows.
    """
    tolerance = tolerance or app_settings.GAMMA_TOLERANCE
    max_iterations = max_iterations or app_settings.GAMMA_MAX_ITERATIONS
    if z < s + 1.0:
        return math.log(upper_incomplete_gamma(s, z, tolerance, max_iterations))
    if math.isinf(z):
        return -math.inf
    return math.log(
        _upper_gamma_continued_fraction(s, z, tolerance, max_iterations)
    ) - z + s * math.log(z)


def _lower_gamma_series(s: float, z: float, tolerance: float, max_iterations: int) -> float:
    # γ(s, z) = e^{-z} z^s Σ z^j / (s (s+1) ... (s+j)); caller applies e^{-z} z^s
    term = 1.0 / s
    total = term
    denominator = s
    for _ in range(max_iterations):
        denominator += 1.0
        term *= z / denominator
        total += term
        if abs(term) < abs(total) * tolerance:
            return total
    logger.warning("Incomplete gamma series stalled at s=%s z=%s", s, z)
    raise NumericalFailure(
        f"incomplete gamma series did not converge for s={s}, z={z} "
        f"within {max_iterations} terms"
    )


def _upper_gamma_continued_fraction(
    s: float, z: float, tolerance: float, max_iterations: int
) -> float:
    b = z + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, max_iterations + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tolerance:
            return h
    logger.warning("Incomplete gamma continued fraction stalled at s=%s z=%s", s, z)
    raise NumericalFailure(
        f"incomplete gamma continued fraction did not converge for s={s}, z={z} "
        f"within {max_iterations} iterations"
    )


def quartic_moment(k: int) -> float:
    """
    Full-line moment ∫ t^k e^{-t^4/12} dt for even k.
    """
    _require_even_power(k)
    s = (k + 1) / 4.0
    return 2.0 * 12.0**s / 4.0 * float(special.gamma(s))


def quartic_tail_integral(k: int, x: float) -> float:
    """
    ∫_x^∞ t^k e^{-t^4/12} dt for even k; x may be -inf.
    """
    _require_even_power(k)
    if x == -math.inf:
        return quartic_moment(k)
    if x < 0.0:
        return quartic_moment(k) - quartic_tail_integral(k, -x)
    s = (k + 1) / 4.0
    z = x**4 / 12.0 if x < 1e70 else math.inf
    return 12.0**s / 4.0 * upper_incomplete_gamma(s, z)


def _require_even_power(k: int) -> None:
    if k < 0 or k % 2:
        raise DomainError(f"quartic integrands need an even power k >= 0, got {k}")


def normal_cdf(x):
    """Φ(x) through the complementary error function."""
    result = 0.5 * special.erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0))
    if np.ndim(result) == 0:
        return float(result)
    return result


def shifted_exp_sum(log_values: np.ndarray) -> tuple[float, float]:
    """
    Returns (shift, total) with Σ exp(log_values) = exp(shift) * total.

    The shift is the maximum, so every exponentiated term is <= 1, and the
    terms are accumulated with exactly rounded summation.
    """
    log_values = np.asarray(log_values, dtype=float)
    if log_values.size == 0:
        return -math.inf, 0.0
    shift = float(np.max(log_values))
    if shift == -math.inf:
        return shift, 0.0
    return shift, math.fsum(np.exp(log_values - shift))


def log_sum_exp(log_values: np.ndarray) -> float:
    """Stable log Σ exp(log_values)."""
    shift, total = shifted_exp_sum(log_values)
    if total == 0.0:
        return -math.inf
    return shift + math.log(total)


def log_quartic_tail_integral(k: int, x: float) -> float:
    """ln ∫_x^∞ t^k e^{-t^4/12} dt for even k and x >= 0."""
    _require_even_power(k)
    if x < 0.0:
        return math.log(quartic_tail_integral(k, x))
    s = (k + 1) / 4.0
    z = x**4 / 12.0 if x < 1e70 else math.inf
    return s * math.log(12.0) - math.log(4.0) + log_upper_incomplete_gamma(s, z)
