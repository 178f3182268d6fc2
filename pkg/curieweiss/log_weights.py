"""
Exact finite-n law of the magnetization.

A configuration with k spins up has S_n = 2k - n, so the Gibbs measure pushed
forward to k is proportional to

    x_{k,n} = binom(n, k) exp(β (2k - n)^2 / (2n) + β / 2 + β h (2k - n)).

At β = 1, h = 0 this is exactly the critical-case weight. Weights are kept in
log space; probabilities are exp(log_weight - shift) / total with the shift at
the largest log weight, so no intermediate overflows even for n = 10^6.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from dataclasses import dataclass

# Third Party
import numpy as np

# Django
from django.core.cache import cache

from . import app_settings
from .exceptions import CapacityError, DomainError
from .fixed_point import MagnetizationRoots
from .model_params import Conditioning, ModelParams, Regime
from .special_functions import log_factorial, shifted_exp_sum

logger = logging.getLogger(__name__)

_ENUMERATION_CHUNK = 1 << 15


@dataclass(frozen=True)
class LogWeightTable:
    params: ModelParams
    log_weights: np.ndarray
    log_Z: float
    shift: float
    scaled_total: float
    probabilities: np.ndarray

    @property
    def n(self) -> int:
        return self.params.n

    def spin_sums(self) -> np.ndarray:
        return 2 * np.arange(self.n + 1) - self.n

    def pmf(self) -> dict[int, float]:
        return {
            int(s): float(p) for s, p in zip(self.spin_sums(), self.probabilities)
        }

    def mass(self, start: int, stop: int) -> float:
        """μ_n(start <= k < stop) by exactly rounded summation."""
        start = max(start, 0)
        stop = min(stop, self.n + 1)
        if start >= stop:
            return 0.0
        return math.fsum(self.probabilities[start:stop])

    def tail_from(self, k0: int) -> float:
        return self.mass(k0, self.n + 1)


def first_index_above(cutoff: float, n: int) -> int:
    """
    Smallest integer k with k > cutoff, clipped to 0..n+1.
    """
    if math.isnan(cutoff):
        raise DomainError("tail cutoff is NaN")
    if cutoff >= n:
        return n + 1
    if cutoff < 0:
        return 0
    return math.floor(cutoff) + 1


def build_log_weight_table(params: ModelParams) -> LogWeightTable:
    n, beta, h = params.n, params.beta, params.h
    if n > app_settings.MAX_TABLE_SIZE:
        raise CapacityError(
            f"n={n} exceeds CURIEWEISS_MAX_TABLE_SIZE={app_settings.MAX_TABLE_SIZE}"
        )

    try:
        k = np.arange(n + 1, dtype=float)
        spin_sum = 2.0 * k - n
        log_weights = (
            log_factorial(n)
            - log_factorial(k)
            - log_factorial(n - k)
            + beta * spin_sum**2 / (2.0 * n)
            + beta / 2.0
            + beta * h * spin_sum
        )
    except MemoryError as exc:
        raise CapacityError(f"cannot allocate a weight table for n={n}") from exc

    shift, scaled_total = shifted_exp_sum(log_weights)
    probabilities = np.exp(log_weights - shift) / scaled_total
    log_weights.setflags(write=False)
    probabilities.setflags(write=False)

    logger.debug("Built log-weight table for %s", params)
    return LogWeightTable(
        params=params,
        log_weights=log_weights,
        log_Z=shift + math.log(scaled_total),
        shift=shift,
        scaled_total=scaled_total,
        probabilities=probabilities,
    )


def get_log_weight_table(params: ModelParams) -> LogWeightTable:
    """Cached variant of ``build_log_weight_table``."""
    key = f"curieweiss_log_weights:{params.cache_key()}"
    table = cache.get(key)
    if table is None:
        table = build_log_weight_table(params)
        cache.set(key, table, app_settings.TABLE_CACHE_TTL)
    return table


def exact_tail_critical(table: LogWeightTable, x: float) -> float:
    """
    μ_n(W_n > x) with W_n = S_n / n^{3/4}, i.e. the mass of k > (n + n^{3/4} x) / 2.
    """
    if not table.params.is_critical:
        raise DomainError(f"exact_tail_critical needs beta=1, h=0, got {table.params}")
    n = table.n
    return table.tail_from(first_index_above((n + n**0.75 * x) / 2.0, n))


def exact_cdf_critical(table: LogWeightTable, x: float) -> float:
    """F_n(x) = μ_n(W_n <= x)."""
    if not table.params.is_critical:
        raise DomainError(f"exact_cdf_critical needs beta=1, h=0, got {table.params}")
    n = table.n
    return table.mass(0, first_index_above((n + n**0.75 * x) / 2.0, n))


def _conditioning_range(n: int, conditioning: Conditioning) -> tuple[int, int]:
    if conditioning is Conditioning.NEGATIVE_SPIN:
        return 0, (n - 1) // 2 + 1  # 2k - n < 0
    if conditioning is Conditioning.POSITIVE_SPIN:
        return n // 2 + 1, n + 1  # 2k - n > 0
    return 0, n + 1


def exact_tail_standardized(
    table: LogWeightTable,
    roots: MagnetizationRoots,
    x: float,
    conditioning: Conditioning = Conditioning.NONE,
) -> float:
    """
    μ_n((S_n - n m) / v_n > x | conditioning) for the root m the conditioning selects.
    """
    regime = table.params.regime
    if regime is Regime.CRITICAL:
        raise DomainError("the critical law has no Gaussian standardization")
    if roots.regime is not regime:
        raise DomainError(f"roots are for the {roots.regime.value} regime, table is {regime.value}")

    n = table.n
    m = roots.root_for(conditioning)
    v = roots.v(n, conditioning)
    start, stop = _conditioning_range(n, conditioning)
    event_mass = table.mass(start, stop)
    if event_mass <= 0.0:
        raise DomainError(f"conditioning event {conditioning.value} has zero mass")

    k0 = first_index_above((n + n * m + v * x) / 2.0, n)
    return table.mass(max(k0, start), stop) / event_mass


def brute_force_pmf(params: ModelParams) -> dict[int, float]:
    """
    Law of S_n by summing the Boltzmann weight of every one of the 2^n configurations.
    """
    n, beta, h = params.n, params.beta, params.h
    if n > app_settings.BRUTE_FORCE_MAX_N:
        raise CapacityError(
            f"brute force enumeration is limited to n <= {app_settings.BRUTE_FORCE_MAX_N}, got {n}"
        )

    # every exponent is at most β (n - 1) / 2 + β |h| n
    ceiling = beta * (n - 1) / 2.0 + beta * abs(h) * n
    bit_positions = np.arange(n, dtype=np.int64)
    accumulated = np.zeros(n + 1)
    total = 1 << n
    for start in range(0, total, _ENUMERATION_CHUNK):
        codes = np.arange(start, min(start + _ENUMERATION_CHUNK, total), dtype=np.int64)
        spins = 2.0 * ((codes[:, None] >> bit_positions) & 1) - 1.0
        preceding = np.cumsum(spins, axis=1) - spins
        pair_sum = np.sum(spins * preceding, axis=1)  # Σ_{i<j} σ_i σ_j
        spin_sum = spins.sum(axis=1)
        energy = beta / n * pair_sum + beta * h * spin_sum
        ups = ((spin_sum + n) / 2).astype(np.int64)
        accumulated += np.bincount(ups, weights=np.exp(energy - ceiling), minlength=n + 1)

    probabilities = accumulated / math.fsum(accumulated)
    return {2 * k - n: float(p) for k, p in enumerate(probabilities)}
