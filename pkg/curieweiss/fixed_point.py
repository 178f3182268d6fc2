"""Roots of the mean-field equation m = tanh(β(m + h))"""

from __future__ import annotations

# Standard Library
import logging
import math
import sys
from dataclasses import dataclass

# Third Party
from scipy import optimize

from .exceptions import DomainError
from .model_params import Conditioning, Regime, classify_regime

logger = logging.getLogger(__name__)

_BISECTION_XTOL = 1e-16
_BISECTION_RTOL = 4 * sys.float_info.epsilon
_BISECTION_MAXITER = 200
_LOWER_BRACKET = 1e-300


@dataclass(slots=True, frozen=True)
class MagnetizationRoots:
    regime: Regime
    beta: float
    h: float
    m0: float | None = None
    m1: float | None = None
    m2: float | None = None

    def root_for(self, conditioning: Conditioning = Conditioning.NONE) -> float:
        """The concentration point the standardized variable is centred on."""
        if self.regime is Regime.PAIR:
            if conditioning is Conditioning.NEGATIVE_SPIN:
                return self.m1
            if conditioning is Conditioning.POSITIVE_SPIN:
                return self.m2
            raise DomainError("the pair regime needs a negative or positive spin conditioning")
        if conditioning is not Conditioning.NONE:
            raise DomainError(f"conditioning is only meaningful in the pair regime, not {self.regime.value}")
        return self.m0

    def scale_factor(self, m: float) -> float:
        """
        v_n / sqrt(n) = sqrt((1 - m^2) / (1 - (1 - m^2) β)).
        """
        one_minus = 1.0 - m * m
        denominator = 1.0 - one_minus * self.beta
        if denominator <= 0.0:
            raise DomainError(
                f"no Gaussian standardization at m={m}, beta={self.beta} (critical point)"
            )
        return math.sqrt(one_minus / denominator)

    def v(self, n: int, conditioning: Conditioning = Conditioning.NONE) -> float:
        return math.sqrt(n) * self.scale_factor(self.root_for(conditioning))

    def roots(self) -> list[float]:
        return [m for m in (self.m0, self.m1, self.m2) if m is not None]


def fixed_point_residual(m: float, beta: float, h: float) -> float:
    return math.tanh(beta * (m + h)) - m


def _bisect(beta: float, h: float, lower: float, upper: float) -> float:
    return optimize.bisect(
        fixed_point_residual,
        lower,
        upper,
        args=(beta, h),
        xtol=_BISECTION_XTOL,
        rtol=_BISECTION_RTOL,
        maxiter=_BISECTION_MAXITER,
    )


def solve_fixed_point(beta: float, h: float) -> MagnetizationRoots:
    regime = classify_regime(beta, h)

    if regime is Regime.CRITICAL:
        return MagnetizationRoots(regime=regime, beta=beta, h=h, m0=0.0)

    if regime is Regime.PAIR:
        # (β - 1) m > 0 just above zero, tanh(β) - 1 < 0 at one
        m2 = _bisect(beta, h, _LOWER_BRACKET, 1.0)
        logger.debug("Pair roots for beta=%s: +/-%s", beta, m2)
        return MagnetizationRoots(regime=regime, beta=beta, h=h, m1=-m2, m2=m2)

    if h == 0.0:
        return MagnetizationRoots(regime=regime, beta=beta, h=h, m0=0.0)

    # tanh(β(m + h)) - m is concave on the half-line of sign h, positive at 0, negative at ±1
    if h > 0.0:
        m0 = _bisect(beta, h, 0.0, 1.0)
    else:
        m0 = _bisect(beta, h, -1.0, 0.0)
    logger.debug("Unique root for beta=%s h=%s: %s", beta, h, m0)
    return MagnetizationRoots(regime=regime, beta=beta, h=h, m0=m0)
