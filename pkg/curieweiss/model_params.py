"""Parameters identifying one finite Curie-Weiss system"""

from __future__ import annotations

# Standard Library
from dataclasses import dataclass
from enum import Enum

from .exceptions import DomainError


class Regime(str, Enum):
    UNIQUE = "unique"
    PAIR = "pair"
    CRITICAL = "critical"


class Conditioning(str, Enum):
    NONE = "none"
    NEGATIVE_SPIN = "negative"
    POSITIVE_SPIN = "positive"


def classify_regime(beta: float, h: float) -> Regime:
    """
    Regime of the fixed-point equation m = tanh(β(m + h)).
    """
    if beta <= 0.0:
        raise DomainError(f"beta must be positive, got {beta}")
    if h != 0.0 or beta < 1.0:
        return Regime.UNIQUE
    if beta == 1.0:
        return Regime.CRITICAL
    return Regime.PAIR


@dataclass(frozen=True)
class ModelParams:
    """
    (n, β, h) for the Gibbs measure on n spins with pair coupling β/n and field h.
    """

    n: int
    beta: float = 1.0
    h: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if not self.beta > 0.0:
            raise DomainError(f"beta must be positive, got {self.beta!r}")

    @property
    def regime(self) -> Regime:
        return classify_regime(self.beta, self.h)

    @property
    def is_critical(self) -> bool:
        return self.regime is Regime.CRITICAL

    def cache_key(self) -> str:
        return f"{self.n}:{self.beta!r}:{self.h!r}"
