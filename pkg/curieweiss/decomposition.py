"""Split of the critical tail into the far sums A_n, Â_n and the central sums B_n, B_{n,x}"""

from __future__ import annotations

# Standard Library
import math
from dataclasses import dataclass

# Third Party
import numpy as np

from .exceptions import DomainError
from .log_weights import LogWeightTable, first_index_above


@dataclass(frozen=True)
class DecompositionSums:
    A: float
    A_hat: float
    B: float
    B_x: float

    @property
    def tail(self) -> float:
        """(Â_n + B_{n,x}) / (A_n + B_n), which equals μ_n(W_n > x)."""
        return (self.A_hat + self.B_x) / (self.A + self.B)


def log_y_normalizer(n: int) -> float:
    """ln y_n with y_n = sqrt(2 / (π n)) e^{n J(1/2) + 1/2} and J(1/2) = ln 2."""
    return 0.5 * math.log(2.0 / (math.pi * n)) + n * math.log(2.0) + 0.5


def log_normalized_weights(table: LogWeightTable) -> np.ndarray:
    """ln y_{k,n} = ln x_{k,n} - ln y_n."""
    _require_critical(table)
    return table.log_weights - log_y_normalizer(table.n)


def decomposition(table: LogWeightTable, x: float) -> DecompositionSums:
    _require_critical(table)
    n = table.n
    k = np.arange(n + 1)
    offset = 4 * k - 2 * n  # 4 (k - n/2), integer so the n/4 boundaries are exact
    y = np.exp(log_normalized_weights(table))

    far = np.abs(offset) >= n
    far_upper = offset >= n
    above_cutoff = k >= first_index_above((n + n**0.75 * x) / 2.0, n)

    return DecompositionSums(
        A=math.fsum(y[far]),
        A_hat=math.fsum(y[far_upper]),
        B=math.fsum(y[~far]),
        B_x=math.fsum(y[(offset < n) & above_cutoff]),
    )


def _require_critical(table: LogWeightTable) -> None:
    if not table.params.is_critical:
        raise DomainError(f"the decomposition is defined at beta=1, h=0, got {table.params}")
