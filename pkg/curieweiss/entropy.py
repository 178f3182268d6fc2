"""Binary entropy I(t) and the exponent J(t) = I(t) + (2t - 1)^2 / 2"""

from __future__ import annotations

# Standard Library
import math

# Third Party
import numpy as np
from scipy import special

from .exceptions import DomainError

MAX_DERIVATIVE_ORDER = 8


def _scalar_or_array(values):
    if np.ndim(values) == 0:
        return float(values)
    return values


def entropy_I(t):
    """I(t) = (t - 1) log(1 - t) - t log t, with I(0) = I(1) = 0."""
    t = np.asarray(t, dtype=float)
    if np.any((t < 0.0) | (t > 1.0)):
        raise DomainError("entropy_I is defined on [0, 1]")
    return _scalar_or_array(-special.xlogy(t, t) - special.xlogy(1.0 - t, 1.0 - t))


def J(t):
    t = np.asarray(t, dtype=float)
    return _scalar_or_array(entropy_I(t) + (2.0 * t - 1.0) ** 2 / 2.0)


def J_derivative(order: int, t):
    """
    Closed-form J^{(order)}(t) for order 1..8 and t in (0, 1).

    For order >= 2 the entropy part is (order - 2)! [(-1)^{order-1} t^{1-order}
    - (1 - t)^{1-order}]; the quadratic part contributes 4t - 2 and 4.
    """
    if not 1 <= order <= MAX_DERIVATIVE_ORDER:
        raise DomainError(f"J_derivative supports orders 1..{MAX_DERIVATIVE_ORDER}")
    t = np.asarray(t, dtype=float)
    if np.any((t <= 0.0) | (t >= 1.0)):
        raise DomainError("J_derivative needs t strictly inside (0, 1)")

    if order == 1:
        return _scalar_or_array(np.log((1.0 - t) / t) + 4.0 * t - 2.0)

    power = order - 1
    sign = -1.0 if power % 2 else 1.0
    value = math.factorial(order - 2) * (sign * t**-power - (1.0 - t) ** -power)
    if order == 2:
        value = value + 4.0
    return _scalar_or_array(value)
