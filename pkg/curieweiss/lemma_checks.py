"""
Checks of the auxiliary estimates the moderate-deviation results rest on:
integral approximation of lattice sums, the derivatives of J, the far tail of
the critical weights, the limit densities and the expansion of the
normalised weights.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from collections.abc import Callable, Sequence
from enum import Enum
from functools import partial

# Third Party
import mpmath
import numpy as np
from scipy import integrate, optimize

from . import app_settings
from .decomposition import decomposition, log_normalized_weights
from .entropy import J, J_derivative, entropy_I
from .limit_law import (
    limit_density_p1,
    limit_density_p1_prime,
    limit_density_p2,
    limit_density_p2_prime,
    p1_prime_polynomial,
    p2_polynomial,
    p2_prime_polynomial,
    r_prime_polynomial,
    remainder_r,
    remainder_r_prime,
)
from .log_weights import get_log_weight_table
from .model_params import ModelParams
from .special_functions import (
    log_factorial,
    quartic_tail_integral,
    stirling_bounds,
)
from .verification_report import VerificationReport, precondition_violation, spread

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)
FD_STEP = 1e-4
FD_RELATIVE_TOLERANCE = 1e-6
TAIL_SUM_RATE = 0.004
J_GAP = -0.005
J8_LOWER = -(2.0**25)


class Parity(str, Enum):
    EVEN = "even"
    ODD = "odd"


def _evaluate(f: Callable, points: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(f(points), dtype=float)
    except (TypeError, ValueError):
        values = None
    if values is None or values.shape != points.shape:
        values = np.array([float(f(float(t))) for t in points], dtype=float)
    return values


def _lattice(m: float, q: float, parity: Parity) -> np.ndarray:
    """Integers ℓ with m < ℓ < q of the requested parity."""
    ells = np.arange(math.floor(m) + 1, math.ceil(q), dtype=np.int64)
    wanted = 0 if parity is Parity.EVEN else 1
    return ells[ells % 2 == wanted]


def _quad(f: Callable, a: float, b: float) -> tuple[float, float]:
    if a == b:
        return 0.0, 0.0
    value, abserr = integrate.quad(lambda t: float(f(t)), a, b, limit=500, epsabs=1e-14, epsrel=1e-12)
    return value, abserr


def _lattice_discrepancy(f: Callable, m: float, q: float, p: float, parity: Parity):
    ells = _lattice(m, q, parity)
    lattice_sum = math.fsum(_evaluate(f, ells / p)) if ells.size else 0.0
    integral, abserr = _quad(f, m / p, q / p)
    lhs = abs(lattice_sum - 0.5 * p * integral)
    tolerance = 0.5 * p * abserr + 1e-12 * max(1.0, abs(lattice_sum))
    return lhs, tolerance, int(ells.size)


def check_integral_approx_decreasing(
    f: Callable,
    m: float,
    q: float,
    p: float,
    parity: Parity = Parity.EVEN,
    samples: int = 2001,
) -> VerificationReport:
    """
    |Σ_{m<ℓ<q} f(ℓ/p) - (p/2) ∫_{m/p}^{q/p} f| <= |f(m/p)| + |f(q/p)| over
    one parity class, for f decreasing on [(m-1)/p, (q+1)/p].
    """
    check_id = "integral-approx-decreasing"
    parity = Parity(parity)
    grid = f"m={m}, q={q}, p={p}, parity={parity.value}"

    sample = np.linspace((m - 1.0) / p, (q + 1.0) / p, samples)
    values = _evaluate(f, sample)
    scale = max(float(np.max(np.abs(values))), np.finfo(float).tiny)
    if np.any(np.diff(values) > 1e-14 * scale):
        logger.warning("%s: f increases somewhere on %s", check_id, grid)
        return precondition_violation(check_id, grid, "f is not decreasing on the sample grid")

    lhs, tolerance, count = _lattice_discrepancy(f, m, q, p, parity)
    bound = abs(float(f(m / p))) + abs(float(f(q / p)))
    return VerificationReport(
        check_id=check_id,
        passed=lhs <= bound + tolerance,
        grid=grid,
        worst_case=bound - lhs,
        details={"discrepancy": lhs, "bound": bound, "lattice_points": count},
    )


def _central_difference(f: Callable, t: np.ndarray, step: float) -> np.ndarray:
    return (
        -_evaluate(f, t + 2 * step)
        + 8.0 * _evaluate(f, t + step)
        - 8.0 * _evaluate(f, t - step)
        + _evaluate(f, t - 2 * step)
    ) / (12.0 * step)


def check_integral_approx_lipschitz(
    f: Callable,
    m: float,
    q: float,
    p: float,
    K: float,
    parity: Parity = Parity.EVEN,
    derivative: Callable | None = None,
    samples: int = 4001,
    steps: int = 20,
    seed: int = 0,
) -> VerificationReport:
    """
    |Σ_{m<ℓ<q} f(ℓ/p) - (p/2) ∫ f| <= K (q - m)/p + 2K when |f| + |f'| <= K,
    plus the per-step bound |f(ℓ/p) - (p/2) ∫_{ℓ/p}^{(ℓ+2)/p} f| <= K/p on
    randomly drawn lattice points.
    """
    check_id = "integral-approx-lipschitz"
    parity = Parity(parity)
    grid = f"m={m}, q={q}, p={p}, K={K}, parity={parity.value}"

    sample = np.linspace(m / p, q / p, samples)
    if derivative is None:
        slope = _central_difference(f, sample, 1e-6 * max(1.0, float(np.max(np.abs(sample)))))
    else:
        slope = _evaluate(derivative, sample)
    envelope = np.abs(_evaluate(f, sample)) + np.abs(slope)
    if float(np.max(envelope)) > K * (1.0 + 1e-9):
        logger.warning("%s: sampled |f| + |f'| reaches %s > K", check_id, np.max(envelope))
        return precondition_violation(
            check_id, grid, "sampled |f| + |f'| exceeds K", sampled_sup=float(np.max(envelope))
        )

    lhs, tolerance, count = _lattice_discrepancy(f, m, q, p, parity)
    bound = K * (q - m) / p + 2.0 * K

    ells = _lattice(m, q - 2.0, parity)
    step_ratio = 0.0
    if ells.size:
        rng = np.random.default_rng(seed)
        for ell in rng.choice(ells, size=min(steps, ells.size), replace=False):
            integral, abserr = _quad(f, ell / p, (ell + 2) / p)
            error = abs(float(f(ell / p)) - 0.5 * p * integral) - 0.5 * p * abserr
            step_ratio = max(step_ratio, error / (K / p))

    return VerificationReport(
        check_id=check_id,
        passed=lhs <= bound + tolerance and step_ratio <= 1.0 + 1e-9,
        grid=grid,
        worst_case=bound - lhs,
        details={
            "discrepancy": lhs,
            "bound": bound,
            "lattice_points": count,
            "max_step_error_over_K_by_p": step_ratio,
        },
    )


def check_J_lemma(samples: int = 50, seed: int = 20240601) -> VerificationReport:
    """
    Derivatives of J at and around 1/2, with every closed form cross-checked
    against an order-4 central difference of the next lower order.
    """
    check_id = "J-lemma"
    zero_orders = (1, 2, 3, 5, 7)
    zeros = {order: J_derivative(order, 0.5) for order in zero_orders}
    worst_zero = max(abs(value) for value in zeros.values())

    exact_ok = J_derivative(4, 0.5) == -32.0 and J_derivative(6, 0.5) == -1536.0

    t = np.arange(1, 1000) / 1000.0
    t = t[t != 0.5]
    second_ok = bool(np.all(J_derivative(2, t) < 0.0))

    quarter = np.linspace(0.25, 0.75, 501)
    eighth = J_derivative(8, quarter)
    eighth_ok = bool(np.all((eighth > J8_LOWER) & (eighth < 0.0)))

    rng = np.random.default_rng(seed)
    points = rng.uniform(0.05, 0.95, samples)
    worst_fd = 0.0
    for order in range(1, 9):
        lower = J if order == 1 else partial(J_derivative, order - 1)
        estimate = _central_difference(lower, points, FD_STEP)
        exact = J_derivative(order, points)
        relative = np.abs(estimate - exact) / np.maximum(1.0, np.abs(exact))
        worst_fd = max(worst_fd, float(np.max(relative)))

    passed = (
        worst_zero <= 1e-12
        and exact_ok
        and second_ok
        and eighth_ok
        and worst_fd <= FD_RELATIVE_TOLERANCE
    )
    return VerificationReport(
        check_id=check_id,
        passed=passed,
        grid=f"t=1/2; J'' on (0,1) step 1e-3; J^(8) on [1/4,3/4]; {samples} finite-difference points",
        worst_case=worst_zero,
        details={
            "zero_derivatives": {str(k): v for k, v in zeros.items()},
            "J4_half": J_derivative(4, 0.5),
            "J6_half": J_derivative(6, 0.5),
            "J8_range": [float(np.min(eighth)), float(np.max(eighth))],
            "J2_negative": second_ok,
            "finite_difference_max_relative_error": worst_fd,
        },
    )


def _central_slice(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices k with |k - n/2| < n/4 and ℓ = 2k - n as floats."""
    k = np.arange(n + 1)
    k = k[np.abs(4 * k - 2 * n) < n]
    return k, (2 * k - n).astype(float)


def check_J_taylor_bounds(n_values: Sequence[int] = (1000, 10_000, 100_000)) -> VerificationReport:
    """
    For |k - n/2| < n/4 and ℓ = 2k - n,
    -ℓ⁴/12n³ - ℓ⁶/30n⁵ - 2¹⁷ℓ⁸/(8! n⁷) <= n[J(k/n) - J(1/2)] <= -ℓ⁴/12n³ - ℓ⁶/30n⁵.
    """
    check_id = "J-taylor"
    worst = -math.inf
    passed = True
    for n in n_values:
        k, ell = _central_slice(n)
        value = n * (J(k / n) - LN2)
        upper = -(ell**4) / (12.0 * n**3) - ell**6 / (30.0 * n**5)
        lower = upper - 2.0**17 * ell**8 / (math.factorial(8) * float(n) ** 7)
        tolerance = 64.0 * np.finfo(float).eps * n * (np.abs(J(k / n)) + 1.0)
        violation = np.maximum(value - upper, lower - value) - tolerance
        worst = max(worst, float(np.max(violation)))
        passed = passed and bool(np.all(violation <= 0.0))
        logger.debug("%s: n=%s max violation %s", check_id, n, np.max(violation))
    return VerificationReport(
        check_id=check_id,
        passed=passed,
        grid=f"n in {list(n_values)}, |k - n/2| < n/4",
        worst_case=worst,
    )


def check_binomial_bounds(n_values: Sequence[int] = (100, 1000, 10_000, 100_000)) -> VerificationReport:
    """
    binom(n, k) <= e^{n I(k/n)} for every k, the central Stirling form of
    binom(n, k) to O(1/n), and y_{k,n} <= sqrt(πn/2) e^{n [J(k/n) - J(1/2)]}.
    """
    check_id = "binomial-bounds"
    passed = True
    constants = []
    worst_excess = -math.inf
    for n in n_values:
        k = np.arange(n + 1)
        log_binomial = log_factorial(n) - log_factorial(k) - log_factorial(n - k)
        tolerance = 8.0 * np.finfo(float).eps * (log_factorial(n) + 1.0)

        entropy_excess = log_binomial - n * entropy_I(k / n)
        worst_excess = max(worst_excess, float(np.max(entropy_excess)))
        upper_ok = bool(np.all(entropy_excess <= tolerance))

        central, _ = _central_slice(n)
        stirling_form = 0.5 * np.log(n / (2.0 * math.pi * central * (n - central))) + n * entropy_I(
            central / n
        )
        constant = n * float(np.max(np.abs(np.expm1(log_binomial[central] - stirling_form))))
        constants.append(constant)

        log_y = log_normalized_weights(get_log_weight_table(ModelParams(n)))
        envelope = 0.5 * math.log(math.pi * n / 2.0) + n * (J(k / n) - LN2)
        envelope_ok = bool(np.all(log_y <= envelope + tolerance))

        passed = passed and upper_ok and envelope_ok
        logger.debug("%s: n=%s central constant %s", check_id, n, constant)

    estimated = max(constants)
    passed = passed and math.isfinite(estimated) and estimated <= app_settings.CONSTANT_CEILING
    return VerificationReport(
        check_id=check_id,
        passed=passed,
        grid=f"n in {list(n_values)}, all k; central ratio on |k - n/2| < n/4",
        worst_case=worst_excess,
        estimated_constant=estimated,
        details={"central_constants": constants, "spread": spread(constants)},
    )


def check_tail_sum_bound(n_values: Sequence[int] = (500, 1000, 2000, 5000, 10_000)) -> VerificationReport:
    """
    Â_n <= A_n <= e^{-0.004 n}. The exponential bound only holds from some n₀
    on; the smallest scanned n from which it holds throughout is reported.
    """
    check_id = "tail-sum-bound"
    n_values = sorted(n_values)
    subset_ok = True
    bound_holds = []
    scaled = {}
    rates = {}
    for n in n_values:
        sums = decomposition(get_log_weight_table(ModelParams(n)), 0.0)
        subset_ok = subset_ok and sums.A_hat <= sums.A
        holds = sums.A <= math.exp(-TAIL_SUM_RATE * n)
        bound_holds.append(holds)
        scaled[n] = math.exp(math.log(sums.A) + TAIL_SUM_RATE * n) if sums.A > 0.0 else 0.0
        rates[n] = -math.log(sums.A) / n if sums.A > 0.0 else math.inf
        logger.debug("%s: n=%s A=%s A_hat=%s", check_id, n, sums.A, sums.A_hat)

    n0 = None
    for index, n in enumerate(n_values):
        if all(bound_holds[index:]):
            n0 = n
            break

    gap = J(0.25) - J(0.5)
    far = np.concatenate([np.linspace(0.0, 0.25, 2501), np.linspace(0.75, 1.0, 2501)])
    far_max = float(np.max(J(far)))
    maximiser_ok = far_max <= J(0.25) + 1e-15

    settled = [n for n in n_values if n0 is not None and n >= n0]
    worst = max(scaled[n] for n in settled) if settled else None
    rate = min(rates[n] for n in settled) if settled else None
    return VerificationReport(
        check_id=check_id,
        passed=subset_ok and gap < J_GAP and maximiser_ok and n0 is not None,
        grid=f"n in {n_values}, x=0",
        worst_case=worst,
        estimated_constant=rate,
        details={
            "n0": n0,
            "A_times_exp_rate_n": {str(n): v for n, v in scaled.items()},
            "J_quarter_minus_J_half": gap,
            "far_J_max": far_max,
        },
    )


_DENSITY_TERMS = (
    ("p1", lambda t, n: limit_density_p1(t)),
    ("p2", lambda t, n: limit_density_p2(t)),
    ("r", remainder_r),
    ("p1_prime", lambda t, n: limit_density_p1_prime(t)),
    ("p2_prime", lambda t, n: limit_density_p2_prime(t)),
    ("r_prime", remainder_r_prime),
)


def density_envelope(t, n: int):
    """|p1| + |p2| + |r| + |p1'| + |p2'| + |r'| at t."""
    t = np.asarray(t, dtype=float)
    return sum(np.abs(term(t, n)) for _, term in _DENSITY_TERMS)


def _refined_sup(func: Callable, grid: np.ndarray) -> float:
    values = func(grid)
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    result = optimize.minimize_scalar(
        lambda t: -float(func(t)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
    )
    return max(float(values[i]), -float(result.fun))


def measure_density_bound(n_values: Sequence[int] = (100, 10**6), spacing: float = 1e-3, half_width: float = 50.0):
    """Grid-and-refine sup of the six-term envelope over |t| <= half_width."""
    grid = np.arange(-half_width, half_width + spacing / 2, spacing)
    return max(_refined_sup(lambda t, n=n: density_envelope(t, n), grid) for n in n_values)


def check_bounded_densities(n_values: Sequence[int] = (100, 10**6), spacing: float = 1e-3) -> VerificationReport:
    check_id = "bounded-densities"
    K = measure_density_bound(n_values, spacing)
    K_refined = measure_density_bound(n_values, spacing / 2)
    grid = np.arange(-50.0, 50.0 + spacing / 2, spacing)
    term_sups = {
        name: max(float(np.max(np.abs(term(grid, n)))) for n in n_values) for name, term in _DENSITY_TERMS
    }
    change = abs(K_refined - K)
    return VerificationReport(
        check_id=check_id,
        passed=math.isfinite(K) and change < 1e-6,
        grid=f"|t| <= 50 step {spacing} (and {spacing / 2}), r at n in {list(n_values)}",
        worst_case=change,
        estimated_constant=K,
        details={"term_sups": term_sups, "K_refined": K_refined},
    )


def check_monotone_densities(
    n_values: Sequence[int] = (100, 10**6), start: float = 9.0, stop: float = 50.0, spacing: float = 1e-3
) -> VerificationReport:
    """
    p1, |p2| and r(., n) decrease on (9, 50]. Signs are read from the
    polynomial factors of the derivatives; p2 itself is negative there.
    """
    check_id = "monotone-densities"
    t = np.arange(start + spacing, stop + spacing / 2, spacing)
    p2_negative = bool(np.all(p2_polynomial(t) < 0.0))
    slopes = {
        "p1": float(np.max(p1_prime_polynomial(t))),
        "abs_p2": float(np.max(-p2_prime_polynomial(t))),
    }
    for n in n_values:
        slopes[f"r_n{n}"] = float(np.max(r_prime_polynomial(t, n)))
    worst = max(slopes.values())
    return VerificationReport(
        check_id=check_id,
        passed=p2_negative and worst < 0.0,
        grid=f"t in ({start}, {stop}] step {spacing}",
        worst_case=worst,
        details={"max_slope_factor": slopes, "p2_negative": p2_negative},
    )


def check_weight_expansion(n_values: Sequence[int] = (1000, 10_000, 100_000)) -> VerificationReport:
    """
    |y_{k,n} e^{ℓ⁴/12n³} - 1 - ℓ²/2n² + ℓ⁶/30n⁵| <= C_exp R_{k,n} on
    |k - n/2| < n/4, with R_{k,n} = 1/n + ℓ⁴/n⁴ + ℓ⁸/n⁷ + ℓ¹²/n¹⁰ + ℓ¹⁴/n¹².
    Also measures the prefactor form of x_{k,n} to O(1/n).
    """
    check_id = "weight-expansion"
    if min(n_values) < 100:
        return precondition_violation(check_id, f"n in {list(n_values)}", "the expansion is checked for n >= 100")

    constants = []
    prefactor_constants = []
    centre_errors = {}
    for n in n_values:
        table = get_log_weight_table(ModelParams(n))
        log_y = log_normalized_weights(table)
        k, ell = _central_slice(n)
        nf = float(n)

        ratio = np.exp(log_y[k] + ell**4 / (12.0 * nf**3))
        lhs = np.abs(ratio - 1.0 - ell**2 / (2.0 * nf**2) + ell**6 / (30.0 * nf**5))
        R = 1.0 / nf + ell**4 / nf**4 + ell**8 / nf**7 + ell**12 / nf**10 + ell**14 / nf**12
        constants.append(float(np.max(lhs / R)))

        prefactor = 0.5 * np.log(nf / (2.0 * math.pi * k * (n - k))) + n * J(k / n) + 0.5
        prefactor_constants.append(n * float(np.max(np.abs(np.expm1(table.log_weights[k] - prefactor)))))

        if n % 2 == 0:
            centre_errors[str(n)] = math.expm1(float(log_y[n // 2]))
        logger.debug("%s: n=%s C_exp=%s", check_id, n, constants[-1])

    estimated = max(constants)
    stability = spread(constants)
    return VerificationReport(
        check_id=check_id,
        passed=math.isfinite(estimated)
        and estimated <= app_settings.CONSTANT_CEILING
        and stability is not None
        and stability <= 2.0,
        grid=f"n in {list(n_values)}, |k - n/2| < n/4",
        worst_case=estimated,
        estimated_constant=estimated,
        details={
            "C_exp_by_n": constants,
            "spread": stability,
            "prefactor_constant_by_n": prefactor_constants,
            "centre_y_minus_one": centre_errors,
        },
    )


def stirling_grid(exhaustive_up_to: int = 10**4, sampled_up_to: int = 10**6, samples: int = 200) -> list[int]:
    """Every n up to ``exhaustive_up_to``, then a geometric sample up to ``sampled_up_to``."""
    sampled = np.unique(np.rint(np.geomspace(exhaustive_up_to, sampled_up_to, samples)).astype(np.int64))
    return list(range(1, exhaustive_up_to + 1)) + [int(n) for n in sampled if n > exhaustive_up_to]


def check_stirling_bounds(
    exhaustive_up_to: int = 10**4,
    sampled_up_to: int = 10**6,
    samples: int = 200,
    extra: Sequence[int] = (10**9,),
) -> VerificationReport:
    """
    Stirling bracket against 40-digit log-gamma, and the float log-factorial
    and bracket endpoints against the same reference.

    Doubles cannot resolve upper - ln n! ~ 1/(360 n^3) for large n, so the
    bracket itself is decided in 40-digit arithmetic.
    """
    check_id = "stirling"
    n_values = stirling_grid(exhaustive_up_to, sampled_up_to, samples) + [int(n) for n in extra]
    violations = []
    worst_relative = 0.0
    with mpmath.workdps(40):
        for n in n_values:
            exact = mpmath.loggamma(n + 1)
            base = mpmath.log(2 * mpmath.pi * n) / 2 + n * mpmath.log(n) - n
            lower = base + mpmath.mpf(1) / (12 * n + 1)
            upper = base + mpmath.mpf(1) / (12 * n)
            if not lower <= exact <= upper:
                violations.append(n)

            scale = max(1.0, abs(float(exact)))
            float_lower, float_upper = stirling_bounds(n)
            error = max(
                abs(log_factorial(n) - float(exact)),
                abs(float_lower - float(lower)),
                abs(float_upper - float(upper)),
            ) / scale
            worst_relative = max(worst_relative, error)
    if violations:
        logger.warning("%s: bracket fails at n=%s", check_id, violations[:10])
    return VerificationReport(
        check_id=check_id,
        passed=not violations and worst_relative <= 1e-14,
        grid=f"n in 1..{exhaustive_up_to}, {samples} geometric n up to {sampled_up_to}, n in {list(extra)}",
        worst_case=worst_relative,
        details={"checked": len(n_values), "largest_n": max(n_values), "violations": violations[:10]},
    )


def check_quartic_tails(
    x_values: Sequence[float] = (-math.inf, -2.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0, 5.0),
    powers: Sequence[int] = (0, 2, 4, 6, 8, 12, 14),
    tolerance: float = 1e-10,
) -> VerificationReport:
    """Incomplete-gamma tails against adaptive quadrature; x = -inf gives the full moment."""
    check_id = "quartic-tails"
    worst = 0.0
    for k in powers:
        for x in x_values:
            reference, _ = integrate.quad(
                lambda t, k=k: t**k * math.exp(-(t**4) / 12.0), x, math.inf, epsabs=0.0, epsrel=1e-13, limit=200
            )
            value = quartic_tail_integral(k, x)
            worst = max(worst, abs(value - reference) / abs(reference))
    return VerificationReport(
        check_id=check_id,
        passed=worst <= tolerance,
        grid=f"k in {list(powers)}, x in {list(x_values)}",
        worst_case=worst,
    )
