"""Registry of named checks and the thread-pooled runner behind ``verify``"""

from __future__ import annotations

# Standard Library
import logging
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import app_settings
from .lemma_checks import (
    Parity,
    check_binomial_bounds,
    check_bounded_densities,
    check_integral_approx_decreasing,
    check_integral_approx_lipschitz,
    check_J_lemma,
    check_J_taylor_bounds,
    check_monotone_densities,
    check_quartic_tails,
    check_stirling_bounds,
    check_tail_sum_bound,
    check_weight_expansion,
    measure_density_bound,
)
from .limit_law import limit_density_p1, limit_density_p2, limit_density_p2_prime
from .model_params import Conditioning, ModelParams, Regime
from .sampling import check_detailed_balance, check_exact_sampler, check_glauber_chain
from .theorem_checks import (
    check_berry_esseen,
    check_brute_force_agreement,
    check_corollary_limit,
    check_decomposition_identity,
    check_lattice_sums,
    check_partition_expansion,
    check_tail_sum_expansion,
    scan_classic_moderate_deviation,
    scan_theorem_ratio,
)
from .verification_report import VerificationReport

logger = logging.getLogger(__name__)

THEOREM_N_VALUES = (10**3, 10**4, 10**5)
LIPSCHITZ_N = 10**4


@dataclass(frozen=True)
class SuiteOptions:
    """Overrides from the command line; None keeps each check's own grid."""

    n_values: tuple[int, ...] | None = None
    x_values: tuple[float, ...] | None = None

    def n_or(self, default: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.n_values) if self.n_values else tuple(default)

    def kwargs(self, n: bool = True, x: str | None = None) -> dict:
        options = {}
        if n and self.n_values:
            options["n_values"] = tuple(self.n_values)
        if x and self.x_values:
            options[x] = tuple(self.x_values)
        return options


def _combined(check_id: str, reports: list[VerificationReport], worst: Callable = min) -> VerificationReport:
    margins = [r.worst_case for r in reports if r.worst_case is not None]
    constants = [r.estimated_constant for r in reports if r.estimated_constant is not None]
    failed = [r for r in reports if not r.passed]
    status = failed[0].status if failed else None
    details = {r.grid: r.to_dict() for r in reports}
    if constants:
        details["spread_by_grid"] = {r.grid: r.details.get("spread") for r in reports}
    return VerificationReport(
        check_id=check_id,
        passed=not failed,
        grid="; ".join(r.grid for r in reports),
        worst_case=worst(margins) if margins else None,
        estimated_constant=max(constants) if constants else None,
        status=status,
        details=details,
    )


def _integral_decreasing(options: SuiteOptions) -> VerificationReport:
    p = 100**0.75
    return _combined(
        "integral-approx-decreasing",
        [check_integral_approx_decreasing(limit_density_p1, 10.0, 50.0, p, parity) for parity in Parity],
    )


def _integral_lipschitz(options: SuiteOptions) -> VerificationReport:
    n = options.n_or((LIPSCHITZ_N,))[-1]
    K = measure_density_bound()
    return _combined(
        "integral-approx-lipschitz",
        [
            check_integral_approx_lipschitz(
                limit_density_p2, -n / 2, n / 2, n**0.75, K, parity, derivative=limit_density_p2_prime
            )
            for parity in Parity
        ],
    )


def _theorem(regime: Regime, cases: Sequence[tuple[float, float, Conditioning | None]]):
    def run(options: SuiteOptions) -> VerificationReport:
        reports = [
            scan_theorem_ratio(
                regime,
                [ModelParams(n, beta, h) for n in options.n_or(THEOREM_N_VALUES)],
                options.x_values,
                conditioning=conditioning,
            )
            for beta, h, conditioning in cases
        ]
        if len(reports) == 1:
            return reports[0]
        return _combined(f"theorem-{regime.value}", reports, worst=max)

    return run


CHECKS: dict[str, Callable[[SuiteOptions], VerificationReport]] = {
    "stirling": lambda o: check_stirling_bounds(),
    "quartic-tails": lambda o: check_quartic_tails(),
    "brute-force": lambda o: check_brute_force_agreement(),
    "J-lemma": lambda o: check_J_lemma(),
    "J-taylor": lambda o: check_J_taylor_bounds(**o.kwargs()),
    "binomial-bounds": lambda o: check_binomial_bounds(**o.kwargs()),
    "integral-approx-decreasing": _integral_decreasing,
    "integral-approx-lipschitz": _integral_lipschitz,
    "tail-sum-bound": lambda o: check_tail_sum_bound(**o.kwargs()),
    "bounded-densities": lambda o: check_bounded_densities(),
    "monotone-densities": lambda o: check_monotone_densities(),
    "weight-expansion": lambda o: check_weight_expansion(**o.kwargs()),
    "decomposition-identity": lambda o: check_decomposition_identity(**o.kwargs(x="x_values")),
    "partition-expansion": lambda o: check_partition_expansion(**o.kwargs()),
    "lattice-sums": lambda o: check_lattice_sums(**o.kwargs()),
    "tail-sum-expansion": lambda o: check_tail_sum_expansion(**o.kwargs(x="x_values")),
    "theorem-critical": _theorem(Regime.CRITICAL, ((1.0, 0.0, None),)),
    "theorem-unique": _theorem(Regime.UNIQUE, ((0.5, 0.0, None), (0.8, 0.3, None))),
    "theorem-pair": _theorem(
        Regime.PAIR, ((2.0, 0.0, Conditioning.POSITIVE_SPIN), (2.0, 0.0, Conditioning.NEGATIVE_SPIN))
    ),
    "classic-moderate-deviation": lambda o: scan_classic_moderate_deviation(**o.kwargs()),
    "corollary": lambda o: check_corollary_limit(**o.kwargs(x="x_values")),
    "berry-esseen": lambda o: check_berry_esseen(**o.kwargs()),
    "exact-sampler": lambda o: check_exact_sampler(),
    "detailed-balance": lambda o: check_detailed_balance(),
    "glauber": lambda o: check_glauber_chain(),
}


def _run_one(check_id: str, options: SuiteOptions) -> VerificationReport:
    try:
        report = CHECKS[check_id](options)
    except Exception as ex:
        logger.exception("Check %s raised", check_id)
        return VerificationReport(
            check_id=check_id,
            passed=False,
            grid="not evaluated",
            details={"error": f"{type(ex).__name__}: {ex}"},
        )
    logger.debug("Check %s finished: %s", check_id, report.status.value)
    return report


def run_checks(
    check_ids: Iterable[str] | None = None,
    options: SuiteOptions | None = None,
    max_workers: int | None = None,
) -> list[VerificationReport]:
    """Run the named checks (all when None) in parallel; reports keep request order."""
    check_ids = list(CHECKS) if check_ids is None else list(check_ids)
    unknown = [c for c in check_ids if c not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check ids: {', '.join(unknown)}")
    options = options or SuiteOptions()
    workers = max_workers or app_settings.MAX_WORKERS

    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(lambda c: _run_one(c, options), check_ids))

    failed = [r.check_id for r in reports if not r.passed]
    logger.info("Ran %d checks, %d failed%s", len(reports), len(failed), f": {failed}" if failed else "")
    return reports
