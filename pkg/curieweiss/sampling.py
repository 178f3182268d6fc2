"""
Random generation from the Curie-Weiss law.

Two independent routes: inverse-CDF draws of S_n from the exact weight table,
and single-site heat-bath (Glauber) dynamics on the spins themselves, whose
stationary law is the Gibbs measure. Streams come from numpy's PCG64.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

# Third Party
import numpy as np
from scipy import special, stats

from .log_weights import get_log_weight_table
from .model_params import ModelParams
from .verification_report import VerificationReport

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64"
CDF_TOLERANCE = 1e-12
CHI_SQUARED_MIN_EXPECTED = 5.0
CHI_SQUARED_MIN_P = 1e-3


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class SamplerState:
    """
    Owned by one thread at a time. ``spin_sum`` tracks Σσ_i across Glauber
    updates; ``recount`` recomputes it from ``spin_config``.
    """

    params: ModelParams
    rng_seed: int
    rng: np.random.Generator
    cdf_cache: np.ndarray
    spin_config: np.ndarray
    spin_sum: int
    flip_up: list[float] = field(default_factory=list, repr=False)

    def recount(self) -> int:
        return int(self.spin_config.sum())


def heat_bath_up_probabilities(params: ModelParams) -> list[float]:
    """
    P(σ_i = +1 | rest) indexed by j, where the other n - 1 spins sum to 2j - (n - 1).
    """
    n, beta, h = params.n, params.beta, params.h
    others = 2.0 * np.arange(n) - (n - 1)
    return special.expit(2.0 * beta * (others / n + h)).tolist()


def build_sampler_state(params: ModelParams, seed: int = 0) -> SamplerState:
    rng = make_rng(seed)
    table = get_log_weight_table(params)
    cdf = np.cumsum(table.probabilities)
    if abs(cdf[-1] - 1.0) > CDF_TOLERANCE:
        logger.warning("Cumulative mass for %s ends at %r", params, cdf[-1])
    spins = np.where(rng.random(params.n) < 0.5, -1, 1).astype(np.int8)
    return SamplerState(
        params=params,
        rng_seed=seed,
        rng=rng,
        cdf_cache=cdf,
        spin_config=spins,
        spin_sum=int(spins.sum(dtype=np.int64)),
        flip_up=heat_bath_up_probabilities(params),
    )


def sample_magnetization_exact(state: SamplerState, count: int) -> list[int]:
    """count i.i.d. draws of S_n by binary search of uniforms in the cached CDF."""
    n = state.params.n
    uniforms = state.rng.random(count) * state.cdf_cache[-1]
    k = np.minimum(np.searchsorted(state.cdf_cache, uniforms, side="right"), n)
    return (2 * k - n).tolist()


def heat_bath_transition_probability(params: ModelParams, spins: Sequence[int], site: int) -> float:
    """P(σ → σ with spin ``site`` flipped) for one step with a uniformly chosen site."""
    n = params.n
    others = int(sum(spins)) - spins[site]
    up = float(special.expit(2.0 * params.beta * (others / n + params.h)))
    flip = up if spins[site] < 0 else 1.0 - up
    return flip / n


def glauber_sweep(state: SamplerState) -> SamplerState:
    """n heat-bath updates at uniformly drawn sites."""
    n = state.params.n
    sites = state.rng.integers(0, n, size=n).tolist()
    uniforms = state.rng.random(n).tolist()
    up = state.flip_up
    spins = state.spin_config.tolist()
    total = state.spin_sum
    for site, u in zip(sites, uniforms):
        others = total - spins[site]
        new = 1 if u < up[(others + n - 1) >> 1] else -1
        spins[site] = new
        total = others + new
    state.spin_config[:] = spins
    state.spin_sum = total
    return state


def glauber_chain(state: SamplerState, sweeps: int, burn_in: int = 0) -> dict[int, float]:
    """Empirical pmf of S_n over ``sweeps`` sweeps recorded after ``burn_in``."""
    n = state.params.n
    for _ in range(burn_in):
        glauber_sweep(state)
    counts = np.zeros(n + 1, dtype=np.int64)
    for _ in range(sweeps):
        glauber_sweep(state)
        counts[(state.spin_sum + n) // 2] += 1
    logger.debug("Glauber chain for %s: %s sweeps after %s burn-in", state.params, sweeps, burn_in)
    return {2 * k - n: c / sweeps for k, c in enumerate(counts.tolist()) if c}


def empirical_pmf(draws: Sequence[int]) -> dict[int, float]:
    values, counts = np.unique(np.asarray(draws), return_counts=True)
    return {int(v): c / len(draws) for v, c in zip(values, counts)}


def total_variation(p: dict[int, float], q: dict[int, float]) -> float:
    return 0.5 * math.fsum(abs(p.get(s, 0.0) - q.get(s, 0.0)) for s in set(p) | set(q))


def chi_squared_pvalue(draws: Sequence[int], pmf: dict[int, float]) -> float:
    """
    Goodness of fit over the support points expected at least five times;
    expected counts are rescaled to the draws that land in those points.
    """
    support = np.array(sorted(pmf))
    probabilities = np.array([pmf[s] for s in support])
    kept = probabilities * len(draws) >= CHI_SQUARED_MIN_EXPECTED
    index = {int(s): i for i, s in enumerate(support)}
    observed_all = np.zeros(support.size)
    for value, count in zip(*np.unique(np.asarray(draws), return_counts=True)):
        observed_all[index[int(value)]] = count
    observed = observed_all[kept]
    expected = probabilities[kept] / probabilities[kept].sum() * observed.sum()
    return float(stats.chisquare(observed, expected).pvalue)


def check_exact_sampler(
    parameters: Sequence[tuple[int, float, float]] = ((50, 1.0, 0.0), (50, 0.5, 0.0), (50, 2.0, 0.0)),
    seeds: Sequence[int] = (1, 2, 3, 4, 5),
    draws: int = 10**6,
) -> VerificationReport:
    check_id = "exact-sampler"
    smallest = 1.0
    for n, beta, h in parameters:
        params = ModelParams(n, beta, h)
        pmf = get_log_weight_table(params).pmf()
        for seed in seeds:
            sample = sample_magnetization_exact(build_sampler_state(params, seed), draws)
            smallest = min(smallest, chi_squared_pvalue(sample, pmf))
    return VerificationReport(
        check_id=check_id,
        passed=smallest > CHI_SQUARED_MIN_P,
        grid=f"(n, beta, h) in {list(parameters)}, seeds {list(seeds)}, {draws} draws",
        worst_case=smallest,
        details={"rng": RNG_ALGORITHM},
    )


def check_detailed_balance(
    n_values: Sequence[int] = tuple(range(1, 11)), beta: float = 1.0, h: float = 0.0
) -> VerificationReport:
    """π(σ) P(σ → σ') = π(σ') P(σ' → σ) over every single-spin flip, by enumeration."""
    check_id = "detailed-balance"
    worst = 0.0
    for n in n_values:
        params = ModelParams(n, beta, h)
        codes = np.arange(1 << n)
        configurations = 2 * ((codes[:, None] >> np.arange(n)) & 1) - 1
        spin_sums = configurations.sum(axis=1)
        log_weight = beta * (spin_sums.astype(float) ** 2 - n) / (2.0 * n) + beta * h * spin_sums
        for code, spins in zip(codes.tolist(), configurations.tolist()):
            for site in range(n):
                flipped = list(spins)
                flipped[site] = -flipped[site]
                partner = code ^ (1 << site)
                forward = math.exp(log_weight[code]) * heat_bath_transition_probability(params, spins, site)
                backward = math.exp(log_weight[partner]) * heat_bath_transition_probability(params, flipped, site)
                worst = max(worst, abs(forward - backward) / max(forward, backward))
    return VerificationReport(
        check_id=check_id,
        passed=worst <= 1e-12,
        grid=f"n in {list(n_values)}, beta={beta}, h={h}, all single-spin flips",
        worst_case=worst,
    )


def check_glauber_chain(
    params: ModelParams = ModelParams(100, 1.0, 0.0),
    sweeps: int = 10**5,
    burn_in: int = 1000,
    seed: int = 1,
    threshold: float = 0.02,
) -> VerificationReport:
    """Total variation between the Glauber empirical pmf and the exact law."""
    state = build_sampler_state(params, seed)
    chain = glauber_chain(state, sweeps, burn_in)
    distance = total_variation(chain, get_log_weight_table(params).pmf())
    return VerificationReport(
        check_id="glauber",
        passed=distance < threshold and state.recount() == state.spin_sum,
        grid=f"{params}, {sweeps} sweeps after {burn_in}, seed {seed}",
        worst_case=distance,
        details={"rng": RNG_ALGORITHM},
    )
