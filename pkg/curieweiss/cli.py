"""
Subcommand implementations behind ``manage.py curieweiss``.

Each ``cmd_*`` takes a validated ``RunConfig`` and returns the rendered output
with the process exit status; the management command only parses flags and
writes the result.
"""

from __future__ import annotations

# Standard Library
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from . import app_settings
from .exceptions import DomainError, RangeError
from .limit_law import error_envelope, get_limit_law, limit_density_p1, limit_density_p2, theorem_range_edge
from .log_weights import exact_tail_critical, get_log_weight_table
from .model_params import ModelParams
from .report_writers import (
    render_csv,
    render_reports_csv,
    render_reports_json,
    render_rows_json,
)
from .sampling import (
    build_sampler_state,
    glauber_chain,
    sample_magnetization_exact,
    total_variation,
)
from .theorem_checks import inclusive_grid
from .verification_suite import CHECKS, SuiteOptions, run_checks

logger = logging.getLogger(__name__)

EXACT_TAIL_COLUMNS = ("x", "exact_tail", "limit_tail", "ratio", "corrected_ratio", "envelope")
LIMIT_LAW_COLUMNS = ("x", "F", "G", "p1", "p2")
DRAW_COLUMNS = ("draw", "S")
PMF_COLUMNS = ("S", "empirical", "exact")


class Subcommand(str, Enum):
    EXACT_TAIL = "exact-tail"
    VERIFY = "verify"
    SAMPLE = "sample"
    LIMIT_LAW = "limit-law"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class GridSpec:
    """Inclusive grid ``count`` points from ``start`` to ``stop``."""

    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"grid needs at least one point, got count={self.count}")
        if self.start > self.stop:
            raise DomainError(f"grid min {self.start} exceeds max {self.stop}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise DomainError("grid bounds must be finite")

    @classmethod
    def from_values(cls, values) -> GridSpec:
        if values is None or len(values) != 3:
            raise DomainError("--x takes <min> <max> <count>")
        start, stop, count = values
        if count != int(count):
            raise DomainError(f"grid count must be an integer, got {count}")
        return cls(float(start), float(stop), int(count))

    def points(self) -> list[float]:
        return inclusive_grid(self.start, self.stop, self.count)


@dataclass(frozen=True)
class RunConfig:
    subcommand: Subcommand
    params: ModelParams | None = None
    x_grid: GridSpec | None = None
    x_values: tuple[float, ...] | None = None
    n_list: tuple[int, ...] | None = None
    output_format: OutputFormat = OutputFormat.CSV
    output_path: str | None = None
    seed: int = 0
    draws: int = 1000
    sweeps: int = 10_000
    burn_in: int = 1000
    glauber: bool = False
    checks: tuple[str, ...] | None = None
    allow_out_of_range: bool = False

    def __post_init__(self):
        for name in ("draws", "sweeps"):
            if getattr(self, name) < 1:
                raise DomainError(f"--{name} must be positive")
        if self.burn_in < 0:
            raise DomainError("--burn-in must be nonnegative")
        if self.checks is not None:
            unknown = [c for c in self.checks if c not in CHECKS]
            if unknown:
                raise DomainError(f"unknown check ids: {', '.join(unknown)}; known: {', '.join(CHECKS)}")


@dataclass(frozen=True)
class CommandOutput:
    text: str
    exit_status: int = 0
    summary: str | None = None


def _render(rows: list[dict], columns, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.JSON:
        return render_rows_json(rows, columns)
    return render_csv(rows, columns)


def _require(config: RunConfig, *fields: str) -> None:
    missing = [f for f in fields if getattr(config, f) is None]
    if missing:
        raise DomainError(f"{config.subcommand.value} needs {', '.join(missing)}")


def cmd_exact_tail(config: RunConfig) -> CommandOutput:
    _require(config, "params", "x_grid")
    params = config.params
    if not params.is_critical:
        raise DomainError("exact-tail tabulates the critical law; use --beta 1 --h 0")
    n = params.n
    xs = config.x_grid.points()
    if not config.allow_out_of_range:
        edge = theorem_range_edge(n)
        outside = [x for x in xs if not 0.0 <= x <= edge]
        if outside:
            raise RangeError(
                f"x-grid leaves [0, n^(1/12)] = [0, {edge:.6g}] for n={n}; pass --allow-out-of-range"
            )

    table = get_log_weight_table(params)
    law = get_limit_law()

    def row(x: float) -> dict:
        exact = exact_tail_critical(table, x)
        limit_tail = law.survival(x)
        ratio = exact / limit_tail if limit_tail >= app_settings.DEEP_TAIL_FLOOR else None
        corrected = ratio - law.G(x) / math.sqrt(n) if ratio is not None else None
        return {
            "x": x,
            "exact_tail": exact,
            "limit_tail": limit_tail,
            "ratio": ratio,
            "corrected_ratio": corrected,
            "envelope": error_envelope(n, x, allow_out_of_range=True),
        }

    with ThreadPoolExecutor(max_workers=app_settings.MAX_WORKERS) as executor:
        rows = list(executor.map(row, xs))
    return CommandOutput(_render(rows, EXACT_TAIL_COLUMNS, config.output_format))


def cmd_limit_law(config: RunConfig) -> CommandOutput:
    _require(config, "x_grid")
    law = get_limit_law()
    rows = [
        {"x": x, "F": law.F(x), "G": law.G(x), "p1": limit_density_p1(x), "p2": limit_density_p2(x)}
        for x in config.x_grid.points()
    ]
    return CommandOutput(_render(rows, LIMIT_LAW_COLUMNS, config.output_format))


def cmd_sample(config: RunConfig) -> CommandOutput:
    _require(config, "params")
    state = build_sampler_state(config.params, config.seed)
    if not config.glauber:
        draws = sample_magnetization_exact(state, config.draws)
        rows = [{"draw": i, "S": s} for i, s in enumerate(draws)]
        return CommandOutput(_render(rows, DRAW_COLUMNS, config.output_format))

    chain = glauber_chain(state, config.sweeps, config.burn_in)
    exact = get_log_weight_table(config.params).pmf()
    rows = [{"S": s, "empirical": chain.get(s, 0.0), "exact": p} for s, p in sorted(exact.items())]
    distance = total_variation(chain, exact)
    logger.info("Glauber chain for %s: total variation %s", config.params, distance)
    return CommandOutput(
        _render(rows, PMF_COLUMNS, config.output_format),
        summary=f"total_variation={distance!r} sweeps={config.sweeps} burn_in={config.burn_in} seed={config.seed}",
    )


def cmd_verify(config: RunConfig) -> CommandOutput:
    reports = run_checks(config.checks, SuiteOptions(n_values=config.n_list, x_values=config.x_values))
    if config.output_format is OutputFormat.CSV:
        text = render_reports_csv(reports)
    else:
        text = render_reports_json(reports)
    failed = [r.check_id for r in reports if not r.passed]
    return CommandOutput(
        text,
        exit_status=1 if failed else 0,
        summary=f"{len(reports) - len(failed)}/{len(reports)} checks passed"
        + (f"; failed: {', '.join(failed)}" if failed else ""),
    )


HANDLERS = {
    Subcommand.EXACT_TAIL: cmd_exact_tail,
    Subcommand.LIMIT_LAW: cmd_limit_law,
    Subcommand.SAMPLE: cmd_sample,
    Subcommand.VERIFY: cmd_verify,
}


def run(config: RunConfig) -> CommandOutput:
    return HANDLERS[config.subcommand](config)
