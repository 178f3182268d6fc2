"""Command line surface of the app"""

# Standard Library
import logging

# Django
from django.core.management.base import BaseCommand, CommandError

# Curie-Weiss App
from curieweiss.cli import GridSpec, OutputFormat, RunConfig, Subcommand, run
from curieweiss.exceptions import CurieWeissError
from curieweiss.model_params import ModelParams

logger = logging.getLogger(__name__)


def _integer(value: str) -> int:
    """Accepts 1000, 1e4 and 10_000."""
    number = float(value.replace("_", ""))
    if number != int(number):
        raise ValueError(f"{value} is not an integer")
    return int(number)


class Command(BaseCommand):
    help = "Exact tails, limit-law tables, samples and verification runs for the Curie-Weiss model"
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument("subcommand", choices=[s.value for s in Subcommand])
        parser.add_argument("--n", nargs="+", type=_integer, help="system size(s)")
        parser.add_argument("--beta", type=float, default=1.0)
        parser.add_argument("--h", type=float, default=0.0)
        parser.add_argument(
            "--x",
            nargs="+",
            type=float,
            help="<min> <max> <count> for exact-tail and limit-law, a list of points for verify",
        )
        parser.add_argument("--check", action="append", help="check id, repeatable")
        parser.add_argument("--all", action="store_true", help="run every registered check")
        parser.add_argument("--draws", type=_integer, default=1000)
        parser.add_argument("--sweeps", type=_integer, default=10_000)
        parser.add_argument("--burn-in", type=_integer, default=1000)
        parser.add_argument("--seed", type=_integer, default=0)
        parser.add_argument("--format", choices=[f.value for f in OutputFormat])
        parser.add_argument("--out", help="write to this path instead of stdout")
        parser.add_argument("--glauber", action="store_true", help="sample with heat-bath dynamics")
        parser.add_argument("--allow-out-of-range", action="store_true")

    def handle(self, *args, **options):
        try:
            config = self._config(options)
            result = run(config)
        except CurieWeissError as ex:
            raise CommandError(str(ex), returncode=2) from ex

        self._emit(result.text, config.output_path)
        if result.summary:
            self.stderr.write(result.summary)
        if result.exit_status:
            raise CommandError(result.summary or "verification failed", returncode=result.exit_status)

    def _config(self, options) -> RunConfig:
        subcommand = Subcommand(options["subcommand"])
        n_list = tuple(options["n"]) if options["n"] else None
        x = options["x"]

        params = None
        if subcommand in (Subcommand.EXACT_TAIL, Subcommand.SAMPLE):
            if not n_list or len(n_list) != 1:
                raise CommandError(f"{subcommand.value} needs exactly one --n", returncode=2)
            params = ModelParams(n_list[0], options["beta"], options["h"])

        x_grid = x_values = None
        if subcommand in (Subcommand.EXACT_TAIL, Subcommand.LIMIT_LAW):
            x_grid = GridSpec.from_values(x)
        elif x:
            x_values = tuple(x)

        checks = None
        if subcommand is Subcommand.VERIFY:
            if options["all"] == bool(options["check"]):
                raise CommandError("verify needs either --check <id> or --all", returncode=2)
            checks = tuple(options["check"]) if options["check"] else None

        default_format = OutputFormat.JSON if subcommand is Subcommand.VERIFY else OutputFormat.CSV
        return RunConfig(
            subcommand=subcommand,
            params=params,
            x_grid=x_grid,
            x_values=x_values,
            n_list=n_list,
            output_format=OutputFormat(options["format"]) if options["format"] else default_format,
            output_path=options["out"],
            seed=options["seed"],
            draws=options["draws"],
            sweeps=options["sweeps"],
            burn_in=options["burn_in"],
            glauber=options["glauber"],
            checks=checks,
            allow_out_of_range=options["allow_out_of_range"],
        )

    def _emit(self, text: str, path: str | None) -> None:
        if path is None:
            self.stdout.write(text, ending="")
            return
        try:
            with open(path, "w", encoding="utf-8", newline="") as output:
                output.write(text)
        except OSError as ex:
            raise CommandError(f"cannot write {path}: {ex}", returncode=2) from ex
        logger.info("Wrote %s", path)
