from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.experiments.config import load_config
from apps.experiments.runner import (
    compare_baseline_uniform,
    run_experiment,
    write_results,
)
from utils.exceptions import ConfigError
from utils.mixins import LoggingMixin


class Command(LoggingMixin, BaseCommand):
    help = (
        "Run an experiment configuration and write one CSV row per "
        "(algorithm, alpha, trial) followed by a median summary. Relative "
        "output paths are placed under RESULTS_DIR."
    )

    def add_arguments(self, parser):
        parser.add_argument("config", help="YAML experiment configuration")
        parser.add_argument("--jobs", type=int, help="Concurrent trials")
        parser.add_argument("--seed", type=int, help="Overrides seed_base")
        parser.add_argument("--trials", type=int, help="Overrides trials")
        parser.add_argument(
            "--alpha", type=float, nargs="+", help="Overrides missing_rates"
        )
        parser.add_argument("--out", help="Overrides output")
        parser.add_argument(
            "--compare-uniform",
            action="store_true",
            help="Add a uniform column sampling arm for every s",
        )

    def handle(self, *args, **options):
        jobs = options["jobs"]
        if jobs is not None and jobs < 1:
            raise CommandError(f"--jobs must be at least 1, got {jobs}", returncode=2)

        try:
            config = load_config(
                options["config"],
                alpha=options["alpha"],
                trials=options["trials"],
                seed=options["seed"],
                out=options["out"],
            )
        except ConfigError as error:
            raise CommandError(str(error), returncode=2) from error

        if options["compare_uniform"]:
            rows = compare_baseline_uniform(config, jobs=jobs)
        else:
            rows = run_experiment(config, jobs=jobs)

        if not config.output:
            write_results(rows, self.stdout)
            return

        path = Path(config.output)
        if not path.is_absolute():
            path = Path(settings.RESULTS_DIR) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as stream:
            write_results(rows, stream)

        failed = sum(1 for row in rows if not row.ok)
        self.stdout.write(
            self.style.SUCCESS(f"Wrote {len(rows)} rows to {path} ({failed} failed)")
        )
