from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from apps.datagen.loaders import (
    load_dense_matrix,
    load_genotypes,
    load_grayscale,
    load_sign_matrix,
)
from apps.datagen.synthetic import normalize_frobenius
from apps.metrics.errors import error_report
from utils.exceptions import ColumnSelectionError
from utils.mixins import LoggingMixin

LOADERS = {
    "dense": load_dense_matrix,
    "sign": load_sign_matrix,
    "genotype": load_genotypes,
    "image": load_grayscale,
}


def parse_columns(text):
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as error:
        raise CommandError(f"--columns must be integers: {error}") from error


class Command(LoggingMixin, BaseCommand):
    help = (
        "Print the error report of a column selection of a matrix file. "
        "PGM images are scaled to [0, 1] and Frobenius-normalized."
    )

    def add_arguments(self, parser):
        parser.add_argument("--matrix", required=True, help="Matrix file")
        parser.add_argument(
            "--columns", required=True, help="Comma separated column indices"
        )
        parser.add_argument(
            "--kind",
            choices=sorted(LOADERS),
            help="File format, inferred from the suffix when omitted",
        )
        parser.add_argument(
            "--k", type=int, help="Rank of the oracle error, defaults to |C|"
        )

    def handle(self, *args, **options):
        path = Path(options["matrix"])
        kind = options["kind"]
        if kind is None:
            kind = "image" if path.suffix.lower() == ".pgm" else "dense"
        columns = parse_columns(options["columns"])
        if not columns:
            raise CommandError("--columns selects no column")
        k = len(columns) if options["k"] is None else options["k"]

        try:
            matrix = LOADERS[kind](path)
            if kind == "image":
                matrix = normalize_frobenius(matrix)
            report = error_report(matrix, columns, k)
        except FileNotFoundError as error:
            raise CommandError(f"{path} does not exist") from error
        except ColumnSelectionError as error:
            raise CommandError(str(error)) from error

        for name, value in report.as_dict().items():
            if value is not None:
                self.stdout.write(f"{name}: {value!r}")
