from pathlib import Path

import yaml
from django.core.management.base import BaseCommand, CommandError

from apps.datagen.loaders import save_dense_matrix
from apps.datagen.synthetic import SyntheticSpec, gen_coherent, gen_lowrank_noise
from apps.experiments.serializers import DatasetSerializer
from utils.mixins import LoggingMixin

SPEC_FIELDS = ("n1", "n2", "k", "sigma", "repeated", "scale", "seed")


def read_spec(text):
    """
    Synthetic spec from a YAML file, or inline ``key=value`` pairs joined by
    commas such as ``n1=50,n2=50,k=5,sigma=0.1``.
    """

    path = Path(text)
    if path.is_file():
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        return data.get("dataset", data) if isinstance(data, dict) else data

    data = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, separator, value = item.partition("=")
        if not separator:
            raise CommandError(f"expected key=value, got {item!r}", returncode=2)
        data[key.strip()] = yaml.safe_load(value)
    return data


class Command(LoggingMixin, BaseCommand):
    help = "Generate a seeded synthetic matrix in the dense text format"

    def add_arguments(self, parser):
        parser.add_argument("spec", help="YAML file or n1=..,n2=..,k=.. pairs")
        parser.add_argument("--out", required=True, help="Destination file")
        parser.add_argument("--seed", type=int, help="Overrides the spec seed")

    def handle(self, *args, **options):
        data = read_spec(options["spec"])
        if not isinstance(data, dict):
            raise CommandError("synthetic spec must be a mapping", returncode=2)
        data = {"kind": "synthetic", **data}
        if options["seed"] is not None:
            data["seed"] = options["seed"]

        serializer = DatasetSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(f"invalid spec: {serializer.errors}", returncode=2)
        if serializer.validated_data["kind"] != "synthetic":
            raise CommandError("css gen only generates synthetic data", returncode=2)

        validated = serializer.validated_data
        spec = SyntheticSpec(**{name: validated[name] for name in SPEC_FIELDS})
        matrix = gen_coherent(spec) if spec.repeated else gen_lowrank_noise(spec)
        save_dense_matrix(matrix, options["out"])
        self.stdout.write(
            self.style.SUCCESS(
                f"Wrote {spec.n1}x{spec.n2} matrix (k={spec.k}, sigma={spec.sigma}) "
                f"to {options['out']}"
            )
        )
