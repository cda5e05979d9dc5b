import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml
from rest_framework.exceptions import ValidationError

from apps.experiments.serializers import AUTO, ExperimentSerializer
from utils.exceptions import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetConfig:
    kind: str = "synthetic"
    n1: int = None
    n2: int = None
    k: int = 5
    sigma: float = 0.0
    repeated: int = 0
    scale: float = 10.0
    seed: int = None
    path: str = None
    window_k: int = None
    window_eps: float = None

    @property
    def is_synthetic(self):
        return self.kind == "synthetic"


@dataclass(frozen=True)
class AlgorithmConfig:
    """
    One arm of the sweep.

    Attributes:
        name (str): Algorithm name, one of the serializer's ALGORITHMS.
        params (dict): Validated parameters; ``s`` and ``k`` may be ``"auto"``.
        label (str | None): Name of the arm in result rows. Defaults to the
            algorithm name, with ``_wr`` appended when drawing with
            replacement.
    """

    name: str
    params: dict = field(default_factory=dict)
    label: str = None

    def __post_init__(self):
        if self.label is None:
            suffix = "_wr" if self.params.get("with_replacement") else ""
            object.__setattr__(self, "label", self.name + suffix)

    def get(self, key, default=None):
        return self.params.get(key, default)

    def resolve(self, rank):
        """Parameters with every ``"auto"`` replaced by ``rank``."""
        resolved = dict(self.params)
        for key in ("s", "k"):
            if resolved.get(key) == AUTO:
                resolved[key] = rank
        return resolved


@dataclass(frozen=True)
class ExperimentConfig:
    """
    A validated experiment: dataset, algorithm arms and the trial protocol.
    """

    dataset: DatasetConfig
    algorithms: tuple
    missing_rates: tuple = (1.0,)
    trials: int = 8
    seed_base: int = 0
    output: str = None
    ranks: tuple = ()
    repeated: tuple = ()
    compare_uniform: bool = False

    def __post_init__(self):
        object.__setattr__(self, "algorithms", _unique_labels(self.algorithms))

    @property
    def rank_values(self):
        """Ranks swept by the run; a single ``None`` when the rank is unknown."""
        if self.ranks:
            return self.ranks
        if self.dataset.is_synthetic and self.dataset.k > 0:
            return (self.dataset.k,)
        return (None,)

    @property
    def repeated_values(self):
        """Repeated-column counts swept by the run; ``None`` for file datasets."""
        if self.repeated:
            return self.repeated
        if self.dataset.is_synthetic:
            return (self.dataset.repeated,)
        return (None,)

    def with_uniform(self):
        """
        Copy of the config with a uniform arm for each distinct s value.

        Arms already named ``uniform`` are kept and their s values skipped.
        """

        covered = {arm.get("s") for arm in self.algorithms if arm.name == "uniform"}
        added = []
        for arm in self.algorithms:
            s = arm.get("s")
            if s is None or s in covered:
                continue
            covered.add(s)
            added.append(AlgorithmConfig("uniform", {"s": s}, label=f"uniform_s{s}"))
        return replace(self, algorithms=self.algorithms + tuple(added))


def _unique_labels(arms):
    taken = set()
    labelled = []
    for arm in arms:
        label, count = arm.label, 1
        while label in taken:
            count += 1
            label = f"{arm.label}_{count}"
        taken.add(label)
        labelled.append(arm if label == arm.label else replace(arm, label=label))
    return tuple(labelled)


def _algorithm(params):
    params = dict(params)
    label = params.pop("label", None)
    return AlgorithmConfig(params.pop("name"), params, label)


def parse_config(data, alpha=None, trials=None, seed=None, out=None):
    """
    Validate a configuration mapping and apply command-line overrides.

    Args:
        data (dict): Parsed configuration document.
        alpha (list[float] | None): Replaces ``missing_rates``.
        trials (int | None): Replaces ``trials``.
        seed (int | None): Replaces ``seed_base``.
        out (str | None): Replaces ``output``.

    Returns:
        ExperimentConfig: The validated configuration.

    Raises:
        ConfigError: If the document fails validation.
    """

    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping at the top level")

    data = dict(data)
    overrides = {
        "missing_rates": alpha,
        "trials": trials,
        "seed_base": seed,
        "output": out,
    }
    data.update({key: value for key, value in overrides.items() if value is not None})

    serializer = ExperimentSerializer(data=data)
    try:
        serializer.is_valid(raise_exception=True)
    except ValidationError as error:
        raise ConfigError(
            f"invalid configuration: {error.detail}", error.detail
        ) from error

    validated = serializer.validated_data
    config = ExperimentConfig(
        dataset=DatasetConfig(**validated["dataset"]),
        algorithms=tuple(_algorithm(params) for params in validated["algorithms"]),
        missing_rates=tuple(validated["missing_rates"]),
        trials=validated["trials"],
        seed_base=validated["seed_base"],
        output=validated["output"],
        ranks=tuple(validated["ranks"]),
        repeated=tuple(validated["repeated"]),
        compare_uniform=validated["compare_uniform"],
    )
    if config.compare_uniform:
        config = config.with_uniform()
    logger.debug(
        f"Loaded config with {len(config.algorithms)} algorithms, "
        f"{len(config.missing_rates)} missing rates, {config.trials} trials"
    )
    return config


def load_config(path, **overrides):
    """
    Read a YAML experiment configuration from ``path``.

    Raises:
        ConfigError: If the file is missing, is not valid YAML or fails
            validation.
    """

    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except FileNotFoundError as error:
        raise ConfigError(f"configuration file {path} does not exist") from error
    except yaml.YAMLError as error:
        raise ConfigError(
            f"configuration file {path} is not valid YAML: {error}"
        ) from error
    return parse_config(data or {}, **overrides)
