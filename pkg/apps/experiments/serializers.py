from rest_framework import serializers

from apps.oracle.oracle import INDEX_MODES
from utils.conf import css_setting

AUTO = "auto"
ALGORITHMS = ("norm", "iter_norm", "lev_score", "block_omp", "group_lasso", "uniform")
DATASET_KINDS = ("synthetic", "dense", "sign", "genotype", "image")
FILE_KINDS = ("dense", "sign", "genotype", "image")
WINDOW_KINDS = ("sign", "genotype")
LABEL_PATTERN = r"^[A-Za-z0-9_.-]+$"

NEEDS_S = ("norm", "lev_score", "block_omp", "group_lasso", "uniform")
NEEDS_K = ("iter_norm", "lev_score")


class AutoIntegerField(serializers.Field):
    """
    Positive integer or the literal ``"auto"``, resolved later to the
    dataset rank.
    """

    default_error_messages = {
        "invalid": "Expected a positive integer or 'auto'.",
    }

    def to_internal_value(self, data):
        if data == AUTO:
            return AUTO
        if isinstance(data, int) and not isinstance(data, bool):
            value = data
        elif isinstance(data, str) and data.strip().isdigit():
            value = int(data)
        else:
            self.fail("invalid")
        if value < 1:
            self.fail("invalid")
        return value

    def to_representation(self, value):
        return value


class DatasetSerializer(serializers.Serializer):
    """
    Serializer for the dataset section of an experiment configuration.

    Synthetic datasets are generated per trial from n1, n2, k, sigma, repeated
    and scale (a positive ``repeated`` selects the coherent design). File
    datasets are read once from ``path``. Sign and genotype data may carry
    ``window_k``/``window_eps`` to run on the widest near rank-k window.
    """

    kind = serializers.ChoiceField(choices=DATASET_KINDS, default="synthetic")
    n1 = serializers.IntegerField(min_value=1, required=False)
    n2 = serializers.IntegerField(min_value=1, required=False)
    k = serializers.IntegerField(min_value=0, default=5)
    sigma = serializers.FloatField(min_value=0.0, default=0.0)
    repeated = serializers.IntegerField(min_value=0, default=0)
    scale = serializers.FloatField(min_value=0.0, default=10.0)
    seed = serializers.IntegerField(required=False, allow_null=True, default=None)
    path = serializers.CharField(required=False)
    window_k = serializers.IntegerField(min_value=1, required=False)
    window_eps = serializers.FloatField(required=False)

    def validate(self, attrs):
        kind = attrs["kind"]
        if kind == "synthetic":
            missing = [name for name in ("n1", "n2") if name not in attrs]
            if missing:
                raise serializers.ValidationError(
                    {name: "Required for synthetic datasets." for name in missing}
                )
            if attrs["k"] > min(attrs["n1"], attrs["n2"]):
                raise serializers.ValidationError({"k": "Exceeds min(n1, n2)."})
            if attrs["repeated"] >= attrs["n2"]:
                raise serializers.ValidationError({"repeated": "Must be below n2."})
        elif "path" not in attrs:
            raise serializers.ValidationError({"path": f"Required for {kind} data."})

        windowed = "window_k" in attrs or "window_eps" in attrs
        if windowed and kind not in WINDOW_KINDS:
            raise serializers.ValidationError(
                {"window_k": f"Windows apply to {', '.join(WINDOW_KINDS)} data."}
            )
        if windowed and not ("window_k" in attrs and "window_eps" in attrs):
            raise serializers.ValidationError(
                {"window_eps": "window_k and window_eps go together."}
            )
        if "window_eps" in attrs and not 0 < attrs["window_eps"] < 1:
            raise serializers.ValidationError({"window_eps": "Must lie in (0, 1)."})
        return attrs


class AlgorithmSerializer(serializers.Serializer):
    """
    Serializer for one algorithm arm.

    Expected sample counts (m, m1, m2) default to α·n1 at run time. The
    group-Lasso weight is given as ``lambda``; without it a λ grid is searched.
    """

    name = serializers.ChoiceField(choices=ALGORITHMS)
    label = serializers.RegexField(LABEL_PATTERN, max_length=40, required=False)
    s = AutoIntegerField(required=False)
    k = AutoIntegerField(required=False)
    m = serializers.FloatField(min_value=0.0, required=False)
    m1 = serializers.FloatField(min_value=1.0, required=False)
    m2 = serializers.FloatField(min_value=1.0, required=False)
    epsilon = serializers.FloatField(min_value=0.0, default=0.5)
    delta = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.5)
    final_delta = serializers.FloatField(min_value=0.0, max_value=1.0, required=False)
    phase2 = serializers.BooleanField(default=False)
    rounds = serializers.IntegerField(min_value=1, required=False)
    batch_sizes = serializers.ListField(
        child=serializers.IntegerField(min_value=1), required=False
    )
    with_replacement = serializers.BooleanField(default=False)
    index_mode = serializers.ChoiceField(choices=INDEX_MODES, default="bernoulli")
    max_iters = serializers.IntegerField(min_value=1, default=5000)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.fields["lambda"] = serializers.FloatField(min_value=0.0, required=False)

    def validate(self, attrs):
        name = attrs["name"]
        errors = {}
        if name in NEEDS_S and "s" not in attrs:
            errors["s"] = f"Required by {name}."
        if name in NEEDS_K and "k" not in attrs:
            errors["k"] = f"Required by {name}."
        if name == "iter_norm" and attrs.get("phase2") and attrs.get("epsilon") == 0:
            errors["epsilon"] = "Must be positive when phase2 is enabled."
        if "batch_sizes" in attrs and "rounds" in attrs:
            if len(attrs["batch_sizes"]) != attrs["rounds"]:
                errors["batch_sizes"] = "Needs one size per round."
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class ExperimentSerializer(serializers.Serializer):
    """
    Serializer for a whole experiment configuration.

    Attributes:
        dataset (DatasetSerializer): What matrix the trials run on.
        algorithms (AlgorithmSerializer): Arms of the sweep, at least one.
        missing_rates (list[float]): Observation rates α in (0, 1].
        trials (int): Repetitions per (algorithm, α).
        seed_base (int): Trial t runs with seed seed_base + t.
        output (str | None): CSV destination, stdout when unset.
        ranks (list[int]): Optional rank sweep for synthetic datasets.
        repeated (list[int]): Optional sweep over the number of repeated
            columns of a synthetic dataset, 0 for the plain low-rank design.
        compare_uniform (bool): Add a uniform sampling arm per distinct s.
    """

    dataset = DatasetSerializer()
    algorithms = AlgorithmSerializer(many=True, allow_empty=False)
    missing_rates = serializers.ListField(
        child=serializers.FloatField(), allow_empty=False, default=lambda: [1.0]
    )
    trials = serializers.IntegerField(
        min_value=1, default=lambda: css_setting("DEFAULT_TRIALS")
    )
    seed_base = serializers.IntegerField(min_value=0, default=0)
    output = serializers.CharField(required=False, allow_null=True, default=None)
    ranks = serializers.ListField(
        child=serializers.IntegerField(min_value=1), required=False, default=list
    )
    repeated = serializers.ListField(
        child=serializers.IntegerField(min_value=0), required=False, default=list
    )
    compare_uniform = serializers.BooleanField(default=False)

    def validate_missing_rates(self, value):
        for alpha in value:
            if not 0.0 < alpha <= 1.0:
                raise serializers.ValidationError(f"alpha {alpha} outside (0, 1].")
        return value

    def validate(self, attrs):
        dataset = attrs["dataset"]
        if attrs["ranks"] and dataset["kind"] != "synthetic":
            raise serializers.ValidationError(
                {"ranks": "A rank sweep needs a synthetic dataset."}
            )
        if attrs["repeated"] and dataset["kind"] != "synthetic":
            raise serializers.ValidationError(
                {"repeated": "A repeated-column sweep needs a synthetic dataset."}
            )

        rank_known = dataset["kind"] == "synthetic" and (
            attrs["ranks"] or dataset["k"] > 0
        )
        uses_auto = any(
            algorithm.get(key) == AUTO
            for algorithm in attrs["algorithms"]
            for key in ("s", "k")
        )
        if uses_auto and not rank_known:
            raise serializers.ValidationError(
                {"algorithms": "'auto' needs a synthetic dataset of known rank."}
            )

        if dataset["kind"] == "synthetic":
            widest = dataset["n2"]
            ranks = attrs["ranks"] or [dataset["k"]]
            if max(ranks) > min(dataset["n1"], dataset["n2"]):
                raise serializers.ValidationError({"ranks": "Exceeds min(n1, n2)."})
            if any(count >= dataset["n2"] for count in attrs["repeated"]):
                raise serializers.ValidationError({"repeated": "Must be below n2."})
            for algorithm in attrs["algorithms"]:
                s = algorithm.get("s")
                if algorithm["with_replacement"] or s in (None, AUTO):
                    continue
                if s > widest:
                    raise serializers.ValidationError(
                        {"algorithms": f"{algorithm['name']}: s={s} exceeds n2."}
                    )
        return attrs
