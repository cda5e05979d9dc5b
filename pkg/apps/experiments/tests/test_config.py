import pytest

from apps.experiments.config import AlgorithmConfig, load_config, parse_config
from utils.exceptions import ConfigError


class TestParseConfig:
    def test_defaults(self):
        config = parse_config(
            {
                "dataset": {"n1": 10, "n2": 12},
                "algorithms": [{"name": "uniform", "s": 3}],
            }
        )

        assert config.dataset.kind == "synthetic"
        assert config.dataset.k == 5
        assert config.missing_rates == (1.0,)
        assert config.trials == 8
        assert config.seed_base == 0
        assert config.output is None
        assert config.rank_values == (5,)
        assert config.algorithms[0].name == "uniform"
        assert config.algorithms[0].get("s") == 3

    def test_overrides(self, synthetic_config):
        config = parse_config(
            synthetic_config, alpha=[0.25], trials=3, seed=7, out="run.csv"
        )

        assert config.missing_rates == (0.25,)
        assert config.trials == 3
        assert config.seed_base == 7
        assert config.output == "run.csv"

    def test_auto_resolves_to_rank(self, synthetic_config):
        config = parse_config(synthetic_config)
        arm = config.algorithms[1]

        assert arm.get("k") == "auto"
        assert arm.resolve(3)["k"] == 3

    def test_lambda_key(self, synthetic_config):
        synthetic_config["algorithms"] = [
            {"name": "group_lasso", "s": 4, "lambda": 0.1}
        ]

        assert parse_config(synthetic_config).algorithms[0].get("lambda") == 0.1

    def test_rank_sweep(self, synthetic_config):
        synthetic_config["ranks"] = [2, 4]

        assert parse_config(synthetic_config).rank_values == (2, 4)

    def test_file_dataset_has_unknown_rank(self, diag_config):
        config = parse_config(diag_config({"name": "uniform", "s": 1}))

        assert config.rank_values == (None,)
        assert not config.dataset.is_synthetic

    @pytest.mark.parametrize(
        "algorithm",
        [
            {"name": "norm", "s": 0},
            {"name": "norm"},
            {"name": "iter_norm"},
            {"name": "lev_score", "k": 2},
            {"name": "norm", "s": 21},
            {"name": "norm", "s": "many"},
            {"name": "svd", "s": 2},
            {"name": "iter_norm", "k": 2, "rounds": 2, "batch_sizes": [1]},
            {"name": "norm", "s": 2, "label": "norm with spaces"},
        ],
    )
    def test_invalid_algorithm(self, synthetic_config, algorithm):
        synthetic_config["algorithms"] = [algorithm]

        with pytest.raises(ConfigError) as info:
            parse_config(synthetic_config)

        assert "algorithms" in info.value.errors

    def test_with_replacement_allows_large_s(self, synthetic_config):
        synthetic_config["algorithms"] = [
            {"name": "norm", "s": 40, "with_replacement": True}
        ]

        assert parse_config(synthetic_config).algorithms[0].get("s") == 40

    @pytest.mark.parametrize("alpha", [0.0, 1.5])
    def test_alpha_outside_unit_interval(self, synthetic_config, alpha):
        with pytest.raises(ConfigError):
            parse_config(synthetic_config, alpha=[alpha])

    def test_auto_needs_known_rank(self, diag_config):
        with pytest.raises(ConfigError):
            parse_config(diag_config({"name": "iter_norm", "k": "auto"}))

    def test_ranks_need_synthetic_data(self, diag_config):
        with pytest.raises(ConfigError):
            parse_config(diag_config({"name": "uniform", "s": 1}, ranks=[1]))

    @pytest.mark.parametrize(
        "dataset",
        [
            {"kind": "synthetic", "n1": 5},
            {"kind": "synthetic", "n1": 5, "n2": 5, "k": 6},
            {"kind": "dense"},
            {"kind": "dense", "path": "m.txt", "window_k": 2, "window_eps": 0.1},
            {"kind": "sign", "path": "m.txt", "window_k": 2},
            {"kind": "sign", "path": "m.txt", "window_k": 2, "window_eps": 1.5},
        ],
    )
    def test_invalid_dataset(self, dataset):
        with pytest.raises(ConfigError) as info:
            parse_config(
                {"dataset": dataset, "algorithms": [{"name": "uniform", "s": 1}]}
            )

        assert "dataset" in info.value.errors

    def test_not_a_mapping(self):
        with pytest.raises(ConfigError):
            parse_config(["norm"])


class TestArmLabels:
    def test_labels_default_to_algorithm_name(self, synthetic_config):
        labels = [arm.label for arm in parse_config(synthetic_config).algorithms]

        assert labels == ["norm", "iter_norm", "lev_score"]

    def test_with_replacement_suffix(self, synthetic_config):
        synthetic_config["algorithms"] = [
            {"name": "norm", "s": 5},
            {"name": "norm", "s": 5, "with_replacement": True},
        ]
        labels = [arm.label for arm in parse_config(synthetic_config).algorithms]

        assert labels == ["norm", "norm_wr"]

    def test_explicit_label_is_not_a_parameter(self, synthetic_config):
        synthetic_config["algorithms"] = [{"name": "norm", "s": 5, "label": "coarse"}]
        (arm,) = parse_config(synthetic_config).algorithms

        assert arm.label == "coarse"
        assert "label" not in arm.params

    def test_duplicates_are_numbered(self, synthetic_config):
        synthetic_config["algorithms"] = [
            {"name": "norm", "s": 5},
            {"name": "norm", "s": 8},
            {"name": "norm", "s": 9, "label": "norm_2"},
        ]
        labels = [arm.label for arm in parse_config(synthetic_config).algorithms]

        assert labels == ["norm", "norm_2", "norm_2_2"]


class TestRepeatedSweep:
    def test_defaults_to_dataset_value(self, synthetic_config):
        synthetic_config["dataset"]["repeated"] = 4

        assert parse_config(synthetic_config).repeated_values == (4,)

    def test_sweep_values(self, synthetic_config):
        synthetic_config["repeated"] = [0, 5, 10]

        assert parse_config(synthetic_config).repeated_values == (0, 5, 10)

    def test_file_dataset_has_no_repeated_axis(self, diag_config):
        config = parse_config(diag_config({"name": "uniform", "s": 1}))

        assert config.repeated_values == (None,)

    def test_needs_synthetic_data(self, diag_config):
        with pytest.raises(ConfigError) as info:
            parse_config(diag_config({"name": "uniform", "s": 1}, repeated=[2]))

        assert "repeated" in info.value.errors

    def test_must_stay_below_n2(self, synthetic_config):
        synthetic_config["repeated"] = [0, 20]

        with pytest.raises(ConfigError) as info:
            parse_config(synthetic_config)

        assert "repeated" in info.value.errors


class TestWithUniform:
    def test_one_arm_per_distinct_s(self, synthetic_config):
        config = parse_config(synthetic_config).with_uniform()
        uniform = [arm for arm in config.algorithms if arm.name == "uniform"]

        assert uniform == [AlgorithmConfig("uniform", {"s": 5}, label="uniform_s5")]

    def test_compare_uniform_flag(self, synthetic_config):
        synthetic_config["compare_uniform"] = True
        names = [arm.name for arm in parse_config(synthetic_config).algorithms]

        assert names == ["norm", "iter_norm", "lev_score", "uniform"]


class TestLoadConfig:
    def test_yaml_file(self, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text(
            "dataset:\n  n1: 8\n  n2: 8\n  k: 2\n"
            "algorithms:\n  - name: norm\n    s: auto\n"
            "missing_rates: [0.5]\n",
            encoding="utf-8",
        )
        config = load_config(path, trials=1)

        assert config.trials == 1
        assert config.missing_rates == (0.5,)
        assert config.algorithms[0].resolve(2)["s"] == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("dataset: [unclosed\n", encoding="utf-8")

        with pytest.raises(ConfigError):
            load_config(path)
