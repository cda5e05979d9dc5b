import csv
import io

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.datagen.loaders import load_dense_matrix
from custom_commands.cli import main

RUN_CONFIG = """
dataset:
  kind: synthetic
  n1: 12
  n2: 12
  k: 2
  sigma: 0.05
algorithms:
  - name: norm
    s: auto
  - name: block_omp
    s: 3
missing_rates: [0.5]
trials: 2
"""


@pytest.fixture
def run_config(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(RUN_CONFIG, encoding="utf-8")
    return str(path)


def run(name, *args):
    stdout = io.StringIO()
    call_command(name, *args, stdout=stdout)
    return stdout.getvalue()


class TestCssRun:
    def test_writes_csv_file(self, run_config, tmp_path):
        out = tmp_path / "results" / "run.csv"
        message = run("css_run", run_config, "--out", str(out), "--jobs", "2")

        assert f"Wrote 4 rows to {out} (0 failed)" in message
        body = out.read_text(encoding="utf-8").split("# summary\n")[0]
        rows = list(csv.DictReader(io.StringIO(body)))
        assert [row["algorithm"] for row in rows] == ["norm"] * 2 + ["block_omp"] * 2
        assert {row["s"] for row in rows} == {"2", "3"}

    def test_overrides_and_stdout(self, run_config):
        output = run(
            "css_run",
            run_config,
            *("--trials", "1", "--alpha", "0.5", "1.0", "--seed", "5"),
        )
        body = output.split("# summary\n")[0]
        rows = list(csv.DictReader(io.StringIO(body)))

        assert len(rows) == 4
        assert {row["seed"] for row in rows} == {"5"}
        assert [row["alpha"] for row in rows] == ["0.5", "1.0", "0.5", "1.0"]

    def test_compare_uniform(self, run_config):
        output = run("css_run", run_config, "--trials", "1", "--compare-uniform")
        body = output.split("# summary\n")[0]
        names = [row["algorithm"] for row in csv.DictReader(io.StringIO(body))]

        assert names == ["norm", "block_omp", "uniform", "uniform"]

    def test_missing_config(self, tmp_path):
        with pytest.raises(CommandError) as info:
            run("css_run", str(tmp_path / "absent.yaml"))

        assert info.value.returncode == 2

    def test_invalid_jobs(self, run_config):
        with pytest.raises(CommandError) as info:
            run("css_run", run_config, "--jobs", "0")

        assert info.value.returncode == 2


class TestCssGenAndEval:
    def test_generate_then_evaluate(self, tmp_path):
        path = tmp_path / "m.txt"
        message = run("css_gen", "n1=10,n2=8,k=2,sigma=0", "--out", str(path))

        assert "Wrote 10x8 matrix" in message
        assert load_dense_matrix(path).shape == (10, 8)

        report = run("css_eval", "--matrix", str(path), "--columns", "0,1", "--k", "2")
        values = dict(line.split(": ") for line in report.strip().splitlines())
        assert float(values["selection_error"]) <= 1e-8
        assert float(values["oracle_error"]) <= 1e-8
        assert "reconstruction_error" not in values

    def test_generate_from_yaml(self, tmp_path):
        spec = tmp_path / "spec.yaml"
        spec.write_text(
            "dataset:\n  n1: 6\n  n2: 9\n  k: 2\n  repeated: 3\n", encoding="utf-8"
        )
        path = tmp_path / "coherent.txt"
        run("css_gen", str(spec), "--out", str(path), "--seed", "4")

        assert load_dense_matrix(path).shape == (6, 9)

    @pytest.mark.parametrize("spec", ["n1=10,n2", "n1=4,n2=4,k=9", "kind=dense"])
    def test_invalid_spec(self, tmp_path, spec):
        with pytest.raises(CommandError) as info:
            run("css_gen", spec, "--out", str(tmp_path / "m.txt"))

        assert info.value.returncode == 2

    def test_eval_rejects_bad_columns(self, tmp_path):
        path = tmp_path / "m.txt"
        run("css_gen", "n1=4,n2=4,k=1", "--out", str(path))

        with pytest.raises(CommandError):
            run("css_eval", "--matrix", str(path), "--columns", "0,x")
        with pytest.raises(CommandError):
            run("css_eval", "--matrix", str(path), "--columns", "7")

    def test_eval_missing_matrix(self, tmp_path):
        with pytest.raises(CommandError):
            run("css_eval", "--matrix", str(tmp_path / "absent.txt"), "--columns", "0")


class TestCli:
    def test_usage(self, capsys):
        assert main([]) == 0
        assert "usage: css" in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        assert main(["fit"]) == 2
        assert "unknown command 'fit'" in capsys.readouterr().err

    def test_dispatches_to_management_command(self, tmp_path):
        path = tmp_path / "m.txt"

        assert main(["gen", "n1=5,n2=5,k=1", "--out", str(path)]) == 0
        assert load_dense_matrix(path).shape == (5, 5)
