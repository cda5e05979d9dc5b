import numpy as np
import pytest

from apps.datagen.loaders import save_dense_matrix


@pytest.fixture
def synthetic_config():
    return {
        "dataset": {"kind": "synthetic", "n1": 20, "n2": 20, "k": 3, "sigma": 0.05},
        "algorithms": [
            {"name": "norm", "s": 5},
            {"name": "iter_norm", "k": "auto"},
            {"name": "lev_score", "k": 3, "s": 5},
        ],
        "missing_rates": [0.5, 1.0],
        "trials": 2,
        "seed_base": 100,
    }


@pytest.fixture
def diag_file(tmp_path):
    path = tmp_path / "diag.txt"
    save_dense_matrix(np.diag([2.0, 1.0]), path)
    return str(path)


@pytest.fixture
def diag_config(diag_file):
    def _config(*algorithms, **extra):
        return {
            "dataset": {"kind": "dense", "path": diag_file},
            "algorithms": list(algorithms),
            "trials": 1,
            **extra,
        }

    return _config
