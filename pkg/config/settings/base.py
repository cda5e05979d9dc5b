import os
from pathlib import Path

# added extra .parent
BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = os.getenv("SECRET_KEY", "column-selection-has-no-sessions")

THIRD_PARTY_APPS = [
    "rest_framework",
]

LOCAL_APPS = [
    "apps.dense_core.apps.DenseCoreConfig",
    "apps.oracle.apps.OracleConfig",
    "apps.samplers.apps.SamplersConfig",
    "apps.baselines.apps.BaselinesConfig",
    "apps.metrics.apps.MetricsConfig",
    "apps.datagen.apps.DatagenConfig",
    "apps.experiments.apps.ExperimentsConfig",
]

INSTALLED_APPS = THIRD_PARTY_APPS + LOCAL_APPS + ["custom_commands"]

# The experiments keep their results in CSV files, no database is needed.
DATABASES = {}

USE_TZ = True

TIME_ZONE = "UTC"


def _env_float(name, default):
    value = os.getenv(name)
    return float(value) if value else default


def _env_int(name, default):
    value = os.getenv(name)
    return int(value) if value else default


# Numerical defaults shared by every app, see utils.conf.css_setting
COLUMN_SELECTION = {
    "RANK_TOL": _env_float("CSS_RANK_TOL", 1e-10),
    "PINV_TOL": _env_float("CSS_PINV_TOL", 1e-10),
    "DEFAULT_TRIALS": _env_int("CSS_DEFAULT_TRIALS", 8),
    "DEFAULT_JOBS": _env_int("CSS_DEFAULT_JOBS", 1),
    "GROUP_LASSO_GRID": _env_int("CSS_GROUP_LASSO_GRID", 20),
    "VOLUME_MAX_COLUMNS": _env_int("CSS_VOLUME_MAX_COLUMNS", 12),
    "VOLUME_MAX_K": _env_int("CSS_VOLUME_MAX_K", 4),
}

# logg settings

LOG_DIR = os.getenv("CSS_LOG_DIR", os.path.join(BASE_DIR, "logs"))
os.makedirs(LOG_DIR, exist_ok=True)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "level": os.getenv("CSS_CONSOLE_LOG_LEVEL", "WARNING"),
        },
        "file": {
            "class": "logging.FileHandler",
            "filename": os.path.join(LOG_DIR, "general.log"),
            "formatter": "verbose",
        },
        "error_file": {
            "class": "logging.FileHandler",
            "filename": os.path.join(LOG_DIR, "error.log"),
            "level": "ERROR",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "apps": {
            "handlers": ["console", "file", "error_file"],
            "level": os.getenv("CSS_LOG_LEVEL", "INFO"),
            "propagate": True,
        },
        "custom_commands": {
            "handlers": ["console", "file", "error_file"],
            "level": os.getenv("CSS_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
    "formatters": {
        "verbose": {
            "format": "{asctime} ({levelname})- {name}- {message}",
            "style": "{",
        }
    },
}

# Default location of CSV tables when neither the config nor --out names one
RESULTS_DIR = os.getenv("CSS_RESULTS_DIR", os.path.join(BASE_DIR, "results"))
