from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    "RANK_TOL": 1e-10,
    "PINV_TOL": 1e-10,
    "DEFAULT_TRIALS": 8,
    "DEFAULT_JOBS": 1,
    "GROUP_LASSO_GRID": 20,
    "VOLUME_MAX_COLUMNS": 12,
    "VOLUME_MAX_K": 4,
}


def css_setting(name):
    """
    Look up a library default from ``settings.COLUMN_SELECTION``.

    The numerical apps are usable without a configured Django project, in
    which case the built-in ``DEFAULTS`` are returned.

    Args:
        name (str): Key of the setting, e.g. ``"RANK_TOL"``.

    Returns:
        The configured value or its default.
    """

    try:
        overrides = getattr(settings, "COLUMN_SELECTION", {})
    except ImproperlyConfigured:
        overrides = {}
    return overrides.get(name, DEFAULTS[name])
