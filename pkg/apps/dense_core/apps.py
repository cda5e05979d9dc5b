from django.apps import AppConfig


class DenseCoreConfig(AppConfig):
    name = "apps.dense_core"
    verbose_name = "Dense Core"
