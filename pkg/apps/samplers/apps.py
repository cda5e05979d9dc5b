from django.apps import AppConfig


class SamplersConfig(AppConfig):
    name = "apps.samplers"
    verbose_name = "Samplers"
