from django.apps import AppConfig


class DatagenConfig(AppConfig):
    name = "apps.datagen"
    verbose_name = "Data Generation"
