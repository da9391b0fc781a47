from django.apps import AppConfig


class ShearsConfig(AppConfig):
    name = 'apps.shears'
    verbose_name = 'Shear catalog'
