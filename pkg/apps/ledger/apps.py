from django.apps import AppConfig


class LedgerConfig(AppConfig):
    name = 'apps.ledger'
    verbose_name = 'Coefficient ledger'
