from django.apps import AppConfig


class ValcoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'valcore'
    verbose_name = 'Valuation core'
