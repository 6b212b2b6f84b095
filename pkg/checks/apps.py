from django.apps import AppConfig


class ChecksConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'checks'
    verbose_name = 'Substitute checks'
