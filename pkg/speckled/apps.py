from django.apps import AppConfig


class SpeckledConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'speckled'
    verbose_name = 'Speckled valuations'
