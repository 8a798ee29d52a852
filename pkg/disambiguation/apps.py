from django.apps import AppConfig


class DisambiguationConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "disambiguation"
