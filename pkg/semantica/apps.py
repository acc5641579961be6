from django.apps import AppConfig

class SemanticaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'semantica'
    verbose_name = 'Semánticas de Punto Fijo'
