from django.db import models

# =========================================================
# BITÁCORA DE CORRIDAS
# =========================================================

class Corrida(models.Model):
    """Una invocación de un comando del motor guardada con --guardar."""
    COMANDO_SOLVE = "solve"
    COMANDO_CHECK_GRC = "check_grc"
    COMANDO_VERIFY = "verify"
    COMANDO_ORACLE = "oracle"
    COMANDO_CHOICES = [
        (COMANDO_SOLVE, "Punto fijo"),
        (COMANDO_CHECK_GRC, "Condición de alcanzabilidad"),
        (COMANDO_VERIFY, "Verificación de correspondencia"),
        (COMANDO_ORACLE, "Oráculo de fuerza bruta"),
    ]

    comando = models.CharField(max_length=20, choices=COMANDO_CHOICES)
    instancia = models.CharField(max_length=40, blank=True)
    modelo = models.CharField("Archivo del modelo", max_length=500)
    codigo_salida = models.PositiveSmallIntegerField(default=0)
    resultado = models.JSONField(default=dict, blank=True)
    creado = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = "Corrida"
        verbose_name_plural = "Corridas"
        ordering = ["-creado", "-id"]

    def __str__(self):
        return f"{self.get_comando_display()} · {self.instancia or '-'} ({self.codigo_salida})"

    @property
    def exitosa(self) -> bool:
        return self.codigo_salida == 0
