from django.contrib import admin
from unfold.admin import ModelAdmin

from .models import Corrida


@admin.register(Corrida)
class CorridaAdmin(ModelAdmin):
    list_display = ("id", "comando", "instancia", "modelo", "codigo_salida", "exitosa", "creado")
    list_filter = ("comando", "instancia", "codigo_salida")
    list_filter_submit = True
    search_fields = ("modelo", "instancia")
    readonly_fields = ("comando", "instancia", "modelo", "codigo_salida", "resultado", "creado")
    ordering = ("-creado", "-id")

    fieldsets = (
        ("Invocación", {
            "fields": ("comando", "instancia", "modelo", "creado")
        }),
        ("Resultado", {
            "fields": ("codigo_salida", "resultado"),
        }),
    )

    def has_add_permission(self, request):
        # Las corridas sólo las crean los comandos
        return False

    @admin.display(boolean=True, description="Exitosa", ordering="codigo_salida")
    def exitosa(self, obj):
        return obj.exitosa
