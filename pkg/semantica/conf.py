# semantica/conf.py
import os
from django.conf import settings

# Valores de respaldo si el proyecto no declara settings.SEMANTICA completo.
DEFAULTS = {
    "TOLERANCIA": 1e-6,
    "EPSILON_ITERACION": 1e-9,
    "MAX_ITERACIONES": 100_000,
    "TOPE_DIVERGENCIA": 1e12,
    "LIMITE_EXPLOSION": 200_000,
    "PRESUPUESTO_ORACULO": 2_000_000,
    "HORIZONTE_MDP": 200,
    "LONGITUD_MAXIMA": 4,
    "MUESTRAS": 500,
    "SEMILLA": 0,
}


def obtener(clave: str):
    """
    Devuelve el valor de configuración del motor.
    Prioridad: variable de entorno SEMANTICA_<CLAVE> > settings.SEMANTICA > DEFAULTS.
    """
    if clave not in DEFAULTS:
        raise KeyError(f"Clave de configuración desconocida: {clave}")

    por_defecto = DEFAULTS[clave]
    valor = getattr(settings, "SEMANTICA", {}).get(clave, por_defecto)

    if (crudo := os.getenv(f"SEMANTICA_{clave}")) is not None:
        # El tipo lo manda el valor por defecto (int o float)
        valor = type(por_defecto)(float(crudo)) if isinstance(por_defecto, int) else float(crudo)
    return valor
