import json
import math

from semantica.sistemas import formatear_palabra

CIFRAS_SIGNIFICATIVAS = 12


def normalizar(valor):
    """
    Prepara un valor para JSON determinista:
    floats a 12 cifras significativas, infinitos como "inf", tuplas como listas.
    """
    if isinstance(valor, bool) or valor is None or isinstance(valor, (int, str)):
        return valor
    if isinstance(valor, float):
        if math.isinf(valor):
            return "inf"
        return float(format(valor, f".{CIFRAS_SIGNIFICATIVAS}g"))
    if isinstance(valor, dict):
        return {str(k): normalizar(v) for k, v in valor.items()}
    if isinstance(valor, (list, tuple)):
        return [normalizar(v) for v in valor]
    # ExtReal / ExtNat y cualquier otro número del motor
    if hasattr(valor, "__float__"):
        return normalizar(float(valor))
    return str(valor)


def a_json_estable(datos) -> str:
    """Misma entrada, mismos bytes: claves ordenadas y números normalizados."""
    return json.dumps(normalizar(datos), sort_keys=True, ensure_ascii=False)


def formatear_desvio(desvio: float):
    return "inf" if math.isinf(desvio) else normalizar(float(desvio))


def clave_indice(indice) -> str:
    """Clave de texto: el estado, o `estado|palabra` para los pares."""
    if isinstance(indice, tuple):
        estado, palabra = indice
        return f"{estado}|{formatear_palabra(palabra)}"
    return str(indice)


def valuacion_a_json(valuacion, lattice) -> dict:
    return {clave_indice(i): lattice.a_json(x) for i, x in valuacion.items()}
