class ErrorSemantica(Exception):
    """Base de todos los errores del motor."""


class ErrorReticulo(ErrorSemantica, TypeError):
    """Un elemento no pertenece al retículo indicado (o los tipos no coinciden)."""


class ExplosionCombinatoria(ErrorSemantica):
    """El paso MDP superó el límite de combinaciones candidatas."""

    def __init__(self, estado, candidatos, limite):
        self.estado = estado
        self.candidatos = candidatos
        self.limite = limite
        super().__init__(
            f"Explosión combinatoria en el estado {estado}: "
            f"{candidatos} combinaciones candidatas superan el límite {limite}"
        )


class SinConvergencia(ErrorSemantica):
    """La cadena de Kleene agotó las iteraciones en modo exacto."""

    def __init__(self, pasos, ultimo):
        self.pasos = pasos
        self.ultimo = ultimo
        super().__init__(f"La cadena no se estabilizó en {pasos} iteraciones")


class PresupuestoAgotado(ErrorSemantica):
    """Un oráculo de fuerza bruta se quedó sin presupuesto de enumeración."""

    def __init__(self, oraculo, presupuesto):
        self.oraculo = oraculo
        self.presupuesto = presupuesto
        super().__init__(f"Oráculo '{oraculo}' sin presupuesto (máximo {presupuesto} elementos)")


class ErrorPrecondicion(ErrorSemantica, ValueError):
    """Se pidió transportar algo que no cumple la precondición del transporte."""
