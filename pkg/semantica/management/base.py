# semantica/management/base.py
"""
Base común de los comandos del motor: lectura del modelo, flags de política,
salida JSON determinista, bitácora opcional y traducción de errores a códigos
de salida.
"""
import logging
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from semantica import conf
from semantica.exceptions import (
    ErrorPrecondicion, ErrorSemantica, ExplosionCombinatoria, PresupuestoAgotado,
)
from semantica.models import Corrida
from semantica.services.solver import ConvergencePolicy
from semantica.sistemas import MarkovChain, load_lassos, load_model, validar_lassos
from semantica.utils import a_json_estable, normalizar

logger = logging.getLogger(__name__)

SALIDA_OK = 0
SALIDA_ENTRADA = 4
SALIDA_INTERNA = 5
SALIDA_PRESUPUESTO = 6

SIGNIFICADOS_COMUNES = {
    SALIDA_ENTRADA: "invalid input",
    SALIDA_INTERNA: "internal error",
    SALIDA_PRESUPUESTO: "budget exhausted",
}

# instancia por defecto según el tipo del modelo
INSTANCIA_POR_TIPO = {
    "mc": "mc",
    "mdp": "mdp",
    "resource": "resource",
    "dlts": "dlts",
    "nfa": "ufa",
}


class ComandoSemantica(BaseCommand):
    """
    Las subclases implementan `ejecutar(modelo, **opciones) -> (datos, codigo)`.
    `significados` traduce cada código de salida a la palabra que imprime --quiet.
    """
    comando = None
    significados = {}
    ayuda_instancia = "Etiqueta de instancia"

    def add_arguments(self, parser):
        parser.add_argument("--model", required=True, help="Ruta al modelo JSON")
        parser.add_argument("--instance", help=self.ayuda_instancia)
        parser.add_argument("--tol", type=float, help="Tolerancia (pisa SEMANTICA['TOLERANCIA'])")
        parser.add_argument("--max-iter", dest="max_iter", type=int, help="Máximo de iteraciones de Kleene")
        parser.add_argument("--cap", type=float, help="Tope de divergencia: por encima se promueve a ∞")
        parser.add_argument("--horizon", type=int, help="Horizonte (MDP y oráculos acotados)")
        parser.add_argument("--maxlen", type=int, help="Largo máximo de palabras del dominio UFA")
        parser.add_argument("--words", help="Archivo JSON de palabras lazo (dlts)")
        parser.add_argument("--mc-labels", dest="mc_labels", help="MC sobre el alfabeto (variante probabilística del UFA)")
        parser.add_argument("--quiet", action="store_true", help="Imprime sólo el significado del código de salida")
        parser.add_argument("--guardar", action="store_true", help="Guarda la corrida en la bitácora")

    # -----------------------------------------------------
    # Entradas
    # -----------------------------------------------------
    @staticmethod
    def leer_archivo(ruta) -> bytes:
        try:
            return Path(ruta).read_bytes()
        except OSError as e:
            raise ValidationError(f"No se pudo leer {ruta}: {e.strerror}", code="parse") from e

    def leer_palabras(self, ruta, modelo):
        if ruta is None:
            return None
        palabras = load_lassos(self.leer_archivo(ruta))
        validar_lassos(modelo, palabras)
        return palabras

    def leer_mc_etiquetas(self, ruta):
        if ruta is None:
            return None
        mc = load_model(self.leer_archivo(ruta))
        if not isinstance(mc, MarkovChain):
            raise ValidationError("--mc-labels debe ser un modelo de tipo 'mc'", code="schema")
        return mc

    @staticmethod
    def politica(opciones, modo=None, lattice=None, max_iterations=None) -> ConvergencePolicy:
        return ConvergencePolicy.desde_configuracion(
            modo,
            lattice,
            epsilon=opciones.get("tol"),
            max_iterations=opciones.get("max_iter") or max_iterations,
            divergence_cap=opciones.get("cap"),
        )

    @staticmethod
    def tolerancia(opciones) -> float:
        tol = opciones.get("tol")
        return conf.obtener("TOLERANCIA") if tol is None else tol

    def ejecutar(self, modelo, **opciones):
        raise NotImplementedError

    # -----------------------------------------------------
    # Ciclo de vida
    # -----------------------------------------------------
    def handle(self, *args, **opciones):
        try:
            modelo = load_model(self.leer_archivo(opciones["model"]))
            datos, codigo = self.ejecutar(modelo, **opciones)
        except ValidationError as e:
            datos, codigo = self._error(getattr(e, "code", None) or "schema", "; ".join(e.messages)), SALIDA_ENTRADA
        except ErrorPrecondicion as e:
            datos, codigo = self._error("precondition", str(e)), SALIDA_ENTRADA
        except (PresupuestoAgotado, ExplosionCombinatoria) as e:
            datos, codigo = self._error("budget", str(e)), SALIDA_PRESUPUESTO
        except ErrorSemantica as e:
            datos, codigo = self._error("internal", str(e)), SALIDA_INTERNA
        except Exception as e:
            logger.exception("Error inesperado en %s", self.comando)
            datos, codigo = self._error("internal", f"{type(e).__name__}: {e}"), SALIDA_INTERNA

        if opciones.get("quiet"):
            self.stdout.write(self.significado(codigo))
        else:
            self.stdout.write(a_json_estable(datos))

        if opciones.get("guardar"):
            corrida = Corrida.objects.create(
                comando=self.comando,
                instancia=opciones.get("instance") or "",
                modelo=str(opciones["model"]),
                codigo_salida=codigo,
                resultado=normalizar(datos),
            )
            self.stderr.write(f"Corrida #{corrida.pk} guardada en la bitácora")

        if codigo != SALIDA_OK:
            mensaje = datos.get("error", {}).get("message") if "error" in datos else None
            raise CommandError(mensaje or self.significado(codigo), returncode=codigo)

    def _error(self, codigo, mensaje) -> dict:
        self.stderr.write(self.style.ERROR(f"❌ {mensaje}"))
        return {"error": {"code": codigo, "message": mensaje}}

    def significado(self, codigo) -> str:
        return {**SIGNIFICADOS_COMUNES, **self.significados}.get(codigo, f"exit {codigo}")
