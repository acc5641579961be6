from django.core.exceptions import ValidationError

from semantica.management.base import INSTANCIA_POR_TIPO, ComandoSemantica
from semantica.models import Corrida
from semantica.services.correspond import ALCANCE_APROXIMADO, CorrespondenceService

SALIDA_COINCIDEN = 0
SALIDA_NO_COINCIDEN = 1
SALIDA_GRC_FALLA = 2
SALIDA_APROXIMADA = 3


class Command(ComandoSemantica):
    help = "Verifica la correspondencia entre la semántica concreta y la abstracta"
    comando = Corrida.COMANDO_VERIFY
    ayuda_instancia = "mc, mdp, resource, dlts, ufa o ufa_prob (por defecto, según el tipo del modelo)"
    significados = {
        SALIDA_COINCIDEN: "coincidence",
        SALIDA_NO_COINCIDEN: "no coincidence",
        SALIDA_GRC_FALLA: "GRC failed, no coincidence",
        SALIDA_APROXIMADA: "approximate only",
    }

    def ejecutar(self, modelo, **opciones):
        mc_labels = self.leer_mc_etiquetas(opciones.get("mc_labels"))
        por_defecto = INSTANCIA_POR_TIPO[modelo.tipo]
        if por_defecto == "ufa" and mc_labels is not None:
            por_defecto = "ufa_prob"
        instancia = opciones.get("instance") or por_defecto
        validas = ("ufa", "ufa_prob") if modelo.tipo == "nfa" else (por_defecto,)
        if instancia not in validas:
            raise ValidationError(
                f"La verificación '{instancia}' no corresponde a un modelo '{modelo.tipo}'", code="schema"
            )

        tol = self.tolerancia(opciones)
        if modelo.tipo == "nfa":
            if instancia == "ufa_prob" and mc_labels is None:
                raise ValidationError("La instancia ufa_prob necesita --mc-labels", code="schema")
            reporte = CorrespondenceService.verify_chain(
                modelo,
                maxlen=opciones.get("maxlen"),
                tol=tol,
                mc_labels=mc_labels if instancia == "ufa_prob" else None,
            )
        else:
            reporte = CorrespondenceService.verify_equivalence(
                modelo,
                instancia,
                policy=self.politica(opciones),
                tol=tol,
                words=self.leer_palabras(opciones.get("words"), modelo) if modelo.tipo == "dlts" else None,
                horizon=opciones.get("horizon"),
            )

        if reporte.scope == ALCANCE_APROXIMADO:
            codigo = SALIDA_APROXIMADA
        elif reporte.coincidence:
            codigo = SALIDA_COINCIDEN
        elif not reporte.grc.holds:
            codigo = SALIDA_GRC_FALLA
        else:
            codigo = SALIDA_NO_COINCIDEN
        return reporte.a_json(), codigo
