from django.core.exceptions import ValidationError

from semantica.management.base import INSTANCIA_POR_TIPO, ComandoSemantica
from semantica.models import Corrida
from semantica.services.reachability import FAILS, HOLDS, INCONCLUSIVE, ReachabilityService

CODIGOS = {HOLDS: 0, FAILS: 2, INCONCLUSIVE: 3}


class Command(ComandoSemantica):
    help = "Evalúa la condición de alcanzabilidad global de un modelo"
    comando = Corrida.COMANDO_CHECK_GRC
    ayuda_instancia = "mc, mdp, resource, dlts o ufa (por defecto, según el tipo del modelo)"
    significados = {0: HOLDS, 2: FAILS, 3: INCONCLUSIVE}

    def ejecutar(self, modelo, **opciones):
        instancia = opciones.get("instance") or INSTANCIA_POR_TIPO[modelo.tipo]
        if INSTANCIA_POR_TIPO.get(modelo.tipo) != instancia:
            raise ValidationError(
                f"La condición '{instancia}' no corresponde a un modelo '{modelo.tipo}'", code="schema"
            )

        tol = self.tolerancia(opciones)
        if instancia == "mc":
            veredicto = ReachabilityService.grc_mc(modelo, tol)
        elif instancia == "mdp":
            veredicto = ReachabilityService.grc_mdp(modelo, opciones.get("horizon"), tol)
        elif instancia == "resource":
            veredicto = ReachabilityService.grc_resource(modelo)
        elif instancia == "dlts":
            veredicto = ReachabilityService.grc_dlts(modelo, self.leer_palabras(opciones.get("words"), modelo) or ())
        else:
            veredicto = ReachabilityService.grc_ufa(modelo)

        datos = veredicto.a_json()
        datos["instance"] = instancia
        return datos, CODIGOS[veredicto.estado]
