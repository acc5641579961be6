from django.core.exceptions import ValidationError

from semantica import conf
from semantica.exceptions import SinConvergencia
from semantica.lattices import FRONTERA
from semantica.management.base import ComandoSemantica
from semantica.models import Corrida
from semantica.services.operators import TIPOS_POR_TAG, build_operator
from semantica.services.solver import MODO_TOLERANCIA, ConvergencePolicy, SolverService
from semantica.utils import valuacion_a_json

SALIDA_CONVERGIO = 0
SALIDA_SIN_CONVERGER = 3


class Command(ComandoSemantica):
    help = "Calcula el menor punto fijo (o su aproximación) de una instancia"
    comando = Corrida.COMANDO_SOLVE
    ayuda_instancia = f"Una de: {', '.join(TIPOS_POR_TAG)}"
    significados = {
        SALIDA_CONVERGIO: "converged",
        SALIDA_SIN_CONVERGER: "not converged",
    }

    def ejecutar(self, modelo, **opciones):
        instancia = opciones.get("instance")
        if not instancia:
            raise ValidationError("Falta --instance", code="schema")

        op = build_operator(
            modelo,
            instancia,
            words=self.leer_palabras(opciones.get("words"), modelo) if modelo.tipo == "dlts" else None,
            maxlen=opciones.get("maxlen"),
            mc_labels=self.leer_mc_etiquetas(opciones.get("mc_labels")),
        )

        if instancia == "mc_total":
            # Solución lineal exacta, comparada a menos de la tolerancia configurada
            valores = SolverService.mc_total_exact(modelo)
            alcance = ConvergencePolicy(modo=MODO_TOLERANCIA, epsilon=self.tolerancia(opciones)).alcance
            convergio = True
        else:
            horizonte = (opciones.get("horizon") or conf.obtener("HORIZONTE_MDP")) if op.lattice is FRONTERA else None
            policy = self.politica(opciones, lattice=op.lattice, max_iterations=horizonte)
            try:
                traza = SolverService.kleene_lfp(op, policy, conservar=False)
            except SinConvergencia as e:
                traza = e.traza
            valores, alcance, convergio = traza.ultimo, traza.scope, traza.converged

        datos = valuacion_a_json(valores, op.lattice)
        datos["scope"] = alcance
        return datos, SALIDA_CONVERGIO if convergio else SALIDA_SIN_CONVERGER
