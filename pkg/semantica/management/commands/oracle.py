from django.core.exceptions import ValidationError

from semantica import conf
from semantica.lattices import FRONTERA, I_INF, NAT, PAR_MC, Product, resource_connection
from semantica.management.base import ComandoSemantica
from semantica.models import Corrida
from semantica.services.oracle import OracleService
from semantica.sistemas import formatear_palabra, words_up_to
from semantica.utils import clave_indice, valuacion_a_json

# oráculo -> tipo de modelo que recorre
ORACULOS = {
    "mc_partial": "mc",
    "mc_total": "mc",
    "mdp_pareto": "mdp",
    "resource_path": "resource",
    "dlts_run": "dlts",
    "nfa_count": "nfa",
    "nfa_prob": "nfa",
    "nfa_ambiguity": "nfa",
}
CON_HORIZONTE = ("mc_partial", "mc_total", "mdp_pareto")


class Command(ComandoSemantica):
    help = "Corre un oráculo de fuerza bruta (verdad independiente de los operadores)"
    comando = Corrida.COMANDO_ORACLE
    ayuda_instancia = f"Oráculo: {', '.join(ORACULOS)}"
    significados = {0: "ok"}

    def ejecutar(self, modelo, **opciones):
        oraculo = opciones.get("instance")
        if oraculo not in ORACULOS:
            raise ValidationError(f"Oráculo desconocido: {oraculo!r}", code="schema")
        if ORACULOS[oraculo] != modelo.tipo:
            raise ValidationError(
                f"El oráculo {oraculo} necesita un modelo '{ORACULOS[oraculo]}' y recibió '{modelo.tipo}'",
                code="schema",
            )
        n = opciones.get("horizon")
        if oraculo in CON_HORIZONTE and n is None:
            raise ValidationError(f"El oráculo {oraculo} necesita --horizon", code="schema")

        datos = {"oracle": oraculo}
        if n is not None and oraculo in CON_HORIZONTE:
            datos["horizon"] = n

        if oraculo == "mc_partial":
            datos["values"] = valuacion_a_json(OracleService.mc_partial_oracle(modelo, n), PAR_MC)
        elif oraculo == "mc_total":
            datos["values"] = valuacion_a_json(OracleService.mc_total_oracle(modelo, n), I_INF)
        elif oraculo == "mdp_pareto":
            fronteras, schedulers = OracleService.mdp_pareto_oracle(modelo, n, testigos=True)
            datos["values"] = valuacion_a_json(fronteras, FRONTERA)
            datos["schedulers"] = {
                s: [{"point": [p, float(r)], "scheduler": sigma.a_json()} for (p, r), sigma in testigos]
                for s, testigos in schedulers.items()
            }
        elif oraculo == "resource_path":
            g = resource_connection(modelo.bound).concreto
            datos["values"] = valuacion_a_json(OracleService.resource_oracle(modelo), g)
        elif oraculo == "dlts_run":
            palabras = self.leer_palabras(opciones.get("words"), modelo) or ()
            datos["values"] = {
                clave_indice((s, w)): OracleService.dlts_run_oracle(modelo, s, w).a_json()
                for s in modelo.states
                for w in palabras
            }
        elif oraculo == "nfa_ambiguity":
            maximo, estado, palabra = OracleService.nfa_max_runs_oracle(modelo)
            datos.update({"max_runs": maximo, "state": estado, "word": formatear_palabra(palabra)})
            if maximo >= 2:
                datos["runs"] = OracleService.nfa_runs(modelo, estado, palabra)
        else:
            maxlen = opciones.get("maxlen")
            maxlen = conf.obtener("LONGITUD_MAXIMA") if maxlen is None else maxlen
            valores = {}
            if oraculo == "nfa_count":
                for w in words_up_to(modelo.alphabet, maxlen):
                    for s, c in OracleService.nfa_count_oracle(modelo, w).items():
                        valores[clave_indice((s, w))] = NAT.a_json(c)
            else:
                mc_labels = self.leer_mc_etiquetas(opciones.get("mc_labels"))
                if mc_labels is None:
                    raise ValidationError("El oráculo nfa_prob necesita --mc-labels", code="schema")
                lat = Product(NAT, I_INF)
                for w in words_up_to(modelo.alphabet, maxlen):
                    for s, par in OracleService.nfa_prob_oracle(modelo, mc_labels, w).items():
                        valores[clave_indice((s, w))] = lat.a_json(par)
            datos["values"] = valores
        return datos, 0
