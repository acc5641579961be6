# semantica/services/reachability.py
import logging
from dataclasses import dataclass, field

import networkx as nx

from semantica import conf
from semantica.lattices import BOTTOM, FRONTERA, resource_connection, in_fix_unit
from semantica.services.operators import build_operator
from semantica.services.solver import MODO_EXACTO, MODO_TOLERANCIA, ConvergencePolicy, SolverService
from semantica.sistemas import TARGET, Dlts, MarkovChain, Mdp, Nfa, ResourceGraph, formatear_palabra, suffix_closure

logger = logging.getLogger(__name__)

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

ALCANCE_EXACTO = "exact"
ALCANCE_APROXIMADO = "approximate"
ALCANCE_VACUO = "vacuous"


@dataclass
class Veredicto:
    """Resultado de una condición de alcanzabilidad global."""
    estado: str
    scope: str = ALCANCE_EXACTO
    witnesses: list = field(default_factory=list)
    detalle: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.estado == HOLDS

    def a_json(self) -> dict:
        return {
            "holds": self.holds,
            "verdict": self.estado,
            "scope": self.scope,
            "witnesses": self.witnesses,
        }


def _grafo_mc(mc: MarkovChain) -> nx.DiGraph:
    grafo = nx.DiGraph()
    grafo.add_nodes_from(mc.states)
    grafo.add_node(TARGET)
    for s in mc.states:
        grafo.add_edges_from((s, t) for t, prob in mc.transitions[s].items() if prob > 0)
    return grafo


class ReachabilityService:
    """Una condición de alcanzabilidad global por instancia."""

    @staticmethod
    def grc_mc(mc: MarkovChain, tol=None) -> Veredicto:
        """
        Alcanzabilidad casi segura de ✓ por análisis cualitativo: vale sii la
        única componente inferior alcanzable desde cualquier estado es {✓}.
        Testigos: los estados con probabilidad < 1 de llegar a ✓.
        """
        grafo = _grafo_mc(mc)
        malos = set()
        for componente in nx.attracting_components(grafo):
            if TARGET in componente:
                continue
            malos |= componente
            for s in componente:
                malos |= nx.ancestors(grafo, s)

        testigos = [s for s in mc.states if s in malos]
        veredicto = Veredicto(FAILS if testigos else HOLDS, ALCANCE_EXACTO, testigos)
        logger.info("GRC mc: %s (%d testigos)", veredicto.estado, len(testigos))
        return veredicto

    @staticmethod
    def grc_resource(g: ResourceGraph) -> Veredicto:
        """μΦ ∈ Fix(η): cada coordenada es ⊥ o M."""
        traza = SolverService.kleene_lfp(
            build_operator(g, "resource_bounded"),
            ConvergencePolicy.desde_configuracion(MODO_EXACTO),
        )
        mu = traza.ultimo
        conexion = resource_connection(g.bound)
        testigos = [
            {"state": s, "value": v}
            for s, v in mu.items()
            if v is not BOTTOM and v != g.bound
        ]
        cumple = in_fix_unit(conexion, mu)
        veredicto = Veredicto(
            HOLDS if cumple else FAILS,
            ALCANCE_EXACTO,
            testigos,
            {"mu": {s: (None if v is BOTTOM else v) for s, v in mu.items()}},
        )
        logger.info("GRC resource: %s", veredicto.estado)
        return veredicto

    @staticmethod
    def _termina(d: Dlts, estado, palabra) -> bool:
        visitados = set()
        while (estado, palabra) not in visitados:
            visitados.add((estado, palabra))
            destino = d.step[estado][palabra.cabeza]
            if destino == TARGET:
                return True
            estado, palabra = destino, palabra.cola()
        return False

    @staticmethod
    def grc_dlts(d: Dlts, palabras) -> Veredicto:
        """
        Terminación de cada par (estado, palabra lazo) del dominio. Sólo cubre
        las palabras dadas (y sus sufijos), no todo Σ^ω: si vale, el alcance
        es aproximado; un lazo que no termina es un contraejemplo exacto.
        """
        clausura = suffix_closure(palabras)
        if not clausura:
            return Veredicto(HOLDS, ALCANCE_VACUO)

        testigos = [
            {"state": s, "word": str(w)}
            for s in d.states
            for w in clausura
            if not ReachabilityService._termina(d, s, w)
        ]
        if testigos:
            veredicto = Veredicto(FAILS, ALCANCE_EXACTO, testigos)
        else:
            veredicto = Veredicto(HOLDS, ALCANCE_APROXIMADO)
        logger.info("GRC dlts: %s sobre %d palabras", veredicto.estado, len(clausura))
        return veredicto

    @staticmethod
    def _grafo_producto(n: Nfa) -> nx.DiGraph:
        grafo = nx.DiGraph()
        grafo.add_nodes_from((p, q) for p in n.states for q in n.states)
        for p in n.states:
            for q in n.states:
                for letra in n.alphabet:
                    for p2 in n.sucesores(p, letra):
                        for q2 in n.sucesores(q, letra):
                            if not grafo.has_edge((p, q), (p2, q2)):
                                grafo.add_edge((p, q), (p2, q2), letra=letra)
        return grafo

    @staticmethod
    def grc_ufa(n: Nfa) -> Veredicto:
        """
        Ambigüedad por el producto cuadrado: hay dos corridas aceptadoras
        distintas sii desde un par diagonal (s, s) se alcanza un par (p, q)
        con p ≠ q que a su vez alcanza un par de estados aceptadores.
        El testigo es la palabra y las dos corridas.
        """
        grafo = ReachabilityService._grafo_producto(n)
        aceptadores = {(p, q) for p in n.accepting for q in n.accepting}
        co_alcanzables = set(aceptadores)
        for nodo in aceptadores:
            co_alcanzables |= nx.ancestors(grafo, nodo)

        for s in n.states:
            caminos = nx.single_source_shortest_path(grafo, (s, s))
            for nodo, ida in caminos.items():
                if nodo[0] == nodo[1] or nodo not in co_alcanzables:
                    continue
                continuaciones = nx.single_source_shortest_path(grafo, nodo)
                vuelta = next(c for destino, c in continuaciones.items() if destino in aceptadores)
                camino = ida + vuelta[1:]
                palabra = tuple(grafo.edges[a, b]["letra"] for a, b in zip(camino, camino[1:]))
                testigo = {
                    "state": s,
                    "word": formatear_palabra(palabra),
                    "letters": list(palabra),
                    "runs": [[par[0] for par in camino], [par[1] for par in camino]],
                }
                logger.info("GRC ufa: ambiguo en %s con la palabra %s", s, testigo["word"])
                return Veredicto(FAILS, ALCANCE_EXACTO, [testigo])

        return Veredicto(HOLDS, ALCANCE_EXACTO)

    @staticmethod
    def grc_mdp(mdp: Mdp, horizon=None, tol=None, limite=None) -> Veredicto:
        """
        f ∈ Fix(η) sobre la aproximación de frontera: vale si cada frontera
        colapsa a un único punto con probabilidad a `tol` de 1. Si la cadena
        no llegó a un punto fijo exacto el alcance es aproximado, y un fallo
        aproximado se informa como inconcluso.
        """
        horizon = conf.obtener("HORIZONTE_MDP") if horizon is None else horizon
        tol = conf.obtener("TOLERANCIA") if tol is None else tol
        op = build_operator(mdp, "mdp_partial_frontier", limite=limite)
        traza = SolverService.kleene_lfp(
            op,
            ConvergencePolicy.desde_configuracion(MODO_TOLERANCIA, max_iterations=horizon),
            conservar=False,
        )
        fronteras = traza.ultimo
        exacta = traza.converged and op(fronteras) == fronteras
        alcance = ALCANCE_EXACTO if exacta else ALCANCE_APROXIMADO

        testigos = [
            {"state": s, "frontier": FRONTERA.a_json(f)}
            for s, f in fronteras.items()
            if len(f) != 1 or abs(f.puntos[0][0] - 1.0) > tol
        ]
        if not testigos:
            estado = HOLDS
        else:
            estado = FAILS if exacta else INCONCLUSIVE
        logger.info("GRC mdp: %s (%s, %d pasos)", estado, alcance, traza.steps)
        return Veredicto(estado, alcance, testigos, {"steps": traza.steps, "converged": traza.converged})
