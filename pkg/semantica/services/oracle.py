# semantica/services/oracle.py
"""
Verdad de fuerza bruta, independiente de los operadores: enumeración de
caminos para MCs, de schedulers con historia para MDPs, conteo de corridas
para NFAs, simulación de palabras lazo y búsqueda de caminos con recursos.
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field

from semantica import conf
from semantica.exceptions import ErrorPrecondicion, PresupuestoAgotado
from semantica.lattices import BOTTOM, ExtNat, ExtReal, ParetoFrontier, Valuation
from semantica.sistemas import TARGET, Dlts, LassoWord, MarkovChain, Mdp, Nfa, ResourceGraph

logger = logging.getLogger(__name__)

LARGO_MAXIMO_ENUMERACION = 8


@dataclass(frozen=True)
class SchedulerPrefix:
    """Historia de estados (tupla) → índice de elección del último estado."""
    eleccion: dict = field(default_factory=dict)

    def __hash__(self):
        return hash(tuple(sorted(self.eleccion.items())))

    def a_json(self) -> list:
        return [
            {"history": list(historia), "choice": indice}
            for historia, indice in sorted(self.eleccion.items(), key=lambda x: (len(x[0]), x[0]))
        ]


@dataclass(frozen=True)
class DltsRun:
    terminates: bool
    steps: int = 0
    final_state: str = None
    safe: bool = False

    def a_json(self) -> dict:
        if not self.terminates:
            return {"terminates": False}
        return {"terminates": True, "steps": self.steps, "final_state": self.final_state, "safe": self.safe}


class _Contador:
    """Cuenta elementos enumerados y corta al pasar el presupuesto."""

    def __init__(self, oraculo, presupuesto):
        self.oraculo = oraculo
        self.presupuesto = conf.obtener("PRESUPUESTO_ORACULO") if presupuesto is None else presupuesto
        self.usados = 0

    def gastar(self, cantidad=1):
        self.usados += cantidad
        if self.usados > self.presupuesto:
            logger.warning("Oráculo %s: presupuesto de %d agotado", self.oraculo, self.presupuesto)
            raise PresupuestoAgotado(self.oraculo, self.presupuesto)


def _sin_dominados(puntos):
    """Filtro cuadrático independiente de la canonización de ParetoFrontier."""
    maximales = []
    for i, (p, r, sigma) in enumerate(puntos):
        dominado = False
        for j, (q, t, _) in enumerate(puntos):
            if i == j:
                continue
            if q >= p and t >= r and ((q, t) != (p, r) or j < i):
                dominado = True
                break
        if not dominado:
            maximales.append((p, r, sigma))
    return maximales


def _valor_por_caminos(mdp, raiz, eleccion, restante, contador):
    """
    (Pr, ERew) de los caminos que parten de la historia `raiz` y llegan a ✓
    tomando a lo sumo `restante` decisiones de `eleccion` (historia → índice).
    """
    prob_total, rew_total = 0.0, ExtReal(0)
    if restante == 0:
        return (prob_total, rew_total)
    ultima = len(raiz) + restante - 1  # largo de la última historia que decide
    pila = [(raiz, 1.0, 0)]
    while pila:
        historia, prob, acumulado = pila.pop()
        indice = eleccion.get(historia)
        if indice is None:
            raise ErrorPrecondicion(f"El scheduler no define la historia {historia}")
        paso = mdp.choices[historia[-1]][indice]
        ganancia = acumulado + paso.reward
        for destino, p in paso.dist.items():
            contador.gastar()
            if destino == TARGET:
                prob_total += prob * p
                rew_total = rew_total + ExtReal(prob * p * ganancia)
            elif len(historia) < ultima:
                pila.append((historia + (destino,), prob * p, ganancia))
    return (prob_total, rew_total)


def _prefijos(mdp, historia, restante):
    """Todos los prefijos de scheduler sobre las historias alcanzables desde `historia`."""
    if restante == 0:
        yield {}
        return
    for indice, eleccion in enumerate(mdp.choices[historia[-1]]):
        sucesores = [t for t in eleccion.dist if t != TARGET]
        subarboles = [list(_prefijos(mdp, historia + (t,), restante - 1)) for t in sucesores]
        for combinacion in itertools.product(*subarboles):
            sigma = {historia: indice}
            for sub in combinacion:
                sigma.update(sub)
            yield sigma


class OracleService:

    # -----------------------------------------------------
    # Cadenas de Markov
    # -----------------------------------------------------
    @staticmethod
    def mc_partial_oracle(mc: MarkovChain, n: int, presupuesto=None) -> Valuation:
        """
        Suma de Pr y Pr·rew sobre los caminos de largo ≤ n que terminan en ✓;
        la recompensa de un camino es la de los estados que recorre.
        """
        contador = _Contador("mc_partial", presupuesto)

        def desde(s):
            prob_total, rew_total = 0.0, ExtReal(0)
            pila = [(s, 1.0, 0, 0)]  # estado, probabilidad, recompensa, largo
            while pila:
                actual, prob, acumulado, largo = pila.pop()
                if largo == n:
                    continue
                for destino, p in mc.transitions[actual].items():
                    contador.gastar()
                    q = prob * p
                    ganancia = acumulado + mc.rewards[actual]
                    if destino == TARGET:
                        prob_total += q
                        rew_total = rew_total + ExtReal(q * ganancia)
                    else:
                        pila.append((destino, q, ganancia, largo + 1))
            return (prob_total, rew_total)

        return Valuation((s, desde(s)) for s in mc.states)

    @staticmethod
    def mc_total_oracle(mc: MarkovChain, n: int, presupuesto=None) -> Valuation:
        """
        Recompensa total esperada en los caminos de exactamente n pasos sobre
        S + ✓, con ✓ como sumidero de recompensa 0.
        """
        contador = _Contador("mc_total", presupuesto)

        def desde(s):
            total = 0.0
            pila = [(s, 1.0, 0, 0)]
            while pila:
                actual, prob, acumulado, largo = pila.pop()
                if largo == n or actual == TARGET:
                    # en ✓ el resto del camino no suma
                    total += prob * acumulado
                    continue
                for destino, p in mc.transitions[actual].items():
                    contador.gastar()
                    pila.append((destino, prob * p, acumulado + mc.rewards[actual], largo + 1))
            return ExtReal(total)

        return Valuation((s, desde(s)) for s in mc.states)

    # -----------------------------------------------------
    # MDPs: schedulers deterministas con historia
    # -----------------------------------------------------
    @staticmethod
    def mdp_pareto_oracle(mdp: Mdp, n: int, presupuesto=None, testigos=False, exhaustivo=False):
        """
        Frontera de Pareto de (Pr^n, ERew^n) sobre los schedulers deterministas
        con historia de profundidad n. Cada candidato se puntúa enumerando sus
        caminos, igual que `scheduler_value`.

        Con `exhaustivo=True` enumera todos los prefijos de scheduler completos.
        Por defecto recorre el árbol de historias y en cada historia descarta
        los subschedulers dominados: los subárboles de historias distintas son
        independientes, así que la frontera resultante es la misma.
        Con `testigos=True` también devuelve un SchedulerPrefix por punto.
        """
        contador = _Contador("mdp_pareto", presupuesto)

        def candidatos(historia, restante):
            if restante == 0:
                return [(0.0, ExtReal(0), {})]
            puntos = []
            for indice, eleccion in enumerate(mdp.choices[historia[-1]]):
                sucesores = [t for t in eleccion.dist if t != TARGET]
                opciones = [candidatos(historia + (t,), restante - 1) for t in sucesores]
                for combinacion in itertools.product(*opciones):
                    sigma = {historia: indice}
                    for _, _, sigma_suc in combinacion:
                        sigma.update(sigma_suc)
                    p, r = _valor_por_caminos(mdp, historia, sigma, restante, contador)
                    puntos.append((p, r, sigma))
            return _sin_dominados(puntos)

        def todos(estado):
            puntos = []
            for sigma in _prefijos(mdp, (estado,), n):
                p, r = _valor_por_caminos(mdp, (estado,), sigma, n, contador)
                puntos.append((p, r, sigma))
            return _sin_dominados(puntos)

        fronteras, schedulers = [], {}
        for s in mdp.states:
            puntos = todos(s) if exhaustivo else candidatos((s,), n)
            frontera = ParetoFrontier((p, r) for p, r, _ in puntos)
            fronteras.append((s, frontera))
            por_punto = {(p, r): SchedulerPrefix(sigma) for p, r, sigma in puntos}
            schedulers[s] = [(punto, por_punto[punto]) for punto in frontera]

        logger.info(
            "Oráculo de Pareto%s: %d transiciones recorridas a profundidad %d",
            " exhaustivo" if exhaustivo else "", contador.usados, n,
        )
        resultado = Valuation(fronteras)
        return (resultado, schedulers) if testigos else resultado

    @staticmethod
    def scheduler_value(mdp: Mdp, estado, sigma: SchedulerPrefix, n: int, presupuesto=None):
        """(Pr^n, ERew^n) de un prefijo de scheduler, enumerando caminos."""
        contador = _Contador("scheduler_value", presupuesto)
        return _valor_por_caminos(mdp, (estado,), sigma.eleccion, n, contador)

    # -----------------------------------------------------
    # NFAs
    # -----------------------------------------------------
    @staticmethod
    def nfa_count_oracle(nfa: Nfa, palabra) -> Valuation:
        """Corridas aceptadoras de `palabra` desde cada estado (programación dinámica)."""
        cuenta = {s: (1 if s in nfa.accepting else 0) for s in nfa.states}
        for letra in reversed(tuple(palabra)):
            cuenta = {s: sum(cuenta[t] for t in nfa.sucesores(s, letra)) for s in nfa.states}
        return Valuation((s, ExtNat(cuenta[s])) for s in nfa.states)

    @staticmethod
    def nfa_prob_oracle(nfa: Nfa, mc_labels: MarkovChain, palabra) -> Valuation:
        """(cantidad, suma de probabilidades) de las corridas aceptadoras desde cada estado."""
        palabra = tuple(palabra)
        cuentas = OracleService.nfa_count_oracle(nfa, palabra)
        if not palabra:
            return cuentas.map(lambda c: (c, ExtReal(c.valor)))
        # Todas las corridas sobre la misma palabra tienen la misma probabilidad
        prob = 1.0
        for letra, siguiente in zip(palabra, palabra[1:] + (TARGET,)):
            prob *= mc_labels.transitions[letra].get(siguiente, 0.0)
        return cuentas.map(lambda c: (c, ExtReal(c.valor * prob)))

    @staticmethod
    def nfa_runs(nfa: Nfa, estado, palabra) -> list:
        """Listado explícito de corridas aceptadoras (palabras de largo ≤ 8)."""
        palabra = tuple(palabra)
        if len(palabra) > LARGO_MAXIMO_ENUMERACION:
            raise ErrorPrecondicion(
                f"La enumeración de corridas admite palabras de largo ≤ {LARGO_MAXIMO_ENUMERACION}"
            )
        corridas = [(estado,)]
        for letra in palabra:
            corridas = [c + (t,) for c in corridas for t in nfa.sucesores(c[-1], letra)]
        return [list(c) for c in corridas if c[-1] in nfa.accepting]

    @staticmethod
    def nfa_max_runs_oracle(nfa: Nfa, largo=None):
        """
        Máximo de corridas aceptadoras (saturado en 2) sobre todas las palabras
        de largo ≤ `largo` (por defecto 2·|S|²), por programación dinámica
        sobre vectores de conteo. Devuelve (máximo, estado, palabra testigo).
        """
        largo = 2 * len(nfa.states) ** 2 if largo is None else largo
        inicial = tuple(1 if s in nfa.accepting else 0 for s in nfa.states)
        vistos = {inicial: ()}
        frontera = [inicial]
        for _ in range(largo):
            nuevos = []
            for vector in frontera:
                cuenta = dict(zip(nfa.states, vector))
                for letra in nfa.alphabet:
                    siguiente = tuple(
                        min(2, sum(cuenta[t] for t in nfa.sucesores(s, letra))) for s in nfa.states
                    )
                    if siguiente not in vistos:
                        vistos[siguiente] = (letra,) + vistos[vector]
                        nuevos.append(siguiente)
            if not nuevos:
                break
            frontera = nuevos

        mejor = (0, None, ())
        for vector, palabra in vistos.items():
            for s, c in zip(nfa.states, vector):
                if c > mejor[0]:
                    mejor = (c, s, palabra)
        return mejor

    # -----------------------------------------------------
    # LTS deterministas
    # -----------------------------------------------------
    @staticmethod
    def dlts_run_oracle(dlts: Dlts, estado, palabra: LassoWord) -> DltsRun:
        """Simula u·v^ω desde `estado`; detecta lazos por (estado, posición)."""
        u, v = palabra.prefix, palabra.loop

        def letra(i):
            return u[i] if i < len(u) else v[(i - len(u)) % len(v)]

        def posicion(i):
            return i if i < len(u) else len(u) + (i - len(u)) % len(v)

        vistos = set()
        i = 0
        while (estado, posicion(i)) not in vistos:
            vistos.add((estado, posicion(i)))
            destino = dlts.step[estado][letra(i)]
            if destino == TARGET:
                return DltsRun(True, i + 1, estado, estado in dlts.safe)
            estado = destino
            i += 1
        return DltsRun(False)

    # -----------------------------------------------------
    # Grafos de recursos
    # -----------------------------------------------------
    @staticmethod
    def resource_path_oracle(g: ResourceGraph, estado):
        """
        Máximo de min(M, Σ recursos) sobre los caminos a ✓, ⊥ si no hay.
        Búsqueda en anchura sobre (estado, acumulado saturado).
        """
        vistos = {(estado, 0)}
        cola = deque(vistos)
        mejor = BOTTOM
        while cola:
            actual, acumulado = cola.popleft()
            nodo = g.nodes[actual]
            if nodo == TARGET:
                mejor = acumulado if mejor is BOTTOM else max(mejor, acumulado)
                continue
            for siguiente in nodo.succ:
                config = (siguiente, min(g.bound, acumulado + nodo.resource))
                if config not in vistos:
                    vistos.add(config)
                    cola.append(config)
        return mejor

    @staticmethod
    def resource_oracle(g: ResourceGraph) -> Valuation:
        return Valuation((s, OracleService.resource_path_oracle(g, s)) for s in g.states)
