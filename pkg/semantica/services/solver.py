# semantica/services/solver.py
import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from semantica import conf
from semantica.exceptions import ErrorSemantica, SinConvergencia
from semantica.lattices import (
    BOOL2, INF, LEX2, NAT, BoundedNat, ExtReal, GaloisConnection, Lattice, Valuation,
    apply_lower, apply_upper, valuation_equal,
)
from semantica.services.operators import OperatorHandle
from semantica.sistemas import TARGET, MarkovChain

logger = logging.getLogger(__name__)

MODO_EXACTO = "exact"
MODO_TOLERANCIA = "tolerance"
MODO_ACOTADO = "bounded"


def es_discreto(lattice: Lattice) -> bool:
    """Retículos donde la igualdad es exacta y la cadena se estabiliza sola."""
    return lattice in (BOOL2, LEX2, NAT) or isinstance(lattice, BoundedNat)


@dataclass(frozen=True)
class ConvergencePolicy:
    """
    Cuándo cortar una cadena de Kleene.
    - exact: igualdad exacta entre iterados consecutivos.
    - tolerance: igualdad a menos de `epsilon`.
    - bounded: exactamente `pasos` iteraciones (salvo punto fijo exacto antes).
    """
    modo: str = MODO_TOLERANCIA
    epsilon: float = 1e-9
    max_iterations: int = 100_000
    divergence_cap: float = 1e12
    pasos: int = 0

    def __post_init__(self):
        if self.modo not in (MODO_EXACTO, MODO_TOLERANCIA, MODO_ACOTADO):
            raise ValueError(f"Modo de convergencia desconocido: {self.modo}")
        if self.modo == MODO_TOLERANCIA and self.epsilon <= 0:
            raise ValueError("En modo tolerancia epsilon debe ser > 0")
        if self.divergence_cap <= 0:
            raise ValueError("El tope de divergencia debe ser > 0")
        if self.max_iterations < 0 or self.pasos < 0:
            raise ValueError("Las cantidades de iteraciones no pueden ser negativas")

    @classmethod
    def desde_configuracion(cls, modo=None, lattice=None, *, epsilon=None, max_iterations=None,
                            divergence_cap=None, pasos=0) -> "ConvergencePolicy":
        """Política por defecto según settings.SEMANTICA; el modo sale del retículo si no se indica."""
        if modo is None:
            modo = MODO_EXACTO if lattice is not None and es_discreto(lattice) else MODO_TOLERANCIA
        return cls(
            modo=modo,
            epsilon=conf.obtener("EPSILON_ITERACION") if epsilon is None else epsilon,
            max_iterations=conf.obtener("MAX_ITERACIONES") if max_iterations is None else max_iterations,
            divergence_cap=conf.obtener("TOPE_DIVERGENCIA") if divergence_cap is None else divergence_cap,
            pasos=pasos,
        )

    @property
    def alcance(self) -> str:
        if self.modo == MODO_TOLERANCIA:
            # 1e-06 → 1e-6
            return "tolerance({})".format(format(self.epsilon, "g").replace("e-0", "e-").replace("e+0", "e+"))
        if self.modo == MODO_ACOTADO:
            return f"bounded({self.pasos})"
        return MODO_EXACTO

    def iguales(self, a: Valuation, b: Valuation, lattice: Lattice) -> bool:
        tol = self.epsilon if self.modo == MODO_TOLERANCIA else 0.0
        return valuation_equal(a, b, lattice, tol)


@dataclass
class ChainTrace:
    """Prefijo finito de la cadena inicial ⊥, Φ(⊥), Φ²(⊥), …"""
    iterates: list
    converged: bool
    steps: int
    policy: ConvergencePolicy
    promovidos: set = field(default_factory=set)

    @property
    def ultimo(self) -> Valuation:
        return self.iterates[-1]

    @property
    def scope(self) -> str:
        # en modo acotado cortar a los n pasos es lo pedido
        if self.converged or self.policy.modo == MODO_ACOTADO:
            return self.policy.alcance
        return "approximate"


class SolverService:
    """
    Iteración de Kleene desde el mínimo, solver lineal exacto para
    recompensas totales de cadenas de Markov y cadenas apareadas.
    """

    @staticmethod
    def _promover(op: OperatorHandle, previo: Valuation, nuevo: Valuation, tope, promovidos: set) -> Valuation:
        lat = op.lattice

        def ajustar(indice, x):
            promovido = lat.promote(x, tope)
            if promovido != x and indice not in promovidos:
                promovidos.add(indice)
                logger.info("%s: la coordenada %r superó el tope %g y pasa a ∞", op.tag, indice, tope)
            # join con el iterado previo: un ∞ ya promovido no vuelve a bajar
            return lat.join2(previo[indice], promovido)

        return Valuation((i, ajustar(i, x)) for i, x in nuevo.items())

    @staticmethod
    def kleene_lfp(op: OperatorHandle, policy: ConvergencePolicy = None, conservar: bool = True) -> ChainTrace:
        """
        Itera desde el mínimo hasta que dos iterados consecutivos coinciden
        según la política, o hasta agotar iteraciones (converged=False).
        En modo exacto, agotar iteraciones levanta SinConvergencia.
        Con `conservar=False` sólo se guardan el primer y el último iterado.
        """
        if policy is None:
            policy = ConvergencePolicy.desde_configuracion(lattice=op.lattice)
        limite = policy.pasos if policy.modo == MODO_ACOTADO else policy.max_iterations
        logger.info("Cadena de Kleene %s: modo %s, hasta %d pasos", op.tag, policy.alcance, limite)

        actual = op.bottom()
        iterados = [actual]
        promovidos = set()
        convergio = False
        pasos = 0
        while pasos < limite:
            siguiente = SolverService._promover(op, actual, op(actual), policy.divergence_cap, promovidos)
            pasos += 1
            if conservar:
                iterados.append(siguiente)
            else:
                iterados[1:] = [siguiente]
            estable = (
                valuation_equal(siguiente, actual, op.lattice)
                if policy.modo == MODO_ACOTADO
                else policy.iguales(siguiente, actual, op.lattice)
            )
            actual = siguiente
            if estable:
                convergio = True
                break

        traza = ChainTrace(iterados, convergio, pasos, policy, promovidos)
        if convergio:
            logger.info("Cadena %s estable en %d pasos", op.tag, pasos)
        else:
            logger.warning("Cadena %s sin converger tras %d pasos (%s)", op.tag, pasos, policy.alcance)
            if policy.modo == MODO_EXACTO:
                error = SinConvergencia(pasos, traza.ultimo)
                error.traza = traza
                raise error
        return traza

    @staticmethod
    def mc_total_exact(mc: MarkovChain) -> Valuation:
        """
        Recompensa total esperada exacta:
        ∞ en los estados que alcanzan una componente inferior (sin ✓) con
        recompensa positiva; 0 en las componentes inferiores de recompensa
        cero; el resto resuelve (I − P) x = rew con numpy.
        """
        grafo = nx.DiGraph()
        grafo.add_nodes_from(mc.states)
        grafo.add_node(TARGET)
        for s in mc.states:
            grafo.add_edges_from((s, t) for t, prob in mc.transitions[s].items() if prob > 0)

        infinitos, inferiores = set(), set()
        for componente in nx.attracting_components(grafo):
            if TARGET in componente:
                continue
            inferiores |= componente
            if any(mc.rewards[s] > 0 for s in componente):
                infinitos |= componente
                for s in componente:
                    infinitos |= nx.ancestors(grafo, s)

        transitorios = [s for s in mc.states if s not in infinitos and s not in inferiores]
        valores = {s: INF for s in infinitos}
        valores.update({s: ExtReal(0) for s in inferiores - infinitos})

        if transitorios:
            posicion = {s: i for i, s in enumerate(transitorios)}
            A = np.eye(len(transitorios))
            b = np.array([float(mc.rewards[s]) for s in transitorios])
            for s in transitorios:
                for t, prob in mc.transitions[s].items():
                    if t in posicion:
                        A[posicion[s], posicion[t]] -= prob
            try:
                x = np.linalg.solve(A, b)
            except np.linalg.LinAlgError as e:
                raise ErrorSemantica(f"Sistema singular en estados transitorios: {e}") from e
            for s in transitorios:
                valores[s] = ExtReal(max(0.0, float(x[posicion[s]])))

        logger.info("Solución exacta: %d estados con recompensa ∞", len(infinitos))
        return Valuation((s, valores[s]) for s in mc.states)

    @staticmethod
    def chain_pair(op_a: OperatorHandle, op_b: OperatorHandle, conexion: GaloisConnection, n: int) -> "ParCadenas":
        """Los primeros n+1 estadios de ambas cadenas y sus imágenes por L y R."""
        concretos, abstractos = [op_a.bottom()], [op_b.bottom()]
        for _ in range(n):
            concretos.append(op_a(concretos[-1]))
            abstractos.append(op_b(abstractos[-1]))
        return ParCadenas(
            conexion=conexion,
            concretos=concretos,
            abstractos=abstractos,
            bajados=[apply_lower(conexion, v) for v in concretos],
            subidos=[apply_upper(conexion, v) for v in abstractos],
        )


@dataclass
class ParCadenas:
    conexion: GaloisConnection
    concretos: list
    abstractos: list
    bajados: list
    subidos: list

    def estadios_coincidentes(self, tol: float = 0.0) -> list:
        """Estadios i con L(Φ^i ⊥) = Ψ^i ⊥."""
        return [
            i for i, (bajado, abstracto) in enumerate(zip(self.bajados, self.abstractos))
            if valuation_equal(bajado, abstracto, self.conexion.abstracto, tol)
        ]
