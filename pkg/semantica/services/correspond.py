# semantica/services/correspond.py
"""
Verificación de punta a punta de la correspondencia entre las dos semánticas:
calcula ambos puntos fijos, evalúa la condición de alcanzabilidad global,
transporta por la conexión de Galois y decide si coinciden.
"""
import logging
import random
from dataclasses import dataclass, field, replace

from semantica import conf
from semantica.exceptions import ErrorPrecondicion, SinConvergencia
from semantica.lattices import (
    DLTS_CONNECTION, MC_CONNECTION, MDP_CONNECTION, UFA_CONNECTION, UFA_PROB_CONNECTION,
    GaloisConnection, Lattice, Valuation,
    apply_lower, apply_upper, in_fix_counit, in_fix_unit, resource_connection,
    sample_valuation, valuation_deviation, valuation_equal,
)
from semantica.services.operators import build_operator
from semantica.services.reachability import ReachabilityService, Veredicto
from semantica.services.solver import (
    MODO_EXACTO, MODO_TOLERANCIA, ConvergencePolicy, SolverService, es_discreto,
)
from semantica.sistemas import Nfa, words_up_to
from semantica.utils import clave_indice, formatear_desvio, valuacion_a_json

logger = logging.getLogger(__name__)

BANDERA_SIN_GRC = "coincidence without GRC"
ALCANCE_APROXIMADO = "approximate"


@dataclass
class CorrespondenceReport:
    instancia: str
    grc: Veredicto
    concreto: Valuation
    abstracto: Valuation
    bajado: Valuation
    subido: Valuation
    coincidence: bool
    deviation: float
    scope: str
    conexion: GaloisConnection = field(repr=False)
    objeto: str = "μΦ"
    witnesses: list = field(default_factory=list)
    condiciones: dict = field(default_factory=dict)
    estadios: list = None
    banderas: list = field(default_factory=list)

    def a_json(self) -> dict:
        concreto, abstracto = self.conexion.concreto, self.conexion.abstracto
        datos = {
            "instance": self.instancia,
            "object": self.objeto,
            "grc": self.grc.a_json(),
            "concrete": valuacion_a_json(self.concreto, concreto),
            "abstract": valuacion_a_json(self.abstracto, abstracto),
            "lower_image": valuacion_a_json(self.bajado, abstracto),
            "upper_image": valuacion_a_json(self.subido, concreto),
            "coincidence": self.coincidence,
            "deviation": formatear_desvio(self.deviation),
            "scope": self.scope,
            "witnesses": self.witnesses,
            "flags": self.banderas,
        }
        if self.condiciones:
            datos["conditions"] = self.condiciones
        if self.estadios is not None:
            datos["stages"] = self.estadios
        return datos


@dataclass(frozen=True)
class Transporte:
    valuacion: Valuation
    valido: bool


def _leq_tol(a: Valuation, b: Valuation, lat: Lattice, tol: float) -> bool:
    return all(lat.leq_tol(a[i], b[i], tol) for i in a)


def _resolver(op, policy: ConvergencePolicy):
    """Corre la cadena; en los retículos discretos siempre en modo exacto."""
    if es_discreto(op.lattice):
        policy = replace(policy, modo=MODO_EXACTO)
    try:
        return SolverService.kleene_lfp(op, policy, conservar=False)
    except SinConvergencia as e:
        return e.traza


class CorrespondenceService:

    @staticmethod
    def _comparar(conexion, concreto, abstracto, tol):
        bajado = apply_lower(conexion, concreto)
        subido = apply_upper(conexion, abstracto)
        iguales = (
            valuation_equal(bajado, abstracto, conexion.abstracto, tol)
            and valuation_equal(subido, concreto, conexion.concreto, tol)
        )
        desvio = max(
            valuation_deviation(bajado, abstracto, conexion.abstracto),
            valuation_deviation(subido, concreto, conexion.concreto),
        )
        return bajado, subido, iguales, desvio

    @staticmethod
    def verify_equivalence(model, instancia: str, policy: ConvergencePolicy = None, tol=None,
                           words=None, horizon=None, limite=None) -> CorrespondenceReport:
        """
        Ruta de equivalencia: μΦ concreto contra μ(LΦR) abstracto, con
        L(μΦ) = μ_abs y R(μ_abs) = μΦ a menos de `tol`.
        Para mdp el objeto concreto es la frontera f sembrada con {(0,0)}.
        """
        tol = conf.obtener("TOLERANCIA") if tol is None else tol
        policy = policy or ConvergencePolicy.desde_configuracion(MODO_TOLERANCIA)
        objeto = "μΦ"
        estadios = None

        if instancia == "mc":
            conexion = MC_CONNECTION
            grc = ReachabilityService.grc_mc(model, tol)
            traza = _resolver(build_operator(model, "mc_partial"), policy)
            concreto = traza.ultimo
            abstracto = SolverService.mc_total_exact(model)
            trazas = [traza]
        elif instancia == "mdp":
            conexion = MDP_CONNECTION
            objeto = "f (cadena desde {(0,0)}↓)"
            horizon = conf.obtener("HORIZONTE_MDP") if horizon is None else horizon
            grc = ReachabilityService.grc_mdp(model, horizon, tol, limite)
            traza = _resolver(
                build_operator(model, "mdp_partial_frontier", limite=limite),
                replace(policy, max_iterations=horizon),
            )
            traza_abs = _resolver(build_operator(model, "mdp_total"), policy)
            concreto, abstracto = traza.ultimo, traza_abs.ultimo
            trazas = [traza, traza_abs]
        elif instancia in ("resource", "dlts"):
            if instancia == "resource":
                conexion = resource_connection(model.bound)
                grc = ReachabilityService.grc_resource(model)
                op_c = build_operator(model, "resource_bounded")
                op_a = build_operator(model, "resource_reach")
            else:
                conexion = DLTS_CONNECTION
                grc = ReachabilityService.grc_dlts(model, words or ())
                op_c = build_operator(model, "dlts_partial", words=words or ())
                op_a = build_operator(model, "dlts_total", words=words or ())
            traza, traza_abs = _resolver(op_c, policy), _resolver(op_a, policy)
            concreto, abstracto = traza.ultimo, traza_abs.ultimo
            trazas = [traza, traza_abs]
            largo = max(traza.steps, traza_abs.steps)
            estadios = SolverService.chain_pair(op_c, op_a, conexion, largo).estadios_coincidentes()
        else:
            raise ErrorPrecondicion(f"Instancia de equivalencia desconocida: {instancia}")

        bajado, subido, coincide, desvio = CorrespondenceService._comparar(conexion, concreto, abstracto, tol)
        convergio = all(t.converged for t in trazas)
        reporte = CorrespondenceReport(
            instancia=instancia,
            grc=grc,
            concreto=concreto,
            abstracto=abstracto,
            bajado=bajado,
            subido=subido,
            coincidence=coincide,
            deviation=desvio,
            scope=trazas[0].scope if convergio else ALCANCE_APROXIMADO,
            conexion=conexion,
            objeto=objeto,
            witnesses=[] if coincide else _discrepancias(conexion, concreto, abstracto, bajado, subido, tol),
            estadios=estadios,
        )
        return _cerrar(reporte)

    @staticmethod
    def verify_chain(nfa: Nfa, maxlen=None, tol=None, mc_labels=None, muestras=None, semilla=None) -> CorrespondenceReport:
        """
        Ruta de la cadena inicial sobre el dominio de palabras de largo ≤ maxlen:
        (1) Φ∘R = R∘Ψ en valuaciones muestreadas; (2) la cadena de Ψ queda
        estacionaria a los maxlen + 1 estadios; (3) la condición global por el
        producto cuadrado más la cota μΨ ≤ 1 sobre el dominio. Después compara
        i(μΦ) con μΨ.
        """
        maxlen = conf.obtener("LONGITUD_MAXIMA") if maxlen is None else maxlen
        tol = conf.obtener("TOLERANCIA") if tol is None else tol
        muestras = conf.obtener("MUESTRAS") if muestras is None else muestras
        semilla = conf.obtener("SEMILLA") if semilla is None else semilla

        palabras = words_up_to(nfa.alphabet, maxlen)
        if mc_labels is None:
            instancia, conexion = "ufa", UFA_CONNECTION
            op_c = build_operator(nfa, "ufa_lang", words=palabras)
            op_a = build_operator(nfa, "ufa_count", words=palabras)
            tol_condicion = 0.0
        else:
            instancia, conexion = "ufa_prob", UFA_PROB_CONNECTION
            op_c = build_operator(nfa, "ufa_prob_pair", words=palabras, mc_labels=mc_labels)
            op_a = build_operator(nfa, "ufa_prob_count", words=palabras, mc_labels=mc_labels)
            tol_condicion = tol

        # (1) conmutación con R
        rng = random.Random(semilla)
        fallas = 0
        for _ in range(muestras):
            k = sample_valuation(op_a.indices, conexion.abstracto, rng)
            izquierda = op_c(apply_upper(conexion, k))
            derecha = apply_upper(conexion, op_a(k))
            if not valuation_equal(izquierda, derecha, conexion.concreto, tol_condicion):
                fallas += 1

        # (2) estabilización de la cadena de Ψ
        politica = ConvergencePolicy.desde_configuracion(MODO_EXACTO, max_iterations=maxlen + 5)
        pares = SolverService.chain_pair(op_c, op_a, conexion, maxlen + 2)
        estacionaria = pares.abstractos[maxlen + 1] == pares.abstractos[maxlen + 2]
        traza_c = _resolver(op_c, politica)
        traza_a = _resolver(op_a, politica)
        concreto, abstracto = traza_c.ultimo, traza_a.ultimo

        # (3) condición global
        grc = ReachabilityService.grc_ufa(nfa)
        acotada = in_fix_counit(conexion, abstracto, tol_condicion)

        bajado, subido, coincide, desvio = CorrespondenceService._comparar(conexion, concreto, abstracto, tol)
        testigos = list(grc.witnesses)
        if not coincide:
            testigos += _discrepancias(conexion, concreto, abstracto, bajado, subido, tol)

        reporte = CorrespondenceReport(
            instancia=instancia,
            grc=grc,
            concreto=concreto,
            abstracto=abstracto,
            bajado=bajado,
            subido=subido,
            coincidence=coincide,
            deviation=desvio,
            scope=MODO_EXACTO if traza_c.converged and traza_a.converged else ALCANCE_APROXIMADO,
            conexion=conexion,
            witnesses=testigos,
            condiciones={
                "commutation": {"holds": fallas == 0, "samples": muestras, "failures": fallas},
                "stationary": {"holds": estacionaria, "stage": maxlen + 1},
                "bounded": {"holds": acotada, "maxlen": maxlen},
            },
        )
        return _cerrar(reporte)

    @staticmethod
    def transport_prefixed_point(g: GaloisConnection, direction: str, k: Valuation,
                                 step_concrete, step_abstract, tol=None) -> Transporte:
        """
        Lleva un prepunto fijo (step(k) ⊑ k) al otro lado de la conexión.
        Hacia abajo exige además k ∈ Fix(η). `valido` dice si la imagen es un
        prepunto fijo del otro operador a menos de `tol`.
        """
        tol = conf.obtener("TOLERANCIA") if tol is None else tol
        if direction == "lower":
            if not _leq_tol(step_concrete(k), k, g.concreto, tol):
                raise ErrorPrecondicion("k no es un prepunto fijo del operador concreto")
            if not in_fix_unit(g, k, tol):
                raise ErrorPrecondicion("k no está en Fix(η): R(L(k)) ≠ k")
            imagen = apply_lower(g, k)
            valido = _leq_tol(step_abstract(imagen), imagen, g.abstracto, tol)
        elif direction == "upper":
            if not _leq_tol(step_abstract(k), k, g.abstracto, tol):
                raise ErrorPrecondicion("k no es un prepunto fijo del operador abstracto")
            imagen = apply_upper(g, k)
            valido = _leq_tol(step_concrete(imagen), imagen, g.concreto, tol)
        else:
            raise ErrorPrecondicion(f"Dirección de transporte desconocida: {direction}")
        return Transporte(imagen, valido)


def _discrepancias(conexion, concreto, abstracto, bajado, subido, tol, maximo=20) -> list:
    """Índices donde falla alguna de las dos igualdades de transporte."""
    testigos = []
    for i in concreto:
        if (conexion.abstracto.equal(bajado[i], abstracto[i], tol)
                and conexion.concreto.equal(subido[i], concreto[i], tol)):
            continue
        testigos.append({
            "index": clave_indice(i),
            "concrete": conexion.concreto.a_json(concreto[i]),
            "abstract": conexion.abstracto.a_json(abstracto[i]),
        })
        if len(testigos) >= maximo:
            break
    return testigos


def _cerrar(reporte: CorrespondenceReport) -> CorrespondenceReport:
    if reporte.coincidence and not reporte.grc.holds:
        reporte.banderas.append(BANDERA_SIN_GRC)
    nivel = logging.INFO if reporte.coincidence or not reporte.grc.holds else logging.ERROR
    logger.log(
        nivel,
        "Verificación %s: GRC %s, coincidencia %s, desvío %s (%s)",
        reporte.instancia, reporte.grc.estado, reporte.coincidence,
        formatear_desvio(reporte.deviation), reporte.scope,
    )
    return reporte
