# semantica/services/operators.py
"""
Transformadores de predicados (operadores de Bellman) como funciones de un paso
sobre valuaciones, más los levantamientos que derivan los operadores de MDP a
partir del operador de cadenas de Markov.

Todos los pasos son puros: reciben el modelo y una valuación y devuelven una
valuación nueva indexada igual que la de entrada.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable

from django.core.exceptions import ValidationError

from semantica import conf
from semantica.exceptions import ErrorPrecondicion, ExplosionCombinatoria
from semantica.lattices import (
    BOOL2, BOTTOM, FRONTERA, I1, I_INF, LEX2, NAT, PAR_MC,
    BoundedNat, ExtNat, ExtReal, Lattice, ParetoFrontier, Product, Valuation,
)
from semantica.sistemas import (
    TARGET, Dlts, MarkovChain, Mdp, Nfa, ResourceGraph,
    suffix_closure, words_up_to,
)

logger = logging.getLogger(__name__)


# =========================================================
# 1. CADENAS DE MARKOV
# =========================================================

def _evaluar_mc(dist, rew, valor_de):
    """
    (p, r) de un estado con distribución `dist` y recompensa `rew`:
      p = P(✓) + Σ P(s')·π1 k(s')
      r = rew·P(✓) + Σ P(s')·(π2 k(s') + rew·π1 k(s'))
    El orden de acumulación es el de `dist`; el paso MDP lo repite igual.
    """
    p_fin = dist.get(TARGET, 0.0)
    p, r = p_fin, ExtReal(rew * p_fin)
    for sucesor, prob in dist.items():
        if sucesor == TARGET:
            continue
        p_suc, r_suc = valor_de(sucesor)
        p, r = _acumular(p, r, prob, rew, p_suc, r_suc)
    return p, r


def _acumular(p, r, prob, rew, p_suc, r_suc):
    return p + prob * p_suc, r + (r_suc + rew * p_suc) * prob


def step_mc_partial(mc: MarkovChain, k: Valuation) -> Valuation:
    """Φ de recompensa esperada parcial sobre I1 × I∞."""
    return Valuation(
        (s, _evaluar_mc(mc.transitions[s], mc.rewards[s], k.__getitem__))
        for s in mc.states
    )


def step_mc_total(mc: MarkovChain, k: Valuation) -> Valuation:
    """Ψ(k)(s) = rew(s) + Σ P(s,s')·k(s')."""
    def valor(s):
        total = ExtReal(mc.rewards[s])
        for sucesor, prob in mc.transitions[s].items():
            if sucesor != TARGET:
                total = total + k[sucesor] * prob
        return total

    return Valuation((s, valor(s)) for s in mc.states)


# =========================================================
# 2. MDPs (fronteras de Pareto)
# =========================================================

def _limite(limite):
    return conf.obtener("LIMITE_EXPLOSION") if limite is None else limite


def _frontera_de_eleccion(estado, eleccion, k: Valuation, limite) -> ParetoFrontier:
    """
    Unión, sobre selecciones de un generador por sucesor, de los principales
    (p, r)↓. Se arma como suma de Minkowski incremental podando dominados en
    cada suma parcial: la suma es monótona, así que el lowerset no cambia.
    """
    dist, rew = eleccion.dist, eleccion.reward
    p_fin = dist.get(TARGET, 0.0)
    parcial = ((p_fin, ExtReal(rew * p_fin)),)
    for sucesor, prob in dist.items():
        if sucesor == TARGET:
            continue
        generadores = k[sucesor].puntos
        candidatos = len(parcial) * len(generadores)
        if candidatos > limite:
            logger.warning("Paso MDP en %s: %d candidatos superan el límite %d", estado, candidatos, limite)
            raise ExplosionCombinatoria(estado, candidatos, limite)
        parcial = ParetoFrontier(
            _acumular(p, r, prob, rew, p_suc, r_suc)
            for p, r in parcial
            for p_suc, r_suc in generadores
        ).puntos
    return ParetoFrontier(parcial)


def step_mdp_partial(mdp: Mdp, k: Valuation, limite=None) -> Valuation:
    """Φ multiobjetivo: unión sobre elecciones y selecciones de generadores."""
    limite = _limite(limite)

    def frontera(s):
        resultado = ParetoFrontier()
        for eleccion in mdp.choices[s]:
            resultado = resultado.union(_frontera_de_eleccion(s, eleccion, k, limite))
        return resultado

    return Valuation((s, frontera(s)) for s in mdp.states)


def step_mdp_total(mdp: Mdp, k: Valuation) -> Valuation:
    """(LΦR)(k)(s) = max sobre (d, n) ∈ c(s) de n + Σ d(s')·k(s')."""
    def valor(s):
        mejor = None
        for eleccion in mdp.choices[s]:
            total = ExtReal(eleccion.reward)
            for sucesor, prob in eleccion.dist.items():
                if sucesor != TARGET:
                    total = total + k[sucesor] * prob
            mejor = total if mejor is None else max(mejor, total)
        return mejor

    return Valuation((s, valor(s)) for s in mdp.states)


# =========================================================
# 3. LEVANTAMIENTOS DESDE EL OPERADOR DE MC
# =========================================================

def _mc_con_eleccion(mdp: Mdp, estado, indice) -> MarkovChain:
    """La MC c' que resuelve `estado` con la elección `indice` y el resto con la primera."""
    transiciones, recompensas = {}, {}
    for s in mdp.states:
        eleccion = mdp.choices[s][indice if s == estado else 0]
        transiciones[s] = eleccion.dist
        recompensas[s] = eleccion.reward
    return MarkovChain(states=mdp.states, transitions=transiciones, rewards=recompensas)


def lift_partial(mc_step: Callable = step_mc_partial) -> Callable:
    """
    Extensión del paso de MC a MDPs sobre fronteras: une, para cada
    descomposición (c', k') en una MC y una selección de generadores, el
    principal de mc_step(c', k')(s).
    """
    def paso(mdp: Mdp, k: Valuation, limite=None) -> Valuation:
        tope = _limite(limite)
        primeros = {s: k[s].puntos[0] for s in mdp.states}

        def frontera(s):
            resultado = ParetoFrontier()
            for indice, eleccion in enumerate(mdp.choices[s]):
                mc = _mc_con_eleccion(mdp, s, indice)
                soporte = [t for t in eleccion.dist if t != TARGET]
                candidatos = 1
                for t in soporte:
                    candidatos *= len(k[t])
                if candidatos > tope:
                    raise ExplosionCombinatoria(s, candidatos, tope)
                for seleccion in itertools.product(*(k[t].puntos for t in soporte)):
                    elegido = dict(primeros)
                    elegido.update(zip(soporte, seleccion))
                    p, r = mc_step(mc, Valuation(elegido))[s]
                    resultado = resultado.union(ParetoFrontier.principal(p, r))
            return resultado

        return Valuation((s, frontera(s)) for s in mdp.states)

    return paso


def lift_total(mc_step: Callable = step_mc_partial) -> Callable:
    """Junta por máximo las segundas componentes de mc_step sobre todas las elecciones."""
    def paso(mdp: Mdp, k: Valuation) -> Valuation:
        embebida = k.map(lambda r: (1.0, r))

        def valor(s):
            return max(
                mc_step(_mc_con_eleccion(mdp, s, indice), embebida)[s][1]
                for indice in range(len(mdp.choices[s]))
            )

        return Valuation((s, valor(s)) for s in mdp.states)

    return paso


# =========================================================
# 4. GRAFOS DE RECURSOS
# =========================================================

def step_resource(g: ResourceGraph, k: Valuation) -> Valuation:
    """
    0 en los nodos ✓; en (X, n), join sobre m ∈ k(X) ∖ {⊥} de min(M, m + n).
    La suma se satura con min: con max el resultado sería siempre M.
    """
    def valor(s):
        nodo = g.nodes[s]
        if nodo == TARGET:
            return 0
        alcanzados = [k[x] for x in nodo.succ if k[x] is not BOTTOM]
        if not alcanzados:
            return BOTTOM
        return max(min(g.bound, m + nodo.resource) for m in alcanzados)

    return Valuation((s, valor(s)) for s in g.states)


def step_resource_reach(g: ResourceGraph, k: Valuation) -> Valuation:
    """Alcanzabilidad plana: ⊤ en ✓, join de los sucesores en el resto."""
    return Valuation(
        (s, True if g.es_objetivo(s) else any(k[x] for x in g.nodes[s].succ))
        for s in g.states
    )


# =========================================================
# 5. LTS DETERMINISTAS SOBRE PALABRAS LAZO
# =========================================================

def dlts_indices(d: Dlts, palabras) -> tuple:
    """Pares (estado, palabra) sobre la clausura por sufijos de las palabras lazo."""
    clausura = suffix_closure(palabras)
    return tuple((s, w) for s in d.states for w in clausura)


def _paso_dlts(d: Dlts, palabras, k: Valuation, terminal, continuar) -> Valuation:
    def valor(indice):
        s, w = indice
        destino = d.step[s][w.cabeza]
        if destino == TARGET:
            return terminal(s)
        return continuar(k[(destino, w.cola())])

    return Valuation((i, valor(i)) for i in dlts_indices(d, palabras))


def step_dlts_partial(d: Dlts, palabras, k: Valuation) -> Valuation:
    """(⊤, A(s)) al terminar; si no, (π1 k', ¬π1 k' ∨ π2 k') del sucesor."""
    return _paso_dlts(
        d, palabras, k,
        terminal=lambda s: (True, s in d.safe),
        continuar=lambda par: (par[0], (not par[0]) or par[1]),
    )


def step_dlts_total(d: Dlts, palabras, k: Valuation) -> Valuation:
    """A(s) al terminar; si no, copia el booleano del sucesor."""
    return _paso_dlts(
        d, palabras, k,
        terminal=lambda s: s in d.safe,
        continuar=lambda t: t,
    )


# =========================================================
# 6. AUTÓMATAS (dominio de palabras finito y cerrado por sufijos)
# =========================================================

def ufa_indices(n: Nfa, palabras) -> tuple:
    return tuple((s, w) for s in n.states for w in palabras)


def _verificar_sufijos(palabras):
    conjunto = set(palabras)
    for w in conjunto:
        if w and w[1:] not in conjunto:
            raise ErrorPrecondicion(f"El dominio de palabras no es cerrado por sufijos: falta {w[1:]!r}")


def _paso_ufa(n: Nfa, palabras, k: Valuation, vacia, combinar) -> Valuation:
    def valor(indice):
        s, w = indice
        if not w:
            return vacia(s)
        return combinar(k[(t, w[1:])] for t in n.sucesores(s, w[0]))

    return Valuation((i, valor(i)) for i in ufa_indices(n, palabras))


def step_ufa_lang(n: Nfa, palabras, k: Valuation) -> Valuation:
    """Φ(k)(s, ε) = Acc(s); Φ(k)(s, a·w) = ⋁ k(s', w)."""
    return _paso_ufa(n, palabras, k, vacia=lambda s: s in n.accepting, combinar=any)


def step_ufa_count(n: Nfa, palabras, k: Valuation) -> Valuation:
    """Cantidad de corridas aceptadoras: i(Acc(s)) en ε, Σ k(s', w) en a·w."""
    return _paso_ufa(
        n, palabras, k,
        vacia=lambda s: ExtNat(1 if s in n.accepting else 0),
        combinar=lambda valores: sum(valores, ExtNat(0)),
    )


def verificar_etiquetado(n: Nfa, mc_labels: MarkovChain):
    if set(mc_labels.states) != set(n.alphabet):
        raise ValidationError(
            f"Los estados de la MC de letras {sorted(mc_labels.states)} no coinciden "
            f"con el alfabeto del NFA {sorted(n.alphabet)}",
            code="invariant",
        )


def _prob_letra(mc_labels: MarkovChain, letra, resto) -> float:
    """c(a, b) con b la primera letra de resto·✓."""
    siguiente = resto[0] if resto else TARGET
    return mc_labels.transitions[letra].get(siguiente, 0.0)


def step_ufa_prob_phi(n: Nfa, mc_labels: MarkovChain, palabras, k: Valuation) -> Valuation:
    """
    Sobre 2 × I1: en ε vale (Acc, Acc); en a·w la primera componente es el
    lenguaje y la segunda min(π1 k(s, a·w), max_{s'} c(a, b)·π2 k(s', w)),
    con π1 tomado del índice actual.
    """
    def valor(indice):
        s, w = indice
        if not w:
            acepta = s in n.accepting
            return (acepta, 1.0 if acepta else 0.0)
        letra, resto = w[0], w[1:]
        sucesores = n.sucesores(s, letra)
        c = _prob_letra(mc_labels, letra, resto)
        acepta = any(k[(t, resto)][0] for t in sucesores)
        mejor = max((c * k[(t, resto)][1] for t in sucesores), default=0.0)
        return (acepta, min(1.0 if k[indice][0] else 0.0, mejor))

    return Valuation((i, valor(i)) for i in ufa_indices(n, palabras))


def step_ufa_prob_psi(n: Nfa, mc_labels: MarkovChain, palabras, k: Valuation) -> Valuation:
    """Sobre ℕ∞ × I∞: cantidad de corridas y suma de sus probabilidades."""
    def valor(indice):
        s, w = indice
        if not w:
            acepta = 1 if s in n.accepting else 0
            return (ExtNat(acepta), ExtReal(acepta))
        letra, resto = w[0], w[1:]
        c = _prob_letra(mc_labels, letra, resto)
        cuenta, suma = ExtNat(0), ExtReal(0)
        for t in n.sucesores(s, letra):
            cuenta = cuenta + k[(t, resto)][0]
            suma = suma + k[(t, resto)][1] * c
        return (cuenta, suma)

    return Valuation((i, valor(i)) for i in ufa_indices(n, palabras))


def step_ufa_prob_pair(n: Nfa, mc_labels: MarkovChain, palabras, k_phi: Valuation, k_psi: Valuation):
    """Las dos variantes de una vez: (Φ(k_phi), Ψ(k_psi))."""
    verificar_etiquetado(n, mc_labels)
    return (
        step_ufa_prob_phi(n, mc_labels, palabras, k_phi),
        step_ufa_prob_psi(n, mc_labels, palabras, k_psi),
    )


# =========================================================
# 7. REGISTRO DE OPERADORES
# =========================================================

@dataclass(frozen=True)
class OperatorHandle:
    """Un funcional de paso listo para iterar: retículo, índices y mínimo."""
    tag: str
    model: object
    lattice: Lattice
    indices: tuple
    paso: Callable = field(repr=False)

    def bottom(self) -> Valuation:
        return Valuation.constante(self.indices, self.lattice.bottom())

    def __call__(self, k: Valuation) -> Valuation:
        return self.paso(k)


# tag -> tipo de modelo que acepta
TIPOS_POR_TAG = {
    "mc_partial": MarkovChain,
    "mc_total": MarkovChain,
    "mdp_partial_frontier": Mdp,
    "mdp_total": Mdp,
    "lift_partial": Mdp,
    "lift_total": Mdp,
    "resource_bounded": ResourceGraph,
    "resource_reach": ResourceGraph,
    "dlts_partial": Dlts,
    "dlts_total": Dlts,
    "ufa_lang": Nfa,
    "ufa_count": Nfa,
    "ufa_prob_pair": Nfa,
    "ufa_prob_count": Nfa,
}


def build_operator(model, tag: str, *, words=None, maxlen=None, mc_labels=None, limite=None) -> OperatorHandle:
    """
    Arma el OperatorHandle de una etiqueta de instancia.
    `words` son las palabras lazo (dlts); `maxlen` acota el dominio de palabras
    (ufa); `mc_labels` es la MC sobre el alfabeto (ufa_prob_*).
    """
    if tag not in TIPOS_POR_TAG:
        raise ValidationError(f"Instancia desconocida: {tag}", code="schema")
    esperado = TIPOS_POR_TAG[tag]
    if not isinstance(model, esperado):
        raise ValidationError(
            f"La instancia {tag} necesita un modelo '{esperado.tipo}' y recibió '{model.tipo}'",
            code="schema",
        )

    def armar(lattice, indices, paso):
        return OperatorHandle(tag=tag, model=model, lattice=lattice, indices=tuple(indices), paso=paso)

    estados = model.states
    if tag == "mc_partial":
        return armar(PAR_MC, estados, lambda k: step_mc_partial(model, k))
    if tag == "mc_total":
        return armar(I_INF, estados, lambda k: step_mc_total(model, k))
    if tag == "mdp_partial_frontier":
        return armar(FRONTERA, estados, lambda k: step_mdp_partial(model, k, limite))
    if tag == "mdp_total":
        return armar(I_INF, estados, lambda k: step_mdp_total(model, k))
    if tag == "lift_partial":
        paso = lift_partial(step_mc_partial)
        return armar(FRONTERA, estados, lambda k: paso(model, k, limite))
    if tag == "lift_total":
        paso = lift_total(step_mc_partial)
        return armar(I_INF, estados, lambda k: paso(model, k))
    if tag == "resource_bounded":
        return armar(BoundedNat(model.bound), estados, lambda k: step_resource(model, k))
    if tag == "resource_reach":
        return armar(BOOL2, estados, lambda k: step_resource_reach(model, k))

    if tag.startswith("dlts"):
        palabras = suffix_closure(words or ())
        indices = dlts_indices(model, palabras)
        if tag == "dlts_partial":
            return armar(LEX2, indices, lambda k: step_dlts_partial(model, palabras, k))
        return armar(BOOL2, indices, lambda k: step_dlts_total(model, palabras, k))

    # Autómatas
    if maxlen is None:
        maxlen = conf.obtener("LONGITUD_MAXIMA")
    palabras = words_up_to(model.alphabet, maxlen) if words is None else tuple(words)
    _verificar_sufijos(palabras)
    indices = ufa_indices(model, palabras)
    if tag == "ufa_lang":
        return armar(BOOL2, indices, lambda k: step_ufa_lang(model, palabras, k))
    if tag == "ufa_count":
        return armar(NAT, indices, lambda k: step_ufa_count(model, palabras, k))

    if mc_labels is None:
        raise ValidationError(f"La instancia {tag} necesita la MC de letras (--mc-labels)", code="schema")
    verificar_etiquetado(model, mc_labels)
    if tag == "ufa_prob_pair":
        return armar(Product(BOOL2, I1), indices, lambda k: step_ufa_prob_phi(model, mc_labels, palabras, k))
    return armar(Product(NAT, I_INF), indices, lambda k: step_ufa_prob_psi(model, mc_labels, palabras, k))
