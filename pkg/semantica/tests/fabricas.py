"""
Fábricas de modelos chicos con semilla fija para los tests.
Las probabilidades son múltiplos de 1/4 así las sumas dan 1 exactas.
"""
import random
from pathlib import Path

from semantica.sistemas import (
    TARGET, Choice, Dlts, MarkovChain, Mdp, Nfa, ResourceGraph, ResourceNode, load_lassos, load_model,
)

EJEMPLOS = Path(__file__).resolve().parent.parent / "ejemplos"


def ruta(nombre: str) -> str:
    return str(EJEMPLOS / nombre)


def cargar(nombre: str):
    return load_model((EJEMPLOS / nombre).read_bytes())


def cargar_palabras(nombre: str):
    return load_lassos((EJEMPLOS / nombre).read_bytes())


def _repartir(rng: random.Random, destinos: list, cuartos: int = 4) -> dict:
    """Reparte `cuartos`/4 de probabilidad entre los destinos (con repetición)."""
    dist = {}
    for _ in range(cuartos):
        destino = rng.choice(destinos)
        dist[destino] = dist.get(destino, 0.0) + 0.25
    return dist


def mc_casi_segura(rng: random.Random, max_estados: int = 8) -> MarkovChain:
    """Cada estado sale a ✓ con probabilidad ≥ 1/4: alcanza ✓ casi seguro."""
    estados = [f"s{i}" for i in range(rng.randint(1, max_estados))]
    transiciones = {}
    for s in estados:
        directo = rng.choice((1, 2))
        dist = _repartir(rng, estados + [TARGET], 4 - directo)
        dist[TARGET] = dist.get(TARGET, 0.0) + 0.25 * directo
        transiciones[s] = dist
    return MarkovChain(
        states=tuple(estados),
        transitions=transiciones,
        rewards={s: rng.randint(0, 9) for s in estados},
    )


def mc_con_trampa(rng: random.Random, max_estados: int = 6) -> MarkovChain:
    """Una MC casi segura más una trampa de recompensa positiva alcanzable desde s0."""
    base = mc_casi_segura(rng, max_estados)
    transiciones = dict(base.transitions)
    recompensas = dict(base.rewards)
    transiciones["trampa"] = {"trampa": 1.0}
    recompensas["trampa"] = rng.randint(1, 9)
    transiciones["s0"] = {TARGET: 0.5, "trampa": 0.5}
    return MarkovChain(states=base.states + ("trampa",), transitions=transiciones, rewards=recompensas)


def mdp_chico(rng: random.Random, max_estados: int = 3, max_elecciones: int = 3) -> Mdp:
    estados = [f"s{i}" for i in range(rng.randint(1, max_estados))]
    elecciones = {}
    for s in estados:
        elecciones[s] = tuple(
            Choice(dist=_repartir(rng, estados + [TARGET]), reward=rng.randint(0, 3))
            for _ in range(rng.randint(1, max_elecciones))
        )
    return Mdp(states=tuple(estados), choices=elecciones)


def grafo_recursos(rng: random.Random, max_estados: int = 10, max_cota: int = 5) -> ResourceGraph:
    estados = [f"x{i}" for i in range(rng.randint(1, max_estados))]
    nodos = {}
    for s in estados:
        if rng.random() < 0.25:
            nodos[s] = TARGET
            continue
        sucesores = rng.sample(estados, rng.randint(0, min(3, len(estados))))
        nodos[s] = ResourceNode(succ=tuple(sucesores), resource=rng.randint(0, 3))
    return ResourceGraph(states=tuple(estados), nodes=nodos, bound=rng.randint(1, max_cota))


def nfa_chico(rng: random.Random, max_estados: int = 5, densidad: float = 0.3) -> Nfa:
    estados = [f"q{i}" for i in range(rng.randint(1, max_estados))]
    alfabeto = ("a", "b")
    delta = {
        s: {a: tuple(t for t in estados if rng.random() < densidad) for a in alfabeto}
        for s in estados
    }
    aceptadores = frozenset(s for s in estados if rng.random() < 0.4)
    return Nfa(states=tuple(estados), alphabet=alfabeto, delta=delta, accepting=aceptadores)


def dlts_chico(rng: random.Random, max_estados: int = 4) -> Dlts:
    estados = [f"d{i}" for i in range(rng.randint(1, max_estados))]
    etiquetas = ("a", "b")
    paso = {s: {a: rng.choice(estados + [TARGET]) for a in etiquetas} for s in estados}
    seguros = frozenset(s for s in estados if rng.random() < 0.5)
    return Dlts(states=tuple(estados), labels=etiquetas, step=paso, safe=seguros)
