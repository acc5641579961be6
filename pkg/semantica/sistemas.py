# semantica/sistemas.py
"""
Registros de los sistemas de transición (coálgebras) que parametrizan cada
transformador de predicados, con su validación y su ingesta/serialización JSON.

El estado objetivo ✓ se escribe "__target__" en los archivos; no es un estado.
"""
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Union

from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)

TARGET = "__target__"
TOLERANCIA_DISTRIBUCION = 1e-9


# =========================================================
# 1. REGISTROS
# =========================================================

@dataclass(frozen=True)
class MarkovChain:
    states: tuple
    transitions: Mapping[str, Mapping[str, float]]
    rewards: Mapping[str, int]
    tipo = "mc"


@dataclass(frozen=True)
class Choice:
    """Una elección (d, n): distribución sobre S + {✓} y recompensa natural."""
    dist: Mapping[str, float]
    reward: int = 0


@dataclass(frozen=True)
class Mdp:
    states: tuple
    choices: Mapping[str, tuple]
    tipo = "mdp"


@dataclass(frozen=True)
class Nfa:
    states: tuple
    alphabet: tuple
    delta: Mapping[str, Mapping[str, tuple]]
    accepting: frozenset
    tipo = "nfa"

    def sucesores(self, estado, letra) -> tuple:
        return self.delta[estado][letra]


@dataclass(frozen=True)
class Dlts:
    states: tuple
    labels: tuple
    step: Mapping[str, Mapping[str, str]]
    safe: frozenset
    tipo = "dlts"


@dataclass(frozen=True)
class ResourceNode:
    succ: tuple
    resource: int = 0


@dataclass(frozen=True)
class ResourceGraph:
    states: tuple
    nodes: Mapping[str, Union[str, ResourceNode]]
    bound: int
    tipo = "resource"

    def es_objetivo(self, estado) -> bool:
        return self.nodes[estado] == TARGET


@dataclass(frozen=True)
class LassoWord:
    """
    La palabra infinita u·v^ω. Se guarda normalizada (prefijo mínimo y lazo
    primitivo) para que dos escrituras de la misma palabra sean iguales.
    """
    prefix: tuple = ()
    loop: tuple = field(default=())

    def __post_init__(self):
        prefijo, lazo = tuple(self.prefix), tuple(self.loop)
        if not lazo:
            raise ValidationError("El lazo de una palabra lazo no puede ser vacío", code="invariant")
        # Lazo primitivo: (ab)(ab) -> (ab)
        for periodo in range(1, len(lazo) + 1):
            if len(lazo) % periodo == 0 and lazo[:periodo] * (len(lazo) // periodo) == lazo:
                lazo = lazo[:periodo]
                break
        # Prefijo mínimo: c(ac)^ω -> (ca)^ω
        while prefijo and prefijo[-1] == lazo[-1]:
            prefijo = prefijo[:-1]
            lazo = lazo[-1:] + lazo[:-1]
        object.__setattr__(self, "prefix", prefijo)
        object.__setattr__(self, "loop", lazo)

    @property
    def cabeza(self):
        return self.prefix[0] if self.prefix else self.loop[0]

    def cola(self) -> "LassoWord":
        """El sufijo que queda después de consumir una letra."""
        if self.prefix:
            return LassoWord(self.prefix[1:], self.loop)
        return LassoWord((), self.loop[1:] + self.loop[:1])

    def __str__(self):
        unir = "".join if all(len(x) == 1 for x in self.prefix + self.loop) else " ".join
        return f"{unir(self.prefix)}({unir(self.loop)})^ω"


Modelo = Union[MarkovChain, Mdp, Nfa, Dlts, ResourceGraph]


# =========================================================
# 2. VALIDACIÓN
# =========================================================

def _error_esquema(mensaje):
    return ValidationError(mensaje, code="schema")


def _error_invariante(mensaje):
    return ValidationError(mensaje, code="invariant")


def _es_natural(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def _exigir(datos: dict, clave: str, tipo, contexto="el modelo"):
    if clave not in datos:
        raise _error_esquema(f"Falta la clave '{clave}' en {contexto}")
    valor = datos[clave]
    if not isinstance(valor, tipo):
        raise _error_esquema(f"'{clave}' en {contexto} tiene un tipo inválido")
    return valor


def _leer_estados(datos: dict) -> tuple:
    estados = _exigir(datos, "states", list)
    if not all(isinstance(s, str) for s in estados):
        raise _error_esquema("Los identificadores de estado deben ser strings")
    if len(set(estados)) != len(estados):
        raise _error_invariante("Hay estados repetidos en 'states'")
    if TARGET in estados:
        raise _error_invariante(f"'{TARGET}' (✓) no es un estado y no puede figurar en 'states'")
    return tuple(estados)


def _leer_distribucion(crudo, estados: tuple, origen: str) -> dict:
    if not isinstance(crudo, dict):
        raise _error_esquema(f"La distribución de {origen} debe ser un objeto")
    validos = set(estados) | {TARGET}
    dist = {}
    for destino, prob in crudo.items():
        if destino not in validos:
            raise _error_invariante(f"La distribución de {origen} apunta al estado desconocido '{destino}'")
        if isinstance(prob, bool) or not isinstance(prob, (int, float)) or math.isnan(prob):
            raise _error_esquema(f"Probabilidad no numérica en {origen} -> {destino}")
        if not 0 <= prob <= 1:
            raise _error_invariante(f"La probabilidad {origen} -> {destino} = {prob} está fuera de [0, 1]")
        if prob > 0:
            dist[destino] = float(prob)
    suma = math.fsum(crudo.values())
    if abs(suma - 1.0) > TOLERANCIA_DISTRIBUCION:
        raise _error_invariante(f"La distribución de {origen} suma {suma:.12g} (debe sumar 1)")
    return dist


def _leer_recompensa(crudo, origen: str) -> int:
    if not _es_natural(crudo):
        raise _error_invariante(f"La recompensa de {origen} debe ser un natural (recibido {crudo!r})")
    return crudo


def _sin_salidas_desde_objetivo(tabla: dict, nombre: str):
    if TARGET in tabla:
        raise _error_invariante(f"✓ no tiene transiciones salientes: '{TARGET}' no puede ser origen en '{nombre}'")


def _por_estado(tabla: dict, estados: tuple, nombre: str):
    _sin_salidas_desde_objetivo(tabla, nombre)
    for origen in tabla:
        if origen not in estados:
            raise _error_invariante(f"'{nombre}' menciona el estado desconocido '{origen}'")
    for estado in estados:
        if estado not in tabla:
            raise _error_invariante(f"'{nombre}' no define el estado '{estado}'")


def _cargar_mc(datos: dict) -> MarkovChain:
    estados = _leer_estados(datos)
    crudas = _exigir(datos, "transitions", dict)
    recompensas = _exigir(datos, "rewards", dict)
    _por_estado(crudas, estados, "transitions")
    _por_estado(recompensas, estados, "rewards")
    return MarkovChain(
        states=estados,
        transitions={s: _leer_distribucion(crudas[s], estados, s) for s in estados},
        rewards={s: _leer_recompensa(recompensas[s], s) for s in estados},
    )


def _cargar_mdp(datos: dict) -> Mdp:
    estados = _leer_estados(datos)
    crudas = _exigir(datos, "choices", dict)
    _por_estado(crudas, estados, "choices")
    elecciones = {}
    for s in estados:
        lista = crudas[s]
        if not isinstance(lista, list):
            raise _error_esquema(f"Las elecciones de {s} deben ser una lista")
        if not lista:
            raise _error_invariante(f"c({s}) debe ser no vacío")
        propias = []
        for i, crudo in enumerate(lista):
            if not isinstance(crudo, dict):
                raise _error_esquema(f"La elección {i} de {s} debe ser un objeto")
            contexto = f"{s}[{i}]"
            propias.append(Choice(
                dist=_leer_distribucion(_exigir(crudo, "dist", dict, contexto), estados, contexto),
                reward=_leer_recompensa(crudo.get("reward", 0), contexto),
            ))
        elecciones[s] = tuple(propias)
    return Mdp(states=estados, choices=elecciones)


def _leer_alfabeto(datos: dict, clave: str) -> tuple:
    letras = _exigir(datos, clave, list)
    if not all(isinstance(x, str) and x for x in letras):
        raise _error_esquema(f"'{clave}' debe ser una lista de strings no vacíos")
    if len(set(letras)) != len(letras):
        raise _error_invariante(f"Hay letras repetidas en '{clave}'")
    return tuple(letras)


def _leer_subconjunto(datos: dict, clave: str, estados: tuple) -> frozenset:
    crudo = _exigir(datos, clave, list)
    for s in crudo:
        if s not in estados:
            raise _error_invariante(f"'{clave}' menciona el estado desconocido '{s}'")
    return frozenset(crudo)


def _cargar_nfa(datos: dict) -> Nfa:
    estados = _leer_estados(datos)
    alfabeto = _leer_alfabeto(datos, "alphabet")
    crudo = _exigir(datos, "delta", dict)
    _sin_salidas_desde_objetivo(crudo, "delta")
    delta = {}
    for s in estados:
        fila = crudo.get(s, {})
        if not isinstance(fila, dict):
            raise _error_esquema(f"delta[{s}] debe ser un objeto")
        for letra in fila:
            if letra not in alfabeto:
                raise _error_invariante(f"delta[{s}] usa la letra '{letra}' que no está en el alfabeto")
        delta[s] = {}
        for letra in alfabeto:
            destinos = fila.get(letra, [])
            if not isinstance(destinos, list):
                raise _error_esquema(f"delta[{s}][{letra}] debe ser una lista de estados")
            for t in destinos:
                if t not in estados:
                    raise _error_invariante(f"delta[{s}][{letra}] apunta al estado desconocido '{t}'")
            # δ total: lo que falta es el conjunto vacío
            delta[s][letra] = tuple(dict.fromkeys(destinos))
    for s in crudo:
        if s not in estados:
            raise _error_invariante(f"'delta' menciona el estado desconocido '{s}'")
    return Nfa(
        states=estados,
        alphabet=alfabeto,
        delta=delta,
        accepting=_leer_subconjunto(datos, "accepting", estados),
    )


def _cargar_dlts(datos: dict) -> Dlts:
    estados = _leer_estados(datos)
    etiquetas = _leer_alfabeto(datos, "labels")
    crudo = _exigir(datos, "step", dict)
    _por_estado(crudo, estados, "step")
    paso = {}
    for s in estados:
        fila = crudo[s]
        if not isinstance(fila, dict):
            raise _error_esquema(f"step[{s}] debe ser un objeto")
        for etiqueta in fila:
            if etiqueta not in etiquetas:
                raise _error_invariante(f"step[{s}] usa la etiqueta '{etiqueta}' que no está en 'labels'")
        paso[s] = {}
        for etiqueta in etiquetas:
            if etiqueta not in fila:
                raise _error_invariante(f"step no es total: falta step[{s}][{etiqueta}]")
            destino = fila[etiqueta]
            if not isinstance(destino, str):
                raise _error_invariante(f"step no es determinista: step[{s}][{etiqueta}] debe ser un único destino")
            if destino != TARGET and destino not in estados:
                raise _error_invariante(f"step[{s}][{etiqueta}] apunta al estado desconocido '{destino}'")
            paso[s][etiqueta] = destino
    return Dlts(
        states=estados,
        labels=etiquetas,
        step=paso,
        safe=_leer_subconjunto(datos, "safe", estados),
    )


def _cargar_resource(datos: dict) -> ResourceGraph:
    estados = _leer_estados(datos)
    cota = _exigir(datos, "bound", int)
    if isinstance(cota, bool) or cota < 1:
        raise _error_invariante(f"La cota M debe ser un natural ≥ 1 (recibido {cota!r})")
    crudo = _exigir(datos, "nodes", dict)
    _por_estado(crudo, estados, "nodes")
    nodos = {}
    for s in estados:
        nodo = crudo[s]
        if nodo == TARGET:
            nodos[s] = TARGET
            continue
        if not isinstance(nodo, dict):
            raise _error_esquema(f"nodes[{s}] debe ser '{TARGET}' o un objeto con 'succ' y 'resource'")
        sucesores = _exigir(nodo, "succ", list, f"nodes[{s}]")
        for t in sucesores:
            if t not in estados:
                raise _error_invariante(f"nodes[{s}] apunta al estado desconocido '{t}'")
        nodos[s] = ResourceNode(
            succ=tuple(dict.fromkeys(sucesores)),
            resource=_leer_recompensa(nodo.get("resource", 0), s),
        )
    return ResourceGraph(states=estados, nodes=nodos, bound=cota)


CARGADORES = {
    "mc": _cargar_mc,
    "mdp": _cargar_mdp,
    "nfa": _cargar_nfa,
    "dlts": _cargar_dlts,
    "resource": _cargar_resource,
}


# =========================================================
# 3. INGESTA Y SERIALIZACIÓN
# =========================================================

def _parsear_json(texto):
    if isinstance(texto, bytes):
        try:
            texto = texto.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ValidationError(f"El archivo no es UTF-8 válido (byte {e.start})", code="parse") from e
    try:
        return json.loads(texto)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"JSON inválido en línea {e.lineno}, columna {e.colno}: {e.msg}", code="parse"
        ) from e


def load_model(texto) -> Modelo:
    """
    Parsea y valida un modelo. Errores:
    ValidationError(code="parse") si el JSON es inválido (con línea y columna),
    code="schema" si falta o sobra forma, code="invariant" si se viola un invariante.
    """
    datos = _parsear_json(texto)
    if not isinstance(datos, dict):
        raise _error_esquema("El modelo debe ser un objeto JSON")
    tipo = datos.get("type")
    if tipo not in CARGADORES:
        raise _error_esquema(f"Tipo de modelo desconocido: {tipo!r} (esperado uno de {sorted(CARGADORES)})")

    modelo = CARGADORES[tipo](datos)
    logger.info("Modelo %s cargado: %d estados", tipo, len(modelo.states))
    return modelo


def _a_dict(modelo: Modelo) -> dict:
    base = {"type": modelo.tipo, "states": list(modelo.states)}
    if isinstance(modelo, MarkovChain):
        base["transitions"] = {s: dict(modelo.transitions[s]) for s in modelo.states}
        base["rewards"] = dict(modelo.rewards)
    elif isinstance(modelo, Mdp):
        base["choices"] = {
            s: [{"dist": dict(c.dist), "reward": c.reward} for c in modelo.choices[s]]
            for s in modelo.states
        }
    elif isinstance(modelo, Nfa):
        base["alphabet"] = list(modelo.alphabet)
        base["delta"] = {
            s: {a: list(modelo.delta[s][a]) for a in modelo.alphabet if modelo.delta[s][a]}
            for s in modelo.states
        }
        base["accepting"] = [s for s in modelo.states if s in modelo.accepting]
    elif isinstance(modelo, Dlts):
        base["labels"] = list(modelo.labels)
        base["step"] = {s: dict(modelo.step[s]) for s in modelo.states}
        base["safe"] = [s for s in modelo.states if s in modelo.safe]
    elif isinstance(modelo, ResourceGraph):
        base["bound"] = modelo.bound
        base["nodes"] = {
            s: n if n == TARGET else {"succ": list(n.succ), "resource": n.resource}
            for s, n in modelo.nodes.items()
        }
    else:
        raise TypeError(f"No sé serializar {type(modelo).__name__}")
    return base


def dump_model(modelo: Modelo) -> str:
    """Esquema canónico: claves ordenadas; `states` conserva el orden del archivo."""
    return json.dumps(_a_dict(modelo), sort_keys=True, ensure_ascii=False, indent=2)


def load_lassos(texto) -> tuple:
    """Lee `[{"prefix": [...], "loop": [...]}, ...]`."""
    datos = _parsear_json(texto)
    if not isinstance(datos, list):
        raise _error_esquema("El archivo de palabras debe ser una lista")
    palabras = []
    for i, crudo in enumerate(datos):
        if not isinstance(crudo, dict):
            raise _error_esquema(f"La palabra {i} debe ser un objeto")
        prefijo = crudo.get("prefix", [])
        lazo = _exigir(crudo, "loop", list, f"la palabra {i}")
        if not isinstance(prefijo, list) or not all(isinstance(x, str) for x in prefijo + lazo):
            raise _error_esquema(f"La palabra {i} debe tener listas de etiquetas (strings)")
        palabras.append(LassoWord(tuple(prefijo), tuple(lazo)))
    return tuple(dict.fromkeys(palabras))


def validar_lassos(dlts: Dlts, palabras) -> None:
    for w in palabras:
        for etiqueta in w.prefix + w.loop:
            if etiqueta not in dlts.labels:
                raise _error_invariante(f"La palabra {w} usa la etiqueta '{etiqueta}' que no está en 'labels'")


# =========================================================
# 4. CONSTRUCCIONES
# =========================================================

def embed_mc_as_mdp(mc: MarkovChain) -> Mdp:
    """Cada estado con una única elección: la unidad de la mónada de partes."""
    return Mdp(
        states=mc.states,
        choices={s: (Choice(dist=dict(mc.transitions[s]), reward=mc.rewards[s]),) for s in mc.states},
    )


def project_mdp_to_mc(mdp: Mdp) -> MarkovChain:
    """Inversa de `embed_mc_as_mdp` sobre MDPs de elecciones unitarias."""
    for s in mdp.states:
        if len(mdp.choices[s]) != 1:
            raise _error_invariante(f"c({s}) tiene {len(mdp.choices[s])} elecciones; se esperaba una")
    return MarkovChain(
        states=mdp.states,
        transitions={s: dict(mdp.choices[s][0].dist) for s in mdp.states},
        rewards={s: mdp.choices[s][0].reward for s in mdp.states},
    )


def words_up_to(alfabeto, n: int) -> tuple:
    """Todas las palabras de longitud ≤ n, en orden longitud-lexicográfico (cerrado por sufijos)."""
    return tuple(
        palabra
        for largo in range(n + 1)
        for palabra in itertools.product(alfabeto, repeat=largo)
    )


def suffix_closure(palabras) -> tuple:
    """Clausura de un conjunto de palabras lazo bajo el corrimiento de una letra."""
    vistas = dict.fromkeys(palabras)
    pendientes = list(vistas)
    while pendientes:
        siguiente = pendientes.pop().cola()
        if siguiente not in vistas:
            vistas[siguiente] = None
            pendientes.append(siguiente)
    return tuple(vistas)


def formatear_palabra(palabra) -> str:
    if isinstance(palabra, LassoWord):
        return str(palabra)
    if not palabra:
        return "ε"
    return "".join(palabra) if all(len(x) == 1 for x in palabra) else " ".join(palabra)
