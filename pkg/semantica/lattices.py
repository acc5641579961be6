# semantica/lattices.py
"""
Valores de retículo del motor: reales y naturales extendidos, fronteras de
Pareto, valuaciones finitas y conexiones de Galois entre dominios semánticos.

Todo es inmutable. Las comparaciones de orden son exactas; la tolerancia sólo
aparece en las igualdades (`equal`, `in_fix_unit`, `in_fix_counit`).
"""
import math
import random
from dataclasses import dataclass
from functools import total_ordering
from typing import Callable, Iterable, Iterator

from .exceptions import ErrorReticulo

# Holgura para aceptar probabilidades calculadas que se pasan de 1 por redondeo.
HOLGURA_INTERVALO = 1e-9


# =========================================================
# 1. ARITMÉTICA EXTENDIDA (convención 0·∞ = 0)
# =========================================================

@total_ordering
class _Extendido:
    """
    Número no negativo con un ∞ etiquetado explícitamente.
    IEEE dice 0·inf = NaN; acá 0·∞ = ∞·0 = 0, y eso se resuelve en un solo lugar.
    """
    __slots__ = ("valor", "infinito")
    _tipo = float

    def __init__(self, valor=0, infinito=False):
        if not infinito and isinstance(valor, (int, float)) and math.isinf(valor):
            infinito = True
        if infinito:
            valor = self._tipo(0)
        else:
            if isinstance(valor, bool) or not isinstance(valor, (int, float)) or math.isnan(valor):
                raise ErrorReticulo(f"Valor no numérico para {type(self).__name__}: {valor!r}")
            if valor < 0:
                raise ErrorReticulo(f"{type(self).__name__} no admite negativos: {valor!r}")
            if self._tipo is int and int(valor) != valor:
                raise ErrorReticulo(f"ExtNat sólo admite naturales: {valor!r}")
            valor = self._tipo(valor)
        object.__setattr__(self, "valor", valor)
        object.__setattr__(self, "infinito", bool(infinito))

    def __setattr__(self, nombre, valor):
        raise AttributeError(f"{type(self).__name__} es inmutable")

    @classmethod
    def _coercer(cls, otro):
        if isinstance(otro, cls):
            return otro
        if isinstance(otro, (int, float)) and not isinstance(otro, bool):
            return cls(otro)
        return None

    @property
    def es_finito(self) -> bool:
        return not self.infinito

    def __add__(self, otro):
        otro = self._coercer(otro)
        if otro is None:
            return NotImplemented
        if self.infinito or otro.infinito:
            return type(self)(infinito=True)
        return type(self)(self.valor + otro.valor)

    __radd__ = __add__

    def __mul__(self, otro):
        otro = self._coercer(otro)
        if otro is None:
            return NotImplemented
        # 0·∞ = ∞·0 = 0
        if (self.es_finito and self.valor == 0) or (otro.es_finito and otro.valor == 0):
            return type(self)(0)
        if self.infinito or otro.infinito:
            return type(self)(infinito=True)
        return type(self)(self.valor * otro.valor)

    __rmul__ = __mul__

    def __eq__(self, otro):
        otro = self._coercer(otro)
        if otro is None:
            return NotImplemented
        return self.infinito == otro.infinito and self.valor == otro.valor

    def __lt__(self, otro):
        otro = self._coercer(otro)
        if otro is None:
            return NotImplemented
        if self.infinito:
            return False
        if otro.infinito:
            return True
        return self.valor < otro.valor

    def __hash__(self):
        return hash(float(self))

    def __float__(self):
        return math.inf if self.infinito else float(self.valor)

    def __repr__(self):
        return "∞" if self.infinito else repr(self.valor)

    def distancia(self, otro) -> float:
        """|a − b| con ∞ − ∞ = 0 y finito vs ∞ = inf."""
        otro = self._coercer(otro)
        if self.infinito and otro.infinito:
            return 0.0
        if self.infinito or otro.infinito:
            return math.inf
        return float(abs(self.valor - otro.valor))


class ExtReal(_Extendido):
    """Elemento de I∞ = [0, ∞]."""
    __slots__ = ()
    _tipo = float


class ExtNat(_Extendido):
    """Elemento de ℕ∞."""
    __slots__ = ()
    _tipo = int


INF = ExtReal(infinito=True)
NAT_INF = ExtNat(infinito=True)


class _Fondo:
    """El ⊥ agregado de M_⊥ (estrictamente debajo de 0)."""
    _instancia = None

    def __new__(cls):
        if cls._instancia is None:
            cls._instancia = super().__new__(cls)
        return cls._instancia

    def __repr__(self):
        return "⊥"

    def __reduce__(self):
        return (_Fondo, ())


BOTTOM = _Fondo()


# =========================================================
# 2. FRONTERAS DE PARETO (lowersets finitamente generados de I1 × I∞)
# =========================================================

def _domina(a, b) -> bool:
    """a ⊒ b componente a componente."""
    return a[0] >= b[0] and a[1] >= b[1]


class ParetoFrontier:
    """
    Anticadena finita de generadores (p, r) con p ∈ [0,1], r ∈ [0,∞].
    Forma canónica: ordenada por p creciente y r estrictamente decreciente.
    Representa el lowerset unión de los principales (p, r)↓.
    """
    __slots__ = ("puntos",)

    def __init__(self, puntos: Iterable = ()):
        normalizados = []
        for p, r in puntos:
            if isinstance(p, bool) or not isinstance(p, (int, float)):
                raise ErrorReticulo(f"Coordenada de probabilidad inválida: {p!r}")
            r = r if isinstance(r, ExtReal) else ExtReal(r)
            normalizados.append((float(p), r))
        object.__setattr__(self, "puntos", self._canonizar(normalizados))

    def __setattr__(self, nombre, valor):
        raise AttributeError("ParetoFrontier es inmutable")

    @staticmethod
    def _canonizar(puntos):
        # Barrido desde p alto: sobrevive quien supera la mejor r vista.
        ordenados = sorted(puntos, key=lambda x: (x[0], x[1]), reverse=True)
        conservados = []
        mejor_r = None
        for p, r in ordenados:
            if mejor_r is None or r > mejor_r:
                conservados.append((p, r))
                mejor_r = r
        conservados.reverse()
        return tuple(conservados)

    @classmethod
    def principal(cls, p, r) -> "ParetoFrontier":
        return cls([(p, r)])

    def __iter__(self) -> Iterator:
        return iter(self.puntos)

    def __len__(self):
        return len(self.puntos)

    def __eq__(self, otro):
        if not isinstance(otro, ParetoFrontier):
            return NotImplemented
        return self.puntos == otro.puntos

    def __hash__(self):
        return hash(self.puntos)

    def __repr__(self):
        cuerpo = ", ".join(f"({p!r}, {r!r})" for p, r in self.puntos)
        return "{" + cuerpo + "}"

    def contiene(self, punto) -> bool:
        """¿El punto está en el lowerset representado?"""
        return any(_domina(g, punto) for g in self.puntos)

    def union(self, otra: "ParetoFrontier") -> "ParetoFrontier":
        return ParetoFrontier(self.puntos + otra.puntos)

    def sup(self):
        if not self.puntos:
            raise ErrorReticulo("El supremo de una frontera vacía no está definido")
        return (max(p for p, _ in self.puntos), max(r for _, r in self.puntos))


# =========================================================
# 3. TIPOS DE RETÍCULO
# =========================================================

class Lattice:
    """
    Descriptor de un tipo de retículo: mínimo, join finito, orden, igualdad con
    tolerancia, distancia para reportes, muestreo y serialización.
    """
    nombre = "lattice"

    def contains(self, x) -> bool:
        raise NotImplementedError

    def bottom(self):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def join(self, elementos: Iterable):
        resultado = self.bottom()
        for x in elementos:
            resultado = self.join2(resultado, x)
        return resultado

    def join2(self, a, b):
        # En los retículos totales el join es el máximo
        return b if self.leq(a, b) else a

    def equal(self, a, b, tol: float = 0.0) -> bool:
        return a == b

    def leq_tol(self, a, b, tol: float = 0.0) -> bool:
        return self.leq(a, b)

    def distance(self, a, b) -> float:
        return 0.0 if a == b else math.inf

    def promote(self, x, tope):
        return x

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def a_json(self, x):
        return x

    def _verificar(self, *elementos):
        for x in elementos:
            if not self.contains(x):
                raise ErrorReticulo(f"{x!r} no es un elemento de {self.nombre}")

    def __repr__(self):
        return self.nombre


@dataclass(frozen=True, repr=False)
class Bool2(Lattice):
    nombre = "2"

    def contains(self, x):
        return isinstance(x, bool)

    def bottom(self):
        return False

    def leq(self, a, b):
        return (not a) or b

    def distance(self, a, b):
        return 0.0 if a == b else 1.0

    def sample(self, rng):
        return rng.random() < 0.5


@dataclass(frozen=True, repr=False)
class UnitInterval(Lattice):
    nombre = "I1"

    def contains(self, x):
        return (isinstance(x, (int, float)) and not isinstance(x, bool)
                and -HOLGURA_INTERVALO <= x <= 1 + HOLGURA_INTERVALO)

    def bottom(self):
        return 0.0

    def leq(self, a, b):
        return a <= b

    def equal(self, a, b, tol=0.0):
        return abs(a - b) <= tol

    def leq_tol(self, a, b, tol=0.0):
        return a <= b + tol

    def distance(self, a, b):
        return float(abs(a - b))

    def sample(self, rng):
        return rng.choice((0.0, 1.0, round(rng.random(), 3), round(rng.random(), 3)))


@dataclass(frozen=True, repr=False)
class ExtRealLat(Lattice):
    nombre = "I∞"

    def contains(self, x):
        return isinstance(x, ExtReal)

    def bottom(self):
        return ExtReal(0)

    def leq(self, a, b):
        return a <= b

    def equal(self, a, b, tol=0.0):
        return a.distancia(b) <= tol

    def leq_tol(self, a, b, tol=0.0):
        return a <= b or a.distancia(b) <= tol

    def distance(self, a, b):
        return a.distancia(b)

    def promote(self, x, tope):
        return INF if x.es_finito and x.valor > tope else x

    def sample(self, rng):
        if rng.random() < 0.1:
            return INF
        return ExtReal(rng.choice((0.0, 1.0, round(rng.uniform(0, 10), 3))))

    def a_json(self, x):
        return float(x)


@dataclass(frozen=True, repr=False)
class ExtNatLat(Lattice):
    nombre = "ℕ∞"

    def contains(self, x):
        return isinstance(x, ExtNat)

    def bottom(self):
        return ExtNat(0)

    def leq(self, a, b):
        return a <= b

    def distance(self, a, b):
        return a.distancia(b)

    def promote(self, x, tope):
        return NAT_INF if x.es_finito and x.valor > tope else x

    def sample(self, rng):
        if rng.random() < 0.05:
            return NAT_INF
        return ExtNat(rng.randint(0, 3))

    def a_json(self, x):
        return float(x) if x.infinito else x.valor


@dataclass(frozen=True, repr=False)
class BoundedNat(Lattice):
    """M_⊥ = {⊥, 0, …, M} con ⊥ estrictamente debajo de 0."""
    M: int = 1

    @property
    def nombre(self):
        return f"{self.M}_⊥"

    def contains(self, x):
        return x is BOTTOM or (isinstance(x, int) and not isinstance(x, bool) and 0 <= x <= self.M)

    def bottom(self):
        return BOTTOM

    def leq(self, a, b):
        if a is BOTTOM:
            return True
        if b is BOTTOM:
            return False
        return a <= b

    def distance(self, a, b):
        if a is BOTTOM or b is BOTTOM:
            return 0.0 if a is b else math.inf
        return float(abs(a - b))

    def sample(self, rng):
        return rng.choice([BOTTOM, *range(self.M + 1)])

    def a_json(self, x):
        return None if x is BOTTOM else x


@dataclass(frozen=True, repr=False)
class Product(Lattice):
    """Producto L1 × L2 con el orden componente a componente."""
    primero: Lattice = None
    segundo: Lattice = None

    @property
    def nombre(self):
        return f"{self.primero.nombre}×{self.segundo.nombre}"

    def contains(self, x):
        return (isinstance(x, tuple) and len(x) == 2
                and self.primero.contains(x[0]) and self.segundo.contains(x[1]))

    def bottom(self):
        return (self.primero.bottom(), self.segundo.bottom())

    def leq(self, a, b):
        return self.primero.leq(a[0], b[0]) and self.segundo.leq(a[1], b[1])

    def join2(self, a, b):
        return (self.primero.join2(a[0], b[0]), self.segundo.join2(a[1], b[1]))

    def equal(self, a, b, tol=0.0):
        return self.primero.equal(a[0], b[0], tol) and self.segundo.equal(a[1], b[1], tol)

    def leq_tol(self, a, b, tol=0.0):
        return self.primero.leq_tol(a[0], b[0], tol) and self.segundo.leq_tol(a[1], b[1], tol)

    def distance(self, a, b):
        return max(self.primero.distance(a[0], b[0]), self.segundo.distance(a[1], b[1]))

    def promote(self, x, tope):
        return (self.primero.promote(x[0], tope), self.segundo.promote(x[1], tope))

    def sample(self, rng):
        return (self.primero.sample(rng), self.segundo.sample(rng))

    def a_json(self, x):
        return [self.primero.a_json(x[0]), self.segundo.a_json(x[1])]


@dataclass(frozen=True, repr=False)
class Lex2(Lattice):
    """(2×2)_l: (a,b) ⊑ (c,d) sii a ≤ c y (a = c ⇒ b ≤ d). Es una cadena de 4."""
    nombre = "(2×2)_l"

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == 2 and all(isinstance(c, bool) for c in x)

    def bottom(self):
        return (False, False)

    def leq(self, a, b):
        if a[0] != b[0]:
            return b[0]
        return (not a[1]) or b[1]

    def distance(self, a, b):
        return 0.0 if a == b else 1.0

    def sample(self, rng):
        return (rng.random() < 0.5, rng.random() < 0.5)

    def a_json(self, x):
        return list(x)


@dataclass(frozen=True, repr=False)
class Frontier(Lattice):
    """Lowersets de I1 × I∞ representados por su frontera de Pareto."""
    nombre = "(I1×I∞)↓"

    def contains(self, x):
        return isinstance(x, ParetoFrontier)

    def bottom(self):
        # El motor siembra las cadenas con {(0,0)}↓, no con el vacío
        return ParetoFrontier.principal(0.0, ExtReal(0))

    def leq(self, a, b):
        return all(b.contiene(punto) for punto in a)

    def join2(self, a, b):
        return a.union(b)

    @staticmethod
    def _reducir(frontera, tol):
        """Descarta generadores dominados a menos de `tol` por otro ya conservado."""
        if tol <= 0:
            return frontera.puntos
        conservados = []
        for p, r in reversed(frontera.puntos):
            if not any(p <= q + tol and (r <= t or r.distancia(t) <= tol) for q, t in conservados):
                conservados.append((p, r))
        conservados.reverse()
        return tuple(conservados)

    def equal(self, a, b, tol=0.0):
        a, b = self._reducir(a, tol), self._reducir(b, tol)
        if len(a) != len(b):
            return False
        return all(
            abs(p1 - p2) <= tol and r1.distancia(r2) <= tol
            for (p1, r1), (p2, r2) in zip(a, b)
        )

    def leq_tol(self, a, b, tol=0.0):
        return all(
            any(p <= q + tol and (r <= t or r.distancia(t) <= tol) for q, t in b)
            for p, r in a
        )

    def distance(self, a, b):
        a, b = self._reducir(a, 1e-12), self._reducir(b, 1e-12)
        if len(a) != len(b):
            return math.inf
        return max(
            (max(abs(p1 - p2), r1.distancia(r2)) for (p1, r1), (p2, r2) in zip(a, b)),
            default=0.0,
        )

    def promote(self, x, tope):
        return ParetoFrontier((p, INF if r.es_finito and r.valor > tope else r) for p, r in x)

    def sample(self, rng):
        puntos = [(round(rng.random(), 3), ExtReal(round(rng.uniform(0, 10), 3)))
                  for _ in range(rng.randint(1, 3))]
        return ParetoFrontier(puntos)

    def a_json(self, x):
        return [[p, float(r)] for p, r in x]


BOOL2 = Bool2()
I1 = UnitInterval()
I_INF = ExtRealLat()
NAT = ExtNatLat()
LEX2 = Lex2()
FRONTERA = Frontier()
PAR_MC = Product(I1, I_INF)


# =========================================================
# 4. VALUACIONES  k ∈ [S, K]
# =========================================================

class Valuation:
    """
    Mapa total y finito índice → elemento. El orden de los índices es el de
    construcción (orden del archivo para estados, longitud-lexicográfico para
    palabras) y se respeta al serializar.
    """
    __slots__ = ("indices", "_valores")

    def __init__(self, valores):
        pares = list(valores.items()) if hasattr(valores, "items") else list(valores)
        object.__setattr__(self, "indices", tuple(i for i, _ in pares))
        object.__setattr__(self, "_valores", dict(pares))
        if len(self._valores) != len(self.indices):
            raise ErrorReticulo("Índices repetidos en la valuación")

    def __setattr__(self, nombre, valor):
        raise AttributeError("Valuation es inmutable")

    @classmethod
    def constante(cls, indices, valor) -> "Valuation":
        return cls((i, valor) for i in indices)

    def __getitem__(self, indice):
        return self._valores[indice]

    def __contains__(self, indice):
        return indice in self._valores

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def items(self):
        return ((i, self._valores[i]) for i in self.indices)

    def values(self):
        return (self._valores[i] for i in self.indices)

    def map(self, funcion: Callable) -> "Valuation":
        return Valuation((i, funcion(v)) for i, v in self.items())

    def __eq__(self, otra):
        if not isinstance(otra, Valuation):
            return NotImplemented
        return self._valores == otra._valores

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        return "Valuation(" + ", ".join(f"{i!r}: {v!r}" for i, v in self.items()) + ")"


def valuation_leq(a: Valuation, b: Valuation, lat: Lattice) -> bool:
    return all(lat.leq(a[i], b[i]) for i in a)


def valuation_equal(a: Valuation, b: Valuation, lat: Lattice, tol: float = 0.0) -> bool:
    return set(a.indices) == set(b.indices) and all(lat.equal(a[i], b[i], tol) for i in a)


def valuation_deviation(a: Valuation, b: Valuation, lat: Lattice) -> float:
    """Máxima distancia punto a punto (inf si algún par finito/∞ difiere)."""
    return max((lat.distance(a[i], b[i]) for i in a), default=0.0)


def sample_valuation(indices, lat: Lattice, rng: random.Random) -> Valuation:
    return Valuation((i, lat.sample(rng)) for i in indices)


# =========================================================
# 5. OPERACIONES BÁSICAS
# =========================================================

def leq(a, b, lat: Lattice) -> bool:
    """a ⊑ b en el orden de `lat`; falla si algún elemento no es de `lat`."""
    lat._verificar(a, b)
    return lat.leq(a, b)


def frontier_union(a: ParetoFrontier, b: ParetoFrontier) -> ParetoFrontier:
    return a.union(b)


def frontier_sup(a: ParetoFrontier):
    """El join en I1 × I∞ (máximo componente a componente)."""
    return a.sup()


# =========================================================
# 6. CONEXIONES DE GALOIS  L ⊣ R
# =========================================================

@dataclass(frozen=True)
class GaloisConnection:
    """
    Par monótono L: C → D, R: D → C con L(x) ⊑ y ⟺ x ⊑ R(y).
    `concreto` es C (donde vive Φ) y `abstracto` es D (donde vive LΦR / Ψ).
    """
    nombre: str
    concreto: Lattice
    abstracto: Lattice
    lower: Callable
    upper: Callable

    def unidad(self, x):
        """R(L(x)), el destino de η_x."""
        return self.upper(self.lower(x))

    def counidad(self, y):
        """L(R(y)), el origen de ε_y."""
        return self.lower(self.upper(y))


def _mc_lower(par):
    return par[1]


def _mc_upper(r):
    return (1.0, r)


def _mdp_lower(frontera):
    return frontera.sup()[1]


def _mdp_upper(r):
    return ParetoFrontier.principal(1.0, r)


def _dlts_lower(par):
    return par[0] and par[1]


def _dlts_upper(t):
    return (True, t)


def _ufa_lower(b):
    return ExtNat(1 if b else 0)


def _ufa_upper(n):
    return n >= 1


def _ufa_prob_lower(par):
    return (_ufa_lower(par[0]), ExtReal(par[1]))


def _ufa_prob_upper(par):
    n, r = par
    return (_ufa_upper(n), 1.0 if r >= 1 else float(r))


def _join_lower(frontera):
    return frontera.sup()


def _join_upper(par):
    return ParetoFrontier.principal(*par)


MC_CONNECTION = GaloisConnection("mc", PAR_MC, I_INF, _mc_lower, _mc_upper)
MDP_CONNECTION = GaloisConnection("mdp", FRONTERA, I_INF, _mdp_lower, _mdp_upper)
DLTS_CONNECTION = GaloisConnection("dlts", LEX2, BOOL2, _dlts_lower, _dlts_upper)
UFA_CONNECTION = GaloisConnection("ufa", BOOL2, NAT, _ufa_lower, _ufa_upper)
UFA_PROB_CONNECTION = GaloisConnection(
    "ufa_prob", Product(BOOL2, I1), Product(NAT, I_INF), _ufa_prob_lower, _ufa_prob_upper
)
FRONTIER_JOIN_CONNECTION = GaloisConnection("frontier_join", FRONTERA, PAR_MC, _join_lower, _join_upper)


def resource_connection(M: int) -> GaloisConnection:
    """L(⊥) = ⊥, L(m) = ⊤;  R(⊥) = ⊥, R(⊤) = M."""
    return GaloisConnection(
        f"resource({M})",
        BoundedNat(M),
        BOOL2,
        lambda m: m is not BOTTOM,
        lambda t: M if t else BOTTOM,
    )


CONEXIONES = {
    "mc": MC_CONNECTION,
    "mdp": MDP_CONNECTION,
    "dlts": DLTS_CONNECTION,
    "ufa": UFA_CONNECTION,
    "ufa_prob": UFA_PROB_CONNECTION,
    "frontier_join": FRONTIER_JOIN_CONNECTION,
}


def get_connection(nombre: str, **parametros) -> GaloisConnection:
    if nombre == "resource":
        return resource_connection(parametros["M"])
    try:
        return CONEXIONES[nombre]
    except KeyError:
        raise ErrorReticulo(f"Conexión desconocida: {nombre}") from None


def _verificar_valuacion(v: Valuation, lat: Lattice):
    for indice, x in v.items():
        if not lat.contains(x):
            raise ErrorReticulo(f"{x!r} en {indice!r} no es un elemento de {lat.nombre}")


def apply_lower(g: GaloisConnection, v: Valuation) -> Valuation:
    _verificar_valuacion(v, g.concreto)
    return v.map(g.lower)


def apply_upper(g: GaloisConnection, v: Valuation) -> Valuation:
    _verificar_valuacion(v, g.abstracto)
    return v.map(g.upper)


def in_fix_unit(g: GaloisConnection, v: Valuation, tol: float = 0.0) -> bool:
    """¿R(L(v)) = v punto a punto? (η_v iso)."""
    return valuation_equal(apply_upper(g, apply_lower(g, v)), v, g.concreto, tol)


def in_fix_counit(g: GaloisConnection, v: Valuation, tol: float = 0.0) -> bool:
    """¿L(R(v)) = v punto a punto? (ε_v iso)."""
    return valuation_equal(apply_lower(g, apply_upper(g, v)), v, g.abstracto, tol)
