import functools
import itertools
import math
import random

from django.test import SimpleTestCase

from semantica.exceptions import ErrorReticulo
from semantica.lattices import (
    BOOL2, BOTTOM, CONEXIONES, FRONTERA, I1, I_INF, INF, LEX2, NAT, NAT_INF, PAR_MC,
    BoundedNat, ExtNat, ExtReal, ParetoFrontier, Valuation,
    apply_lower, frontier_sup, frontier_union, get_connection, in_fix_counit, in_fix_unit, leq,
    resource_connection, valuation_deviation, valuation_equal,
)


class ExtendidosTests(SimpleTestCase):

    def test_cero_por_infinito_es_cero(self):
        self.assertEqual(ExtReal(0) * INF, ExtReal(0))
        self.assertEqual(INF * 0, ExtReal(0))
        self.assertEqual(ExtNat(0) * NAT_INF, ExtNat(0))

    def test_suma_con_infinito(self):
        self.assertEqual(INF + 1, INF)
        self.assertEqual(ExtReal(1.5) + ExtReal(2), ExtReal(3.5))
        self.assertTrue(INF.infinito)

    def test_orden(self):
        self.assertTrue(ExtReal(3) < INF)
        self.assertFalse(INF < INF)
        self.assertTrue(ExtNat(2) >= 1)
        self.assertTrue(NAT_INF >= 1)
        self.assertEqual(max(ExtReal(1), INF, ExtReal(7)), INF)

    def test_float_infinito_se_convierte(self):
        self.assertEqual(ExtReal(math.inf), INF)
        self.assertEqual(float(INF), math.inf)

    def test_rechaza_negativos_y_no_naturales(self):
        with self.assertRaises(ErrorReticulo):
            ExtReal(-1)
        with self.assertRaises(ErrorReticulo):
            ExtNat(1.5)
        with self.assertRaises(ErrorReticulo):
            ExtReal(float("nan"))

    def test_distancia(self):
        self.assertEqual(INF.distancia(INF), 0.0)
        self.assertEqual(ExtReal(1).distancia(INF), math.inf)
        self.assertEqual(ExtReal(1).distancia(ExtReal(3)), 2.0)


class ParetoFrontierTests(SimpleTestCase):

    def test_forma_canonica(self):
        f = ParetoFrontier([(0.5, 2), (1, 0), (0.4, 1), (0.5, 2)])
        self.assertEqual(f.puntos, ((0.5, ExtReal(2)), (1.0, ExtReal(0))))

    def test_union_descarta_dominados(self):
        a = ParetoFrontier([(1, 0)])
        b = ParetoFrontier([(1, 3), (0.2, 1)])
        self.assertEqual(a.union(b).puntos, ((1.0, ExtReal(3)),))

    def test_sup_y_contiene(self):
        f = ParetoFrontier([(1, 0), (0.5, 2.5)])
        self.assertEqual(f.sup(), (1.0, ExtReal(2.5)))
        self.assertTrue(f.contiene((0.5, ExtReal(1))))
        self.assertFalse(f.contiene((0.9, ExtReal(1))))

    def test_sup_de_vacia_falla(self):
        with self.assertRaises(ErrorReticulo):
            ParetoFrontier().sup()

    def test_union_de_ejemplos(self):
        uno = ParetoFrontier([(1, 0)])
        self.assertEqual(
            frontier_union(uno, ParetoFrontier([(0.5, 10)])).puntos,
            ((0.5, ExtReal(10)), (1.0, ExtReal(0))),
        )
        self.assertEqual(frontier_union(uno, ParetoFrontier([(0.5, 0)])), uno)
        self.assertEqual(
            frontier_union(ParetoFrontier([(0.2, 3), (0.8, 1)]), ParetoFrontier([(0.5, 2)])).puntos,
            ((0.2, ExtReal(3)), (0.5, ExtReal(2)), (0.8, ExtReal(1))),
        )

    def test_supremo_de_ejemplos(self):
        self.assertEqual(frontier_sup(ParetoFrontier([(1, 0), (0.5, 10)])), (1.0, ExtReal(10)))
        self.assertEqual(frontier_sup(ParetoFrontier([(0, 0)])), (0.0, ExtReal(0)))
        self.assertEqual(frontier_sup(ParetoFrontier([(0.2, 3), (0.8, 1)])), (0.8, ExtReal(3)))
        with self.assertRaises(ErrorReticulo):
            frontier_sup(ParetoFrontier())

    def test_union_no_depende_del_orden(self):
        rng = random.Random(3)
        for _ in range(50):
            fronteras = [FRONTERA.sample(rng) for _ in range(4)]
            esperado = functools.reduce(frontier_union, fronteras)
            for orden in itertools.permutations(fronteras):
                with self.subTest(orden=orden):
                    self.assertEqual(functools.reduce(frontier_union, orden).puntos, esperado.puntos)
            self.assertEqual(ParetoFrontier(esperado.puntos), esperado)

    def test_supremo_monotono_en_la_union(self):
        rng = random.Random(4)
        for _ in range(200):
            a, b = FRONTERA.sample(rng), FRONTERA.sample(rng)
            union = frontier_union(a, b)
            self.assertTrue(FRONTERA.leq(a, union))
            self.assertTrue(PAR_MC.leq(frontier_sup(a), frontier_sup(union)))
            self.assertEqual(frontier_sup(union), PAR_MC.join2(frontier_sup(a), frontier_sup(b)))

    def test_igualdad_con_tolerancia_ignora_casi_duplicados(self):
        a = ParetoFrontier([(1.0, 10.0)])
        b = ParetoFrontier([(1.0 - 1e-12, 10.0 + 1e-12), (1.0, 10.0)])
        self.assertTrue(FRONTERA.equal(a, b, 1e-9))
        self.assertFalse(FRONTERA.equal(a, b, 0.0))


class ReticulosTests(SimpleTestCase):

    def test_bool2(self):
        self.assertTrue(leq(False, True, BOOL2))
        self.assertEqual(BOOL2.join([False, True, False]), True)

    def test_acotado_con_fondo(self):
        tres = BoundedNat(3)
        self.assertTrue(leq(BOTTOM, 0, tres))
        self.assertFalse(leq(2, BOTTOM, tres))
        self.assertEqual(tres.join([BOTTOM, 1, 3, 2]), 3)
        self.assertFalse(tres.contains(4))

    def test_lex2_es_una_cadena(self):
        cadena = [(False, False), (False, True), (True, False), (True, True)]
        for i, a in enumerate(cadena):
            for j, b in enumerate(cadena):
                self.assertEqual(LEX2.leq(a, b), i <= j)

    def test_producto(self):
        self.assertTrue(PAR_MC.leq((0.5, ExtReal(1)), (1.0, ExtReal(1))))
        self.assertFalse(PAR_MC.leq((0.5, ExtReal(2)), (1.0, ExtReal(1))))
        self.assertEqual(PAR_MC.bottom(), (0.0, ExtReal(0)))

    def test_leq_verifica_tipos(self):
        with self.assertRaises(ErrorReticulo):
            leq(True, ExtReal(1), BOOL2)
        with self.assertRaises(ErrorReticulo):
            leq(1.5, 0.5, I1)

    def test_frontera_minima_es_el_principal_del_origen(self):
        self.assertEqual(FRONTERA.bottom(), ParetoFrontier.principal(0.0, 0))

    def test_valuaciones(self):
        a = Valuation([("s", ExtReal(1)), ("t", INF)])
        b = Valuation([("s", ExtReal(1.0000001)), ("t", INF)])
        self.assertTrue(valuation_equal(a, b, I_INF, 1e-6))
        self.assertFalse(valuation_equal(a, b, I_INF))
        self.assertAlmostEqual(valuation_deviation(a, b, I_INF), 1e-7)
        self.assertEqual(list(a), ["s", "t"])


class ConexionesTests(SimpleTestCase):
    """Leyes de adjunción muestreadas sobre cada conexión registrada."""
    MUESTRAS = 1000

    def conexiones(self):
        return list(CONEXIONES.values()) + [resource_connection(3), resource_connection(1)]

    def test_ley_de_adjuncion(self):
        rng = random.Random(0)
        for g in self.conexiones():
            C, D = g.concreto, g.abstracto
            for _ in range(self.MUESTRAS):
                x, y = C.sample(rng), D.sample(rng)
                with self.subTest(conexion=g.nombre, x=x, y=y):
                    self.assertEqual(D.leq(g.lower(x), y), C.leq(x, g.upper(y)))

    def test_unidad_y_counidad(self):
        rng = random.Random(1)
        for g in self.conexiones():
            C, D = g.concreto, g.abstracto
            for _ in range(self.MUESTRAS):
                x, y = C.sample(rng), D.sample(rng)
                with self.subTest(conexion=g.nombre, x=x, y=y):
                    self.assertTrue(C.leq(x, g.unidad(x)))
                    self.assertTrue(D.leq(g.counidad(y), y))

    def test_idempotencia_y_estabilidad_de_fix(self):
        rng = random.Random(2)
        for g in self.conexiones():
            C, D = g.concreto, g.abstracto
            for _ in range(self.MUESTRAS):
                x, y = C.sample(rng), D.sample(rng)
                with self.subTest(conexion=g.nombre, x=x, y=y):
                    self.assertTrue(D.equal(g.lower(g.unidad(x)), g.lower(x)))
                    self.assertTrue(C.equal(g.upper(g.counidad(y)), g.upper(y)))
                    # R(L(x)) ya está en Fix(η) y L(R(y)) en Fix(ε)
                    self.assertTrue(in_fix_unit(g, Valuation([("i", g.unidad(x))])))
                    self.assertTrue(in_fix_counit(g, Valuation([("i", g.counidad(y))])))

    def test_fix_de_la_conexion_mc(self):
        g = get_connection("mc")
        self.assertTrue(in_fix_unit(g, Valuation([("s", (1.0, ExtReal(5)))])))
        self.assertFalse(in_fix_unit(g, Valuation([("s", (0.5, ExtReal(5)))])))

    def test_ufa_prob_satura_en_uno(self):
        g = get_connection("ufa_prob")
        self.assertEqual(g.upper((ExtNat(2), ExtReal(3.5))), (True, 1.0))
        self.assertEqual(g.upper((ExtNat(0), ExtReal(0.25))), (False, 0.25))

    def test_recursos(self):
        g = get_connection("resource", M=3)
        self.assertEqual(g.upper(True), 3)
        self.assertIs(g.upper(False), BOTTOM)
        self.assertFalse(g.lower(BOTTOM))
        self.assertTrue(g.lower(0))

    def test_conexion_desconocida(self):
        with self.assertRaises(ErrorReticulo):
            get_connection("inexistente")

    def test_aplicar_verifica_el_reticulo(self):
        with self.assertRaises(ErrorReticulo):
            apply_lower(get_connection("ufa"), Valuation([("s", ExtNat(1))]))

    def test_ufa_cuenta_y_lenguaje(self):
        g = get_connection("ufa")
        self.assertEqual(g.lower(True), ExtNat(1))
        self.assertTrue(g.upper(NAT_INF))
        self.assertFalse(g.upper(ExtNat(0)))
        self.assertTrue(NAT.leq(g.counidad(ExtNat(2)), ExtNat(2)))
