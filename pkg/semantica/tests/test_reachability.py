import random

import networkx as nx
from django.test import SimpleTestCase

from semantica.lattices import BOTTOM, get_connection, in_fix_unit, resource_connection
from semantica.services.oracle import LARGO_MAXIMO_ENUMERACION, OracleService
from semantica.services.reachability import (
    FAILS, HOLDS, INCONCLUSIVE, ReachabilityService, Veredicto,
)
from semantica.services.operators import build_operator
from semantica.services.solver import SolverService
from semantica.sistemas import TARGET, Choice, LassoWord, Mdp
from semantica.tests.fabricas import (
    cargar, cargar_palabras, dlts_chico, grafo_recursos, mc_casi_segura, mc_con_trampa, nfa_chico,
)


class VeredictoTests(SimpleTestCase):

    def test_a_json(self):
        veredicto = Veredicto(FAILS, "exact", ["s"])
        self.assertEqual(
            veredicto.a_json(),
            {"holds": False, "verdict": "fails", "scope": "exact", "witnesses": ["s"]},
        )


class CadenasDeMarkovTests(SimpleTestCase):

    def test_geometrica_alcanza_casi_seguro(self):
        veredicto = ReachabilityService.grc_mc(cargar("geom.json"))
        self.assertEqual(veredicto.estado, HOLDS)
        self.assertEqual(veredicto.scope, "exact")

    def test_trampa(self):
        self.assertEqual(ReachabilityService.grc_mc(cargar("trampa.json")).witnesses, ["s"])
        veredicto = ReachabilityService.grc_mc(cargar("trampa_dos_ramas.json"))
        self.assertEqual(veredicto.estado, FAILS)
        self.assertEqual(veredicto.witnesses, ["s", "t"])

    def test_aleatorias(self):
        rng = random.Random(20)
        for _ in range(20):
            self.assertTrue(ReachabilityService.grc_mc(mc_casi_segura(rng)).holds)
            veredicto = ReachabilityService.grc_mc(mc_con_trampa(rng))
            self.assertIn("s0", veredicto.witnesses)
            self.assertIn("trampa", veredicto.witnesses)

    def test_coincide_con_el_punto_fijo_de_la_unidad(self):
        # grc_mc vale sii μΦ ∈ Fix(η) para la conexión mc
        g = get_connection("mc")
        rng = random.Random(21)
        fijas = [cargar(nombre) for nombre in (
            "geom.json", "trampa.json", "trampa_dos_ramas.json", "mc_letras.json",
        )]
        aleatorias = [mc_casi_segura(rng, 5) for _ in range(10)] + [mc_con_trampa(rng, 5) for _ in range(10)]
        for mc in fijas + aleatorias:
            op = build_operator(mc, "mc_partial")
            mu = op.bottom()
            # cada estado sale a ✓ con probabilidad ≥ 1/4 o nunca llega: 400 pasos bastan para 1e-6
            for _ in range(400):
                mu = op(mu)
            with self.subTest(mc=mc):
                self.assertEqual(ReachabilityService.grc_mc(mc).holds, in_fix_unit(g, mu, 1e-6))


class RecursosTests(SimpleTestCase):

    def test_cadena_no_satura(self):
        veredicto = ReachabilityService.grc_resource(cargar("recursos_cadena.json"))
        self.assertEqual(veredicto.estado, FAILS)
        self.assertEqual([t["state"] for t in veredicto.witnesses], ["s1", "s2"])
        self.assertEqual(veredicto.detalle["mu"], {"s0": 3, "s1": 2, "s2": 0})

    def test_sin_objetivo_vale(self):
        veredicto = ReachabilityService.grc_resource(cargar("recursos_sin_objetivo.json"))
        self.assertEqual(veredicto.estado, HOLDS)
        self.assertEqual(veredicto.detalle["mu"], {"a": None, "b": None})

    def test_grafos_aleatorios(self):
        rng = random.Random(21)
        for _ in range(20):
            g = grafo_recursos(rng)
            veredicto = ReachabilityService.grc_resource(g)
            mu = SolverService.kleene_lfp(build_operator(g, "resource_bounded")).ultimo
            with self.subTest(grafo=g):
                self.assertEqual(veredicto.holds, in_fix_unit(resource_connection(g.bound), mu))
                self.assertEqual(mu, OracleService.resource_oracle(g))
                grafo = nx.DiGraph()
                grafo.add_nodes_from(g.states)
                for s in g.states:
                    if not g.es_objetivo(s):
                        grafo.add_edges_from((s, t) for t in g.nodes[s].succ)
                objetivos = {s for s in g.states if g.es_objetivo(s)}
                for s in g.states:
                    alcanza = bool(objetivos & (nx.descendants(grafo, s) | {s}))
                    self.assertEqual(mu[s] is not BOTTOM, alcanza)


class DltsTests(SimpleTestCase):

    def test_termina_vale_con_alcance_aproximado(self):
        veredicto = ReachabilityService.grc_dlts(cargar("dlts_termina.json"), cargar_palabras("palabras_termina.json"))
        self.assertEqual(veredicto.estado, HOLDS)
        self.assertEqual(veredicto.scope, "approximate")

    def test_lazo_es_contraejemplo_exacto(self):
        veredicto = ReachabilityService.grc_dlts(cargar("dlts_lazo.json"), cargar_palabras("palabras_lazo.json"))
        self.assertEqual(veredicto.estado, FAILS)
        self.assertEqual(veredicto.scope, "exact")
        self.assertEqual({t["state"] for t in veredicto.witnesses}, {"p", "q"})
        self.assertEqual(veredicto.witnesses[0]["word"], "(a)^ω")

    def test_sin_palabras_es_vacuo(self):
        veredicto = ReachabilityService.grc_dlts(cargar("dlts_termina.json"), ())
        self.assertEqual(veredicto.estado, HOLDS)
        self.assertEqual(veredicto.scope, "vacuous")

    def test_coincide_con_la_simulacion(self):
        rng = random.Random(22)
        for _ in range(20):
            d = dlts_chico(rng)
            palabras = [
                LassoWord(
                    tuple(rng.choice(d.labels) for _ in range(rng.randint(0, 2))),
                    tuple(rng.choice(d.labels) for _ in range(rng.randint(1, 2))),
                )
                for _ in range(3)
            ]
            veredicto = ReachabilityService.grc_dlts(d, palabras)
            malos = {(t["state"], t["word"]) for t in veredicto.witnesses}
            for s in d.states:
                for w in palabras:
                    termina = OracleService.dlts_run_oracle(d, s, w).terminates
                    self.assertEqual(termina, (s, str(w)) not in malos)


class AutomatasTests(SimpleTestCase):

    def test_inambiguo(self):
        veredicto = ReachabilityService.grc_ufa(cargar("nfa_inambiguo.json"))
        self.assertEqual(veredicto.estado, HOLDS)
        self.assertEqual(veredicto.witnesses, [])

    def test_ambiguo_con_testigo_verificable(self):
        nfa = cargar("nfa_ambiguo.json")
        veredicto = ReachabilityService.grc_ufa(nfa)
        self.assertEqual(veredicto.estado, FAILS)
        testigo = veredicto.witnesses[0]
        self.assertEqual(testigo["state"], "q0")
        self.assertEqual(testigo["word"], "ab")
        corridas = OracleService.nfa_runs(nfa, testigo["state"], testigo["letters"])
        self.assertEqual(len(corridas), 2)
        for corrida in testigo["runs"]:
            self.assertIn(corrida, corridas)
        self.assertNotEqual(*testigo["runs"])

    def test_coincide_con_el_conteo_de_corridas(self):
        rng = random.Random(23)
        for _ in range(20):
            nfa = nfa_chico(rng)
            maximo, _, _ = OracleService.nfa_max_runs_oracle(nfa)
            veredicto = ReachabilityService.grc_ufa(nfa)
            with self.subTest(nfa=nfa):
                self.assertEqual(veredicto.holds, maximo < 2)
                for testigo in veredicto.witnesses:
                    if len(testigo["letters"]) > LARGO_MAXIMO_ENUMERACION:
                        continue
                    corridas = OracleService.nfa_runs(nfa, testigo["state"], testigo["letters"])
                    self.assertGreaterEqual(len(corridas), 2)


class MdpTests(SimpleTestCase):

    def test_dos_elecciones_colapsa(self):
        veredicto = ReachabilityService.grc_mdp(cargar("mdp_dos_elecciones.json"))
        self.assertEqual(veredicto.estado, HOLDS)

    def test_trampa_falla_en_un_punto_fijo_exacto(self):
        veredicto = ReachabilityService.grc_mdp(cargar("mdp_trampa.json"))
        self.assertEqual(veredicto.estado, FAILS)
        self.assertEqual(veredicto.scope, "exact")
        fronteras = {t["state"]: t["frontier"] for t in veredicto.witnesses}
        self.assertEqual(fronteras["s"], [[0.5, 2.5], [1.0, 0.0]])
        self.assertEqual(fronteras["t"], [[0.0, 0.0]])

    def test_horizonte_corto_es_inconcluso(self):
        veredicto = ReachabilityService.grc_mdp(cargar("mdp_trampa.json"), horizon=1)
        self.assertEqual(veredicto.estado, INCONCLUSIVE)
        self.assertEqual(veredicto.scope, "approximate")
        self.assertFalse(veredicto.detalle["converged"])

    def test_objetivo_inmediato(self):
        mdp = Mdp(states=("s",), choices={"s": (Choice({TARGET: 1.0}, 2),)})
        veredicto = ReachabilityService.grc_mdp(mdp)
        self.assertEqual(veredicto.estado, HOLDS)
        self.assertEqual(veredicto.scope, "exact")
