import random

from django.test import SimpleTestCase, override_settings

from semantica.exceptions import ErrorPrecondicion, PresupuestoAgotado
from semantica.lattices import (
    BOTTOM, FRONTERA, I_INF, NAT, PAR_MC, ExtNat, ExtReal, ParetoFrontier, Product,
)
from semantica.services.operators import build_operator
from semantica.services.oracle import DltsRun, OracleService, SchedulerPrefix
from semantica.services.solver import SolverService
from semantica.sistemas import TARGET, Dlts, LassoWord, words_up_to
from semantica.tests.fabricas import cargar, mc_casi_segura, mdp_chico, nfa_chico


def iterar(op, pasos):
    k = op.bottom()
    for _ in range(pasos):
        k = op(k)
    return k


class CadenasDeMarkovTests(SimpleTestCase):

    def setUp(self):
        self.geom = cargar("geom.json")

    def test_parcial_geometrica(self):
        self.assertEqual(OracleService.mc_partial_oracle(self.geom, 1)["s"], (0.5, ExtReal(0.5)))
        self.assertEqual(OracleService.mc_partial_oracle(self.geom, 2)["s"], (0.75, ExtReal(1.0)))
        self.assertEqual(OracleService.mc_partial_oracle(self.geom, 0)["s"], (0.0, ExtReal(0)))

    def test_total_geometrica(self):
        self.assertEqual(OracleService.mc_total_oracle(self.geom, 1)["s"], ExtReal(1))
        self.assertEqual(OracleService.mc_total_oracle(self.geom, 2)["s"], ExtReal(1.5))

    def test_coincide_con_la_cadena_de_kleene(self):
        rng = random.Random(40)
        for _ in range(10):
            mc = mc_casi_segura(rng, max_estados=4)
            parcial = build_operator(mc, "mc_partial")
            total = build_operator(mc, "mc_total")
            for n in range(5):
                with self.subTest(mc=mc, n=n):
                    oraculo = OracleService.mc_partial_oracle(mc, n)
                    cadena = iterar(parcial, n)
                    for s in mc.states:
                        self.assertTrue(PAR_MC.equal(oraculo[s], cadena[s], 1e-9))
                    oraculo = OracleService.mc_total_oracle(mc, n)
                    cadena = iterar(total, n)
                    for s in mc.states:
                        self.assertTrue(I_INF.equal(oraculo[s], cadena[s], 1e-9))

    def test_presupuesto(self):
        with self.assertRaises(PresupuestoAgotado) as ctx:
            OracleService.mc_partial_oracle(self.geom, 10, presupuesto=5)
        self.assertEqual(ctx.exception.oraculo, "mc_partial")

    @override_settings(SEMANTICA={"PRESUPUESTO_ORACULO": 5})
    def test_presupuesto_desde_settings(self):
        with self.assertRaises(PresupuestoAgotado):
            OracleService.mc_total_oracle(self.geom, 10)


class MdpTests(SimpleTestCase):

    def test_frontera_de_dos_elecciones(self):
        mdp = cargar("mdp_dos_elecciones.json")
        self.assertEqual(OracleService.mdp_pareto_oracle(mdp, 1)["s"], ParetoFrontier([(1, 0), (0.5, 2.5)]))
        self.assertEqual(OracleService.mdp_pareto_oracle(mdp, 0)["s"], ParetoFrontier([(0, 0)]))

    def test_schedulers_testigo(self):
        mdp = cargar("mdp_dos_elecciones.json")
        _, schedulers = OracleService.mdp_pareto_oracle(mdp, 1, testigos=True)
        por_punto = dict(schedulers["s"])
        self.assertEqual(por_punto[(1.0, ExtReal(0))], SchedulerPrefix({("s",): 0}))
        self.assertEqual(
            por_punto[(0.5, ExtReal(2.5))].a_json(),
            [{"history": ["s"], "choice": 1}],
        )

    def test_coincide_con_la_cadena_de_fronteras(self):
        rng = random.Random(41)
        for _ in range(25):
            mdp = mdp_chico(rng, max_estados=3, max_elecciones=2)
            for n in range(5):
                oraculo, schedulers = OracleService.mdp_pareto_oracle(mdp, n, testigos=True)
                cadena = iterar(build_operator(mdp, "mdp_partial_frontier"), n)
                for s in mdp.states:
                    with self.subTest(mdp=mdp, n=n, estado=s):
                        self.assertTrue(FRONTERA.equal(oraculo[s], cadena[s], 1e-9))
                        for (p, r), sigma in schedulers[s]:
                            q, t = OracleService.scheduler_value(mdp, s, sigma, n)
                            self.assertAlmostEqual(p, q, places=9)
                            self.assertTrue(I_INF.equal(r, t, 1e-9))

    def test_enumeracion_exhaustiva_coincide_con_la_podada(self):
        rng = random.Random(43)
        for _ in range(20):
            mdp = mdp_chico(rng, max_estados=2, max_elecciones=2)
            for n in range(4):
                completa, schedulers = OracleService.mdp_pareto_oracle(mdp, n, testigos=True, exhaustivo=True)
                podada = OracleService.mdp_pareto_oracle(mdp, n)
                for s in mdp.states:
                    with self.subTest(mdp=mdp, n=n, estado=s):
                        self.assertTrue(FRONTERA.equal(completa[s], podada[s], 1e-9))
                        for (p, r), sigma in schedulers[s]:
                            q, t = OracleService.scheduler_value(mdp, s, sigma, n)
                            self.assertAlmostEqual(p, q, places=9)
                            self.assertTrue(I_INF.equal(r, t, 1e-9))

    def test_exhaustivo_respeta_el_presupuesto(self):
        mdp = cargar("mdp_dos_elecciones.json")
        with self.assertRaises(PresupuestoAgotado) as ctx:
            OracleService.mdp_pareto_oracle(mdp, 3, presupuesto=2, exhaustivo=True)
        self.assertEqual(ctx.exception.oraculo, "mdp_pareto")

    def test_scheduler_incompleto(self):
        with self.assertRaises(ErrorPrecondicion):
            OracleService.scheduler_value(cargar("mdp_dos_elecciones.json"), "s", SchedulerPrefix(), 1)


class AutomatasTests(SimpleTestCase):

    def test_conteo_y_corridas(self):
        nfa = cargar("nfa_ambiguo.json")
        self.assertEqual(OracleService.nfa_count_oracle(nfa, "ab")["q0"], ExtNat(2))
        corridas = OracleService.nfa_runs(nfa, "q0", "ab")
        self.assertEqual(sorted(corridas), [["q0", "q1", "q3"], ["q0", "q2", "q3"]])
        self.assertEqual(OracleService.nfa_runs(nfa, "q0", "ba"), [])

    def test_palabras_largas_no_se_enumeran(self):
        with self.assertRaises(ErrorPrecondicion):
            OracleService.nfa_runs(cargar("nfa_ambiguo.json"), "q0", "ab" * 5)

    def test_conteo_coincide_con_el_punto_fijo(self):
        rng = random.Random(42)
        for _ in range(10):
            nfa = nfa_chico(rng, max_estados=4)
            mu = SolverService.kleene_lfp(build_operator(nfa, "ufa_count", maxlen=3)).ultimo
            for w in words_up_to(nfa.alphabet, 3):
                cuentas = OracleService.nfa_count_oracle(nfa, w)
                for s in nfa.states:
                    with self.subTest(nfa=nfa, estado=s, palabra=w):
                        self.assertEqual(cuentas[s], mu[(s, w)])
                        self.assertEqual(cuentas[s], ExtNat(len(OracleService.nfa_runs(nfa, s, w))))

    def test_maximo_de_corridas(self):
        self.assertEqual(OracleService.nfa_max_runs_oracle(cargar("nfa_ambiguo.json")), (2, "q0", ("a", "b")))
        self.assertEqual(OracleService.nfa_max_runs_oracle(cargar("nfa_inambiguo.json"))[0], 1)

    def test_probabilidad_coincide_con_psi(self):
        letras = cargar("mc_letras.json")
        par = Product(NAT, I_INF)
        for nombre in ("nfa_inambiguo.json", "nfa_ambiguo.json"):
            nfa = cargar(nombre)
            mu = SolverService.kleene_lfp(build_operator(nfa, "ufa_prob_count", maxlen=3, mc_labels=letras)).ultimo
            for w in words_up_to(nfa.alphabet, 3):
                oraculo = OracleService.nfa_prob_oracle(nfa, letras, w)
                for s in nfa.states:
                    with self.subTest(nfa=nombre, estado=s, palabra=w):
                        self.assertTrue(par.equal(oraculo[s], mu[(s, w)], 1e-12))

    def test_probabilidad_de_una_palabra(self):
        oraculo = OracleService.nfa_prob_oracle(cargar("nfa_inambiguo.json"), cargar("mc_letras.json"), "ab")
        self.assertEqual(oraculo["q0"], (ExtNat(1), ExtReal(0.125)))
        self.assertEqual(oraculo["q1"], (ExtNat(0), ExtReal(0)))


class DltsTests(SimpleTestCase):

    def setUp(self):
        self.dlts = Dlts(
            states=("s0", "s1"),
            labels=("a", "b"),
            step={"s0": {"a": "s1", "b": "s0"}, "s1": {"a": "s1", "b": TARGET}},
            safe=frozenset({"s1"}),
        )

    def test_termina_en_estado_seguro(self):
        corrida = OracleService.dlts_run_oracle(self.dlts, "s0", LassoWord((), ("a", "b")))
        self.assertEqual(corrida, DltsRun(True, 2, "s1", True))
        self.assertEqual(corrida.a_json(), {"terminates": True, "steps": 2, "final_state": "s1", "safe": True})

    def test_no_termina(self):
        corrida = OracleService.dlts_run_oracle(self.dlts, "s0", LassoWord((), ("a",)))
        self.assertFalse(corrida.terminates)
        self.assertEqual(corrida.a_json(), {"terminates": False})

    def test_prefijo(self):
        corrida = OracleService.dlts_run_oracle(self.dlts, "s0", LassoWord(("b", "b"), ("a", "b")))
        self.assertEqual(corrida.steps, 4)


class RecursosTests(SimpleTestCase):

    def test_cadena(self):
        g = cargar("recursos_cadena.json")
        self.assertEqual(dict(OracleService.resource_oracle(g).items()), {"s0": 3, "s1": 2, "s2": 0})

    def test_sin_objetivo(self):
        g = cargar("recursos_sin_objetivo.json")
        self.assertIs(OracleService.resource_path_oracle(g, "a"), BOTTOM)
