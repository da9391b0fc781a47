import math

from django.test import SimpleTestCase

from apps.common.exceptions import ConfigurationError, RestrictionUnmet
from apps.ledger.coefficients import BOTH
from apps.shears.catalog import get_profile
from apps.simulation.evolve import EvolveConfig
from apps.simulation.grid import Grid
from apps.simulation.initial import InitialData

from apps.experiments import monitors
from apps.experiments.trajectory import decay_time, sample_times, simulate

GRID = Grid(12.0, 769)
INIT = InitialData(center=0.0, width=1.0)
CFG = EvolveConfig(dt=0.01, T=5.0, sample_every=10)


def couette_run(nu, k=1, model='hypoelliptic', cfg=CFG):
    return simulate(get_profile('couette'), INIT, GRID, k, nu, model, cfg)


class TrajectoryTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.traj = couette_run(1e-3)

    def test_samples_and_ledger(self):
        self.assertEqual(len(self.traj.records), 51)
        self.assertEqual(self.traj.trajectory_id, 'couette-k1-nu0.001-hypoelliptic')
        self.assertEqual(self.traj.ledger.frakU, 1.0)
        self.assertEqual(list(self.traj.times), sample_times(CFG))

    def test_lemma_gap_at_start(self):
        first = self.traj.initial
        self.assertAlmostEqual(self.traj.lemma_gaps()[0], 2.0 * (first.l2 + first.j_l2))

    def test_decay_time_not_reached(self):
        self.assertTrue(math.isinf(decay_time(self.traj, 0.01)))
        self.assertEqual(decay_time(self.traj, 1.0), 0.0)


class CouetteMonitorTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.runs = {nu: couette_run(nu) for nu in (0.0, 1e-3, 1e-2)}
        cls.runs['k2'] = couette_run(1e-3, k=2, cfg=EvolveConfig(dt=0.01, T=3.0, sample_every=10))

    def assertPasses(self, report):
        self.assertTrue(report.passed, msg=report.as_dict())
        self.assertGreaterEqual(report.worst_margin, -report.tol)

    def test_phi_ode(self):
        for traj in self.runs.values():
            with self.subTest(traj=traj.trajectory_id):
                report = monitors.monitor_phi_ode(traj)
                self.assertPasses(report)
                self.assertFalse(report.advisory)
                self.assertEqual(report.samples_checked, len(traj.records))

    def test_phi_ode_inviscid_margin_is_zero(self):
        report = monitors.monitor_phi_ode(self.runs[0.0])
        self.assertEqual(report.worst_margin, 0.0)

    def test_lyapunov(self):
        for traj in self.runs.values():
            with self.subTest(traj=traj.trajectory_id):
                report = monitors.monitor_lyapunov(traj)
                self.assertPasses(report)
                self.assertEqual(report.samples_checked, len(traj.records) - 1)

    def test_lyapunov_regime_is_advisory_above_nu0(self):
        report = monitors.monitor_lyapunov(self.runs[1e-3])
        self.assertTrue(report.advisory)
        self.assertEqual(monitors.monitor_lyapunov(self.runs[0.0]).regime, BOTH)

    def test_final_bound_has_large_slack(self):
        for traj in self.runs.values():
            with self.subTest(traj=traj.trajectory_id):
                report = monitors.monitor_final_bound(traj)
                self.assertPasses(report)
                self.assertEqual(set(report.details), {'energy', 'mixing', 'enhanced_diffusion'})
                self.assertGreater(report.worst_margin, 0.999)

    def test_j_ode(self):
        for traj in self.runs.values():
            with self.subTest(traj=traj.trajectory_id):
                self.assertPasses(monitors.monitor_j_ode(traj))

    def test_gronwall(self):
        for traj in self.runs.values():
            with self.subTest(traj=traj.trajectory_id):
                self.assertPasses(monitors.monitor_gronwall(traj))

    def test_lemma_skips_time_zero(self):
        report = monitors.monitor_lemma(self.runs[1e-3])
        self.assertPasses(report)
        self.assertEqual(report.samples_checked, 50)
        self.assertGreater(report.worst_t, 0.0)

    def test_inviscid_mixing(self):
        report = monitors.monitor_inviscid_mixing(self.runs[0.0])
        self.assertPasses(report)
        self.assertFalse(report.advisory)
        self.assertTrue(monitors.monitor_inviscid_mixing(self.runs[1e-3]).advisory)

    def test_couette_mixing(self):
        for traj in self.runs.values():
            with self.subTest(traj=traj.trajectory_id):
                self.assertPasses(monitors.monitor_couette_mixing(traj))

    def test_run_monitors_defaults(self):
        names = [r.name for r in monitors.run_monitors(self.runs[0.0])]
        self.assertIn('inviscid_mixing', names)
        self.assertIn('couette_mixing', names)
        names = [r.name for r in monitors.run_monitors(self.runs[1e-3])]
        self.assertNotIn('inviscid_mixing', names)

    def test_run_monitors_rejects_unknown(self):
        with self.assertRaises(ConfigurationError):
            monitors.run_monitors(self.runs[0.0], ['phi_ode', 'nope'])

    def test_report_payload(self):
        data = monitors.monitor_lemma(self.runs[0.0]).as_dict()
        self.assertIn('pass', data)
        self.assertNotIn('passed', data)
        self.assertEqual(data['name'], 'lemma')


class SineMonitorTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        profile = get_profile('sine_perturbed')
        cls.traj = simulate(profile, INIT, GRID, 1, 1e-3, 'hypoelliptic', CFG)

    def test_certified_constant(self):
        self.assertAlmostEqual(self.traj.ledger.frakU, 2.0, places=6)

    def test_final_bound_and_lemma(self):
        self.assertTrue(monitors.monitor_final_bound(self.traj).passed)
        self.assertTrue(monitors.monitor_lemma(self.traj).passed)

    def test_couette_mixing_is_rejected(self):
        with self.assertRaises(ConfigurationError):
            monitors.monitor_couette_mixing(self.traj)


class RestrictionTests(SimpleTestCase):

    def setUp(self):
        cfg = EvolveConfig(dt=0.01, T=0.1)
        self.traj = couette_run(2.0, cfg=cfg)

    def test_advisory_when_viscosity_is_large(self):
        report = monitors.monitor_phi_ode(self.traj)
        self.assertTrue(report.advisory)
        self.assertEqual(report.samples_checked, 11)

    def test_strict_mode_raises(self):
        with self.assertRaises(RestrictionUnmet):
            monitors.monitor_phi_ode(self.traj, strict=True)



class LongHorizonMonitorTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        grid = Grid(12.0, 2049)
        cfg = EvolveConfig(dt=0.01, T=20.0, sample_every=50)
        cls.runs = [
            simulate(get_profile('couette'), INIT, grid, k, nu, 'hypoelliptic', cfg)
            for nu in (1e-4, 1e-3, 1e-2)
            for k in (1, 2)
        ]

    def test_phi_ode_and_lyapunov(self):
        for traj in self.runs:
            with self.subTest(traj=traj.trajectory_id):
                self.assertAlmostEqual(traj.times[-1], 20.0)
                for report in (monitors.monitor_phi_ode(traj), monitors.monitor_lyapunov(traj)):
                    self.assertTrue(report.passed, msg=report.as_dict())

    def test_lemma(self):
        for traj in self.runs:
            with self.subTest(traj=traj.trajectory_id):
                self.assertTrue(monitors.monitor_lemma(traj).passed)


class CatalogFinalBoundTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        grid = Grid(2.0, 2049)
        init = InitialData(width=0.15)
        cfg = EvolveConfig(dt=0.01, T=20.0, sample_every=50)
        cls.runs = [
            simulate(get_profile(name), init, grid, 1, nu, 'hypoelliptic', cfg)
            for name in ('exponential', 'polynomial')
            for nu in (0.0, 1e-3)
        ]

    def test_certified_constants(self):
        frakU = {traj.profile.name: traj.ledger.frakU for traj in self.runs}
        self.assertEqual(frakU['exponential'], 1.0)
        self.assertAlmostEqual(frakU['polynomial'], 6.0, places=6)

    def test_final_bound(self):
        for traj in self.runs:
            with self.subTest(traj=traj.trajectory_id):
                report = monitors.monitor_final_bound(traj)
                self.assertTrue(report.passed, msg=report.as_dict())
                self.assertEqual(report.samples_checked, 41)

    def test_lemma(self):
        for traj in self.runs:
            with self.subTest(traj=traj.trajectory_id):
                self.assertTrue(monitors.monitor_lemma(traj).passed)
