import math

import numpy as np
from django.test import SimpleTestCase

from apps.common.exceptions import ConfigurationError, InsufficientDecay
from apps.ledger.coefficients import build_ledger
from apps.shears.catalog import get_profile
from apps.simulation.couette import CouetteSpectrum, eta_grid, spectrum_from_initial
from apps.simulation.evolve import EvolveConfig
from apps.simulation.functionals import FunctionalRecord
from apps.simulation.grid import Grid
from apps.simulation.initial import InitialData

from apps.experiments.fitting import (
    EXPONENTIAL, POWER_LAW, RateFit, fit_decay_rate, fit_mixing_rate, fit_power_law, tau_closed_form,
)
from apps.experiments.trajectory import Trajectory, from_oracle, simulate


def synthetic(t, hminus1=None, weighted=None, nu=0.0):
    t = np.asarray(t, dtype=float)
    hminus1 = np.ones_like(t) if hminus1 is None else hminus1
    weighted = np.ones_like(t) if weighted is None else weighted
    records = [
        FunctionalRecord(
            t=float(ti), l2=1.0, weighted=float(w), hminus1=float(h), h1=1.0, j_l2=1.0,
            j_weighted=1.0, phi=1.0, jj=1.0, lyap=1.0, batchelor=float(h),
        )
        for ti, h, w in zip(t, hminus1, weighted)
    ]
    return Trajectory('synthetic', get_profile('couette'), build_ledger(1.0, nu, 1), 'hypoelliptic', records)


class MixingRateTests(SimpleTestCase):

    def test_couette_oracle_exponent(self):
        spectrum = spectrum_from_initial(InitialData(), 1)
        times = [0.0] + [float(t) for t in range(10, 101, 2)]
        traj = from_oracle(spectrum, 0.0, times, Grid(12.0, 1536), get_profile('couette'))
        fit = fit_mixing_rate(traj)
        self.assertEqual(fit.kind, POWER_LAW)
        self.assertFalse(fit.envelope)
        self.assertEqual(fit.n_points, 46)
        self.assertGreaterEqual(fit.exponent, -1.05)
        self.assertLessEqual(fit.exponent, -0.95)
        self.assertGreater(fit.r_squared, 0.99)

    def test_envelope_of_oscillating_series(self):
        t = np.linspace(0.0, 100.0, 10001)
        traj = synthetic(t, hminus1=(1.0 + 0.3 * np.sin(3.0 * t)) / np.sqrt(1.0 + t * t))
        fit = fit_mixing_rate(traj, (10.0, 100.0))
        self.assertTrue(fit.envelope)
        self.assertGreaterEqual(fit.n_points, 10)
        self.assertAlmostEqual(fit.exponent, -1.0, delta=0.01)
        self.assertEqual(fit.window, (10.0, 100.0))

    def test_insufficient_decay(self):
        with self.assertRaises(InsufficientDecay):
            fit_mixing_rate(synthetic(np.linspace(0.0, 100.0, 201)))

    def test_viscous_run_rejected(self):
        with self.assertRaises(ConfigurationError):
            fit_mixing_rate(synthetic(np.linspace(0.0, 100.0, 201), nu=1e-3))

    def test_window_must_start_late(self):
        with self.assertRaises(ConfigurationError):
            fit_mixing_rate(synthetic(np.linspace(0.0, 100.0, 201)), (5.0, 100.0))


class DecayRateTests(SimpleTestCase):

    def setUp(self):
        self.t = np.linspace(0.0, 10.0, 101)
        self.traj = synthetic(self.t, weighted=np.exp(-0.2 * self.t), nu=1e-3)

    def test_exponential_slope(self):
        fit = fit_decay_rate(self.traj)
        self.assertEqual(fit.kind, EXPONENTIAL)
        self.assertAlmostEqual(fit.exponent, -0.2, places=10)
        self.assertAlmostEqual(fit.r_squared, 1.0, places=12)
        self.assertEqual(fit.n_points, 101)
        self.assertEqual(fit.reference, -self.traj.ledger.decay_rate)

    def test_window(self):
        fit = fit_decay_rate(self.traj, (2.0, 4.0))
        self.assertEqual(fit.n_points, 21)

    def test_too_few_points(self):
        with self.assertRaises(ConfigurationError):
            fit_decay_rate(self.traj, (0.0, 0.5))

    def test_reversed_window(self):
        with self.assertRaises(ConfigurationError):
            fit_decay_rate(self.traj, (4.0, 2.0))


class HelperTests(SimpleTestCase):

    def test_power_law(self):
        nu = np.array([1e-3, 1e-4, 1e-5])
        fit = fit_power_law(nu, nu ** (-1.0 / 3.0))
        self.assertAlmostEqual(fit.exponent, -1.0 / 3.0, places=12)
        self.assertEqual(fit.n_points, 3)

    def test_power_law_rejects_infinite_values(self):
        with self.assertRaises(ConfigurationError):
            fit_power_law([1.0, 2.0], [1.0, math.inf])

    def test_unknown_kind(self):
        with self.assertRaises(ConfigurationError):
            RateFit(kind='linear', window=(0.0, 1.0), exponent=0.0, r_squared=1.0, n_points=10)

    def test_closed_form_time_scale(self):
        self.assertAlmostEqual(tau_closed_form(1e-3, 0.01), (12.0 * math.log(100.0) / 1e-3) ** (1.0 / 3.0))
        self.assertAlmostEqual(tau_closed_form(1e-3, 0.01, k=2), tau_closed_form(4e-3, 0.01))


class SolverMixingRateTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        grid = Grid(12.0, 2561)
        cfg = EvolveConfig(dt=0.05, T=100.0, sample_every=10)
        cls.runs = {
            name: simulate(get_profile(name), InitialData(), grid, 1, 0.0, 'hypoelliptic', cfg)
            for name in ('couette', 'sine_perturbed')
        }

    def test_inviscid_exponent(self):
        for name, traj in self.runs.items():
            with self.subTest(profile=name):
                fit = fit_mixing_rate(traj, (10.0, 100.0))
                self.assertGreaterEqual(fit.exponent, -1.1)
                self.assertLessEqual(fit.exponent, -0.9)
                self.assertGreater(fit.r_squared, 0.95)


class ModulatedMixingTests(SimpleTestCase):
    """
    Couette data made of wave packets at several frequencies ω: the Ḣ^{-1}
    norm peaks each time kt sweeps past one of them.
    """

    FREQUENCIES = tuple(14.0 + 8.0 * j for j in range(11))

    def spectrum(self):
        def g0hat(eta):
            eta = np.asarray(eta, dtype=float)
            return sum(math.sqrt(2.0 * math.pi) * np.exp(-0.5 * (eta - w) ** 2) for w in self.FREQUENCIES) + 0j

        eta = eta_grid(eta_max=128.0, n_points=2 ** 13)
        return CouetteSpectrum(k=1, eta=eta, g0hat=g0hat(eta), source=g0hat)

    def test_envelope_is_used(self):
        times = [0.0] + [10.0 + i for i in range(91)]
        traj = from_oracle(self.spectrum(), 0.0, times, Grid(12.0, 1025), get_profile('couette'))
        hminus1 = traj.series('hminus1')
        self.assertLess(hminus1[-1], 0.9 * hminus1[1])
        fit = fit_mixing_rate(traj, (10.0, 100.0))
        self.assertTrue(fit.envelope)
        self.assertGreaterEqual(fit.n_points, 10)
        self.assertLess(fit.n_points, 91)
