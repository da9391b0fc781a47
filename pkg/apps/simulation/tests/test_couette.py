import math

import numpy as np
from django.test import SimpleTestCase
from scipy import integrate

from apps.common.exceptions import AliasRisk
from apps.ledger.coefficients import build_ledger
from apps.shears.catalog import ShearProfile, get_profile
from apps.simulation import couette
from apps.simulation.grid import FULL_LAPLACIAN, HYPOELLIPTIC, Grid, norm_sq
from apps.simulation.initial import InitialData, initial_state


class ClosedFormTests(SimpleTestCase):

    def setUp(self):
        self.init = InitialData(center=0.0, width=1.0)
        self.sp = couette.spectrum_from_initial(self.init, 1)
        self.full = couette.spectrum_from_initial(self.init, 1, FULL_LAPLACIAN)

    def test_damping_factor(self):
        sp = couette.CouetteSpectrum(
            k=1, eta=np.array([-1.0, 0.0, 1.0]), g0hat=np.ones(3, dtype=complex),
            model=FULL_LAPLACIAN, source=lambda x: np.ones_like(x, dtype=complex),
        )
        value = couette.exact_mode(sp, 0.1, 1.0)[1]
        self.assertAlmostEqual(value.real, math.exp(-0.1 * (1.0 + 1.0 / 3.0)), places=12)
        self.assertAlmostEqual(value.real, 0.87517, places=5)

    def test_identity_at_time_zero(self):
        np.testing.assert_array_equal(couette.exact_mode(self.sp, 0.3, 0.0), self.sp.g0hat)

    def test_inviscid_shift_preserves_modulus_and_norm(self):
        shifted = couette.exact_mode(self.sp, 0.0, 2.0)
        np.testing.assert_allclose(np.abs(shifted), np.abs(self.init.spectrum(self.sp.eta + 2.0)))
        l2_0 = couette.exact_norms(self.sp, 0.0, 0.0)[0]
        for t in (1.0, 10.0, 100.0):
            self.assertAlmostEqual(couette.exact_norms(self.sp, 0.0, t)[0] / l2_0, 1.0, places=12)

    def test_plancherel(self):
        l2 = couette.exact_norms(self.sp, 0.0, 0.0)[0]
        self.assertAlmostEqual(l2 ** 2 / math.sqrt(math.pi), 1.0, places=8)

    def test_energy_decay_bound(self):
        l2_0 = couette.exact_norms(self.full, 0.01, 0.0)[0]
        for t in (1.0, 3.0, 10.0):
            l2 = couette.exact_norms(self.full, 0.01, t)[0]
            self.assertLessEqual(l2, math.exp(-0.01 * t ** 3 / 12.0) * l2_0)

    def test_stable_mixing_bound(self):
        h1_0 = couette.exact_norms(self.sp, 0.0, 0.0)[2]
        for nu in (0.0, 1e-3, 1e-2):
            for t in np.linspace(0.0, 10.0, 41):
                hminus1 = couette.exact_norms(self.sp, nu, t)[1]
                scaled = hminus1 * math.sqrt(1.0 + t * t) * math.exp(nu * t ** 3 / 12.0)
                self.assertLessEqual(scaled, 2.0 * h1_0 * (1.0 + 1e-6))

    def test_inviscid_hminus1_against_quadrature(self):
        t = 3.0
        density = lambda eta: abs(self.init.spectrum(eta + t)) ** 2 / (1.0 + eta ** 2) / (2 * math.pi)
        expected, _ = integrate.quad(density, -t - 12.0, -t + 12.0, epsabs=1e-14, epsrel=1e-12, limit=200)
        self.assertAlmostEqual(couette.exact_norms(self.sp, 0.0, t)[1] ** 2 / expected, 1.0, places=8)

    def test_models_differ_by_exact_factor(self):
        nu, t = 0.02, 4.0
        ratio = couette.exact_norms(self.full, nu, t)[0] / couette.exact_norms(self.sp, nu, t)[0]
        self.assertAlmostEqual(ratio, math.exp(-nu * t), places=12)

    def test_exact_lemma_gap_is_positive(self):
        for t in (0.5, 5.0, 50.0):
            self.assertGreater(couette.exact_lemma_gap(self.sp, 0.0, t), 0.0)


class SynthesisTests(SimpleTestCase):

    def setUp(self):
        self.grid = Grid(12.0, 1025)
        self.init = InitialData(kind='hermite_bump', center=0.5, width=1.0, amplitude=1 - 0.5j)
        self.sp = couette.spectrum_from_initial(self.init, 1)

    def test_time_zero_matches_initial_data(self):
        state = couette.to_grid(self.sp, 0.0, self.grid)
        expected = self.init.evaluate(self.grid.y)
        self.assertLess(np.abs(state.g - expected).max(), 1e-10)

    def test_round_trip(self):
        original = initial_state(InitialData(width=0.8), self.grid, 2)
        back = couette.to_grid(couette.from_grid(original), 0.0, self.grid)
        self.assertLess(np.abs(back.g - original.g).max(), 1e-10)

    def test_synthesised_norm_matches_spectrum(self):
        state = couette.to_grid(self.sp, 4.0, self.grid, 0.01)
        l2 = couette.exact_norms(self.sp, 0.01, 4.0)[0]
        self.assertAlmostEqual(math.sqrt(norm_sq(state.g, self.grid.h)) / l2, 1.0, places=9)

    def test_alias_risk(self):
        with self.assertRaises(AliasRisk):
            couette.to_grid(self.sp, 5.0, Grid(12.0, 16))

    def test_oracle_records(self):
        led = build_ledger(1.0, 0.01, 1)
        rows = couette.oracle_records(self.sp, 0.01, [0.0, 1.0, 2.0], self.grid, get_profile('couette'), led)
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[0].balance_residuals, {})
        self.assertAlmostEqual(rows[2].weighted, math.sqrt(2.0) * rows[2].l2)
        self.assertEqual(self.sp.model, HYPOELLIPTIC)

    def test_oracle_weighted_norm_follows_the_weight(self):
        led = build_ledger(2.0, 0.01, 1)
        steep = ShearProfile(
            name='steep',
            u=lambda y: 2.0 * np.asarray(y, dtype=float),
            u1=lambda y: np.full_like(np.asarray(y, dtype=float), 2.0),
            u2=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
            u3=lambda y: np.zeros_like(np.asarray(y, dtype=float)),
        )
        rows = couette.oracle_records(self.sp, 0.01, [0.0, 1.5], self.grid, steep, led)
        for row in rows:
            self.assertAlmostEqual(row.weighted / row.l2, math.sqrt(5.0), places=12)
