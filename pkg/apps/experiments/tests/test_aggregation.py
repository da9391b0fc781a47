import math
from dataclasses import replace

import numpy as np
from scipy import integrate
from django.test import SimpleTestCase

from apps.common.exceptions import MismatchedGrids
from apps.shears.catalog import get_profile
from apps.simulation.couette import spectrum_from_initial, to_grid
from apps.simulation.grid import Grid
from apps.simulation.initial import InitialData

from apps.experiments.aggregation import NORMS, aggregate_modes
from apps.experiments.trajectory import from_oracle

GRID = Grid(12.0, 1025)
TIMES = [0.0, 1.0, 2.0]
NU = 0.01


def oracle_rows(k):
    spectrum = spectrum_from_initial(InitialData(), k)
    return from_oracle(spectrum, NU, TIMES, GRID, get_profile('couette')).records


class AggregateModesTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.modes = {k: oracle_rows(k) for k in (1, 2, 3)}

    def test_single_mode_is_identity(self):
        rows = self.modes[1]
        for a, b in zip(aggregate_modes([rows]), rows):
            for name in NORMS + ('t', 'phi', 'jj', 'lyap', 'batchelor'):
                self.assertAlmostEqual(getattr(a, name), getattr(b, name), places=14)

    def test_equal_modes_add_in_quadrature(self):
        rows = self.modes[2]
        for a, b in zip(aggregate_modes([rows, rows]), rows):
            self.assertAlmostEqual(a.l2, math.sqrt(2.0) * b.l2, places=14)
            self.assertAlmostEqual(a.phi, 2.0 * b.phi, places=14)

    def test_matches_two_dimensional_plancherel(self):
        aggregated = aggregate_modes([self.modes[k] for k in (1, 2, 3)])
        x = 2.0 * math.pi * np.arange(16) / 16
        for i, t in enumerate(TIMES):
            field = sum(
                np.outer(to_grid(spectrum_from_initial(InitialData(), k), t, GRID, NU).g, np.exp(1j * k * x))
                for k in (1, 2, 3)
            )
            density = np.mean(np.abs(field) ** 2, axis=1)
            direct = integrate.trapezoid(density, dx=GRID.h)
            self.assertAlmostEqual(aggregated[i].l2 ** 2 / direct, 1.0, places=8)

    def test_empty(self):
        self.assertEqual(aggregate_modes([]), [])

    def test_mismatched_times(self):
        shifted = [replace(r, t=r.t + 0.5) for r in self.modes[2]]
        with self.assertRaises(MismatchedGrids):
            aggregate_modes([self.modes[1], shifted])
        with self.assertRaises(MismatchedGrids):
            aggregate_modes([self.modes[1], self.modes[2][:2]])
