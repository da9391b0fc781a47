"""Root-sum-square aggregation of per-mode records into x-dependent totals."""
import math
from typing import List, Sequence

import numpy as np

from apps.common.exceptions import MismatchedGrids
from apps.simulation.functionals import FunctionalRecord

NORMS = ('l2', 'weighted', 'hminus1', 'h1', 'j_l2', 'j_weighted')
QUADRATIC = ('phi', 'jj', 'lyap')


def _combine(rows: Sequence[FunctionalRecord]) -> FunctionalRecord:
    norms = {name: math.sqrt(sum(getattr(r, name) ** 2 for r in rows)) for name in NORMS}
    sums = {name: sum(getattr(r, name) for r in rows) for name in QUADRATIC}
    residuals = {}
    for r in rows:
        for name, value in r.balance_residuals.items():
            residuals[name] = residuals.get(name, 0.0) + value
    return FunctionalRecord(
        t=rows[0].t,
        batchelor=norms['hminus1'] / norms['l2'] if norms['l2'] > 0 else 0.0,
        balance_residuals=residuals if all(r.balance_residuals for r in rows) else {},
        **norms,
        **sums,
    )


def aggregate_modes(per_mode_records: Sequence[Sequence[FunctionalRecord]]) -> List[FunctionalRecord]:
    """
    Norms add in quadrature across modes; functionals and residuals, being
    quadratic, add directly. All modes must share one time grid.
    """
    if not per_mode_records:
        return []
    times = [np.array([r.t for r in rows]) for rows in per_mode_records]
    reference = times[0]
    for i, t in enumerate(times[1:], start=1):
        if t.shape != reference.shape or not np.allclose(t, reference, rtol=1e-12, atol=0.0):
            raise MismatchedGrids(mode_index=i, samples=int(t.size), expected=int(reference.size))
    return [_combine(rows) for rows in zip(*per_mode_records)]
