"""
Output files: time-series CSV, JSON reports and the run manifest.

Every file is written to a temporary sibling and moved into place, so a
reader never sees a partial file.
"""
import io
import json
import logging
import os
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder

from apps.common.exceptions import OutputError
from apps.simulation.functionals import RECORD_FIELDS, RESIDUAL_NAMES, FunctionalRecord

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


@contextmanager
def _atomic(path):
    path = Path(path)
    tmp = path.with_name(path.name + '.tmp')
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, 'w', encoding='utf-8', newline='\n') as handle:
            yield handle
        os.replace(tmp, path)
    except OSError as exc:
        logger.error(f'Failed to write {path}: {exc}', exc_info=True)
        raise OutputError(f'Cannot write {path}: {exc.strerror or exc}', path=str(path))


def timeseries_columns(records: Sequence[FunctionalRecord]) -> List[str]:
    residuals = records[0].balance_residuals if records else {}
    return list(RECORD_FIELDS) + [name for name in RESIDUAL_NAMES if name in residuals]


def write_timeseries(records: Sequence[FunctionalRecord], path) -> Path:
    """CSV with one row per record; floats keep 17 significant digits."""
    columns = timeseries_columns(records)
    times = [r.t for r in records]
    if any(b < a for a, b in zip(times, times[1:])):
        raise OutputError('Records must be time-ordered.', path=str(path))
    rows = np.array([r.row() for r in records], dtype=float).reshape(len(records), len(columns))
    buffer = io.StringIO()
    np.savetxt(buffer, rows, fmt=FLOAT_FORMAT, delimiter=',', header=','.join(columns), comments='')
    with _atomic(path) as handle:
        handle.write(buffer.getvalue())
    logger.info(f'Wrote {len(records)} records to {path}')
    return Path(path)


def read_timeseries(path) -> Dict[str, np.ndarray]:
    """Columns of a time-series CSV, keyed by header name."""
    with open(path, encoding='utf-8') as handle:
        columns = handle.readline().strip().split(',')
    data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    if data.size == 0:
        return {name: np.empty(0) for name in columns}
    return {name: data[:, i] for i, name in enumerate(columns)}


def dumps(payload: Any) -> str:
    return json.dumps(payload, cls=DjangoJSONEncoder, sort_keys=True, indent=2) + '\n'


def write_json(payload: Any, path) -> Path:
    with _atomic(path) as handle:
        handle.write(dumps(payload))
    return Path(path)


@dataclass
class RunManifest:
    command: str
    config: Dict[str, Any]
    tool_version: str
    started_at: str
    finished_at: Optional[str] = None
    ledger: Optional[Dict[str, Any]] = None
    hypothesis: Optional[Dict[str, Any]] = None
    outputs: List[str] = field(default_factory=list)
    exit_status: Optional[int] = None

    def as_dict(self):
        return asdict(self)


def write_manifest(manifest: RunManifest, path) -> Path:
    """Written once, by the coordinating process, after the run completed."""
    return write_json(manifest.as_dict(), path)
