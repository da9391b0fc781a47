"""
Run orchestration behind the management commands.
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from django.conf import settings
from django.utils import timezone

from apps.common.exceptions import ConfigurationError
from apps.experiments.fitting import fit_decay_rate, fit_mixing_rate
from apps.experiments.monitors import run_monitors
from apps.experiments.sweeps import sweep_enhanced_diffusion
from apps.experiments.trajectory import Trajectory, from_oracle, sample_times, simulate
from apps.ledger.coefficients import build_ledger, check_nu_restriction
from apps.shears.catalog import get_profile
from apps.shears.certificate import certify_hypothesis
from apps.simulation.couette import spectrum_from_initial
from apps.simulation.functionals import coercivity_suite

from .run_config import RunConfig
from .writers import RunManifest, write_json, write_manifest, write_timeseries

logger = logging.getLogger(__name__)

COERCIVITY_STATES = 1000


@dataclass
class RunOutcome:
    exit_status: int
    run_dir: Path
    outputs: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    def as_dict(self):
        return {
            'exit_status': self.exit_status,
            'run_dir': str(self.run_dir),
            'outputs': list(self.outputs),
            'summary': self.summary,
        }


class RunService:
    """Runs one command end to end and leaves its files and manifest in ``run_dir``."""

    def __init__(self):
        self.version = settings.HYPOMIX['VERSION']

    def _start(self, command: str, cfg: RunConfig) -> RunManifest:
        return RunManifest(
            command=command,
            config=cfg.as_dict(),
            tool_version=self.version,
            started_at=timezone.now().isoformat(),
        )

    def _finish(self, manifest: RunManifest, run_dir: Path, status: int, summary=None) -> RunOutcome:
        manifest.exit_status = status
        manifest.finished_at = timezone.now().isoformat()
        write_manifest(manifest, run_dir / 'manifest.json')
        logger.info(f'{manifest.command} finished with status {status}; outputs in {run_dir}')
        return RunOutcome(exit_status=status, run_dir=run_dir, outputs=list(manifest.outputs), summary=summary or {})

    def _write(self, manifest: RunManifest, run_dir: Path, name: str, payload) -> None:
        write_json(payload, run_dir / name)
        manifest.outputs.append(name)

    def _trajectory(self, cfg: RunConfig, manifest: RunManifest) -> Trajectory:
        profile = cfg.shear()
        certificate = certify_hypothesis(profile, cfg.grid.L)
        manifest.hypothesis = certificate.as_dict()
        traj = simulate(profile, cfg.init, cfg.grid, cfg.k, cfg.nu, cfg.model, cfg.time, frakU=certificate.frakU)
        manifest.ledger = traj.ledger.as_dict()
        return traj

    def simulate(self, cfg: RunConfig, run_dir: Path) -> RunOutcome:
        run_dir = Path(run_dir)
        manifest = self._start('simulate', cfg)
        traj = self._trajectory(cfg, manifest)
        write_timeseries(traj.records, run_dir / 'timeseries.csv')
        manifest.outputs.append('timeseries.csv')
        summary = {'trajectory_id': traj.trajectory_id, 'samples': len(traj.records), 'regime': traj.regime}
        return self._finish(manifest, run_dir, 0, summary)

    def oracle(self, cfg: RunConfig, run_dir: Path) -> RunOutcome:
        if cfg.profile != 'couette':
            raise ConfigurationError('The closed-form solution exists for couette only.', profile=cfg.profile)
        run_dir = Path(run_dir)
        manifest = self._start('oracle', cfg)
        profile = cfg.shear()
        manifest.hypothesis = certify_hypothesis(profile, cfg.grid.L).as_dict()
        spectrum = spectrum_from_initial(cfg.init, cfg.k, cfg.model)
        traj = from_oracle(spectrum, cfg.nu, sample_times(cfg.time), cfg.grid, profile)
        manifest.ledger = traj.ledger.as_dict()
        write_timeseries(traj.records, run_dir / 'oracle.csv')
        manifest.outputs.append('oracle.csv')
        return self._finish(manifest, run_dir, 0, {'trajectory_id': traj.trajectory_id, 'samples': len(traj.records)})

    def verify(self, cfg: RunConfig, run_dir: Path) -> RunOutcome:
        """Trajectory, every requested monitor, the coercivity suite and an optional rate fit."""
        run_dir = Path(run_dir)
        manifest = self._start('verify', cfg)
        traj = self._trajectory(cfg, manifest)
        write_timeseries(traj.records, run_dir / 'timeseries.csv')
        manifest.outputs.append('timeseries.csv')

        reports = run_monitors(traj, cfg.monitors or None)
        for report in reports:
            self._write(manifest, run_dir, f'monitor_{report.name}.json', report.as_dict())

        coercivity = coercivity_suite(cfg.grid, traj.profile, traj.ledger, COERCIVITY_STATES, seed=cfg.seed)
        self._write(manifest, run_dir, 'coercivity.json', {
            'trajectory_id': traj.trajectory_id,
            'seed': cfg.seed,
            'n_states': coercivity.n_states,
            'worst_lower': coercivity.worst_lower,
            'worst_upper': coercivity.worst_upper,
            'worst_lower_j': coercivity.worst_lower_j,
            'worst_upper_j': coercivity.worst_upper_j,
            'tol': coercivity.tol,
            'pass': coercivity.passed,
        })

        if cfg.fit_window is not None:
            fit = fit_mixing_rate(traj, cfg.fit_window) if cfg.nu == 0 else fit_decay_rate(traj, cfg.fit_window)
            self._write(manifest, run_dir, 'fit.json', fit.as_dict())

        failed = [r.name for r in reports if not r.passed]
        if not coercivity.passed:
            failed.append('coercivity')
        if failed:
            logger.warning(f'{traj.trajectory_id}: failed checks {", ".join(failed)}')
        summary = {
            'trajectory_id': traj.trajectory_id,
            'regime': traj.regime,
            'monitors': {r.name: r.passed for r in reports},
            'failed': failed,
        }
        return self._finish(manifest, run_dir, 1 if failed else 0, summary)

    def sweep(self, cfg: RunConfig, run_dir: Path) -> RunOutcome:
        if cfg.sweep is None:
            raise ConfigurationError('Config has no sweep.nu_list.')
        run_dir = Path(run_dir)
        manifest = self._start('sweep', cfg)
        certificate = certify_hypothesis(cfg.shear(), cfg.grid.L)
        manifest.hypothesis = certificate.as_dict()
        result = sweep_enhanced_diffusion(
            cfg.profile, cfg.k, cfg.sweep.nu_list, cfg.sweep.threshold,
            init=cfg.init, grid=cfg.grid, cfg=cfg.time, model=cfg.model, params=cfg.params,
            source=cfg.sweep.source, workers=cfg.sweep.workers, frakU=certificate.frakU,
        )
        self._write(manifest, run_dir, 'sweep.json', result.as_dict())
        summary = {'exponent': result.fit.exponent, 'expected': result.expected_exponent}
        return self._finish(manifest, run_dir, 0, summary)

    def certify(self, name: str, L: float, params: Optional[Dict[str, float]] = None, n_samples=None) -> dict:
        return certify_hypothesis(get_profile(name, **(params or {})), L, n_samples=n_samples).as_dict()

    def constants(self, frakU: float, nu: float = 0.0, k: int = 1) -> dict:
        ledger = build_ledger(frakU, nu, k)
        data = ledger.as_dict()
        data['regime'] = check_nu_restriction(ledger, nu, k)
        return data


run_service = RunService()
