import logging

from django.apps import AppConfig
from django.core.exceptions import ImproperlyConfigured

logger = logging.getLogger(__name__)


class SimulationConfig(AppConfig):
    name = 'apps.simulation'
    verbose_name = 'Mode simulation'

    def ready(self):
        from .functionals import cross_term_sign_check

        ratio = cross_term_sign_check()
        if not 0.99 < ratio < 1.01:
            raise ImproperlyConfigured(
                f'Cross-term sign check failed (ratio {ratio:.6g}); Φ would not be a Lyapunov functional.'
            )
        logger.debug(f'Cross-term sign check passed (ratio {ratio:.12g})')
