"""
Shared behaviour of the hypomix management commands.

Exit codes: 0 when every requested check passed, 1 when a monitor failed,
2 on configuration or runtime errors. Errors are printed to stderr as JSON.
"""
import logging
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand

from apps.common.exceptions import HypomixError

from ..writers import dumps

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2


class HypomixCommand(BaseCommand):
    requires_system_checks = []

    def add_out_dir(self, parser):
        parser.add_argument(
            '--out-dir',
            default=None,
            help='Output root (default: HYPOMIX_OUT).',
        )

    def run_dir(self, options, config_path) -> Path:
        root = options.get('out_dir') or settings.HYPOMIX['OUT']
        return Path(root) / Path(config_path).stem

    def emit(self, payload) -> None:
        self.stdout.write(dumps(payload), ending='')

    def fail(self, payload, status: int = EXIT_ERROR):
        self.stderr.write(dumps(payload), ending='')
        raise SystemExit(status)

    def run(self, **options) -> int:
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            status = self.run(**options)
        except HypomixError as exc:
            logger.error(f'{self.__module__.rsplit(".", 1)[-1]} failed: {exc.message}', exc_info=True)
            self.fail(exc.as_dict())
        except ValidationError as exc:
            self.fail({'error': 'validation_error', 'message': '; '.join(exc.messages)})
        except Exception as exc:
            logger.exception(f'{self.__module__.rsplit(".", 1)[-1]} crashed: {exc}')
            self.fail({'error': 'runtime_error', 'message': str(exc), 'type': type(exc).__name__})
        if status:
            raise SystemExit(status)
