from apps.common.exceptions import ConfigurationError
from apps.runs.management.base import HypomixCommand
from apps.runs.services import run_service


def _param(text):
    name, sep, value = text.partition('=')
    if not sep:
        raise ConfigurationError(f"Expected name=value, got '{text}'.", param=text)
    try:
        return name.strip(), float(value)
    except ValueError:
        raise ConfigurationError(f"Parameter '{name.strip()}' must be a number.", param=text)


class Command(HypomixCommand):
    help = 'Certify hypothesis (H) for a catalog shear on [-L, L].'

    def add_arguments(self, parser):
        parser.add_argument('profile')
        parser.add_argument('--L', dest='L', type=float, required=True)
        parser.add_argument('--param', action='append', default=[], help='Profile parameter as name=value.')
        parser.add_argument('--n-samples', dest='n_samples', type=int, default=None)

    def run(self, **options):
        params = dict(_param(text) for text in options['param'])
        self.emit(run_service.certify(options['profile'], options['L'], params, options['n_samples']))
        return 0
