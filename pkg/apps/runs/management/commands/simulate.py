from apps.runs.config_loader import load_config
from apps.runs.management.base import HypomixCommand
from apps.runs.services import run_service


class Command(HypomixCommand):
    help = 'Evolve one mode and record its functionals.'

    def add_arguments(self, parser):
        parser.add_argument('config', help='Run configuration file.')
        self.add_out_dir(parser)

    def run(self, **options):
        cfg = load_config(options['config'])
        outcome = run_service.simulate(cfg, self.run_dir(options, options['config']))
        self.emit(outcome.as_dict())
        return outcome.exit_status
