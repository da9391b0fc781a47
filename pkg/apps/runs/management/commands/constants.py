from apps.runs.management.base import HypomixCommand
from apps.runs.services import run_service


class Command(HypomixCommand):
    help = 'Print the coefficient ledger for frakU (and optionally nu, k).'

    def add_arguments(self, parser):
        parser.add_argument('--frakU', dest='frakU', type=float, required=True)
        parser.add_argument('--nu', type=float, default=0.0)
        parser.add_argument('--k', type=int, default=1)

    def run(self, **options):
        self.emit(run_service.constants(options['frakU'], options['nu'], options['k']))
        return 0
