from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from reduction.exceptions import DomainError
from reduction.services import CorrectionService

from ._options import EXIT_IO, EXIT_USAGE, float_list, usage_error


class Command(BaseCommand):
    help = "Write Δ(W) curves for several values of c to a CSV file (columns W,c,delta)."

    def add_arguments(self, parser):
        parser.add_argument("--c-list", default="0,0.25,0.5,0.75,1",
                            help="comma-separated values of c")
        parser.add_argument("--zsize", type=int, default=4)
        parser.add_argument("--w-max", type=float, default=0.2)
        parser.add_argument("--steps", type=int, default=200, help="number of W intervals")
        parser.add_argument("--out", required=True, help="output CSV path")

    def handle(self, *args, **options):
        c_values = float_list(options["c_list"], "--c-list")
        if not c_values:
            raise CommandError("--c-list is empty", returncode=EXIT_USAGE)
        try:
            rows = CorrectionService.curve(c_values, options["zsize"], options["w_max"], options["steps"])
        except DomainError as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)
        except ValidationError as e:
            raise usage_error(e)

        try:
            CorrectionService.write_curve_csv(rows, options["out"])
        except OSError as e:
            raise CommandError(f"cannot write {options['out']}: {e}", returncode=EXIT_IO)
        self.stdout.write(self.style.SUCCESS(f"✅ wrote {len(rows)} rows to {options['out']}"))
