from django.core.management.base import BaseCommand
from pydantic import ValidationError

from reduction.correction import CorrectionQuery, delta

from ._options import usage_error


class Command(BaseCommand):
    help = "Evaluate the correction term Δ(W) for given c, W and |Z|."

    def add_arguments(self, parser):
        parser.add_argument("--c", type=float, required=True, help="contraction constant, in [0, 1]")
        parser.add_argument("--w", type=float, required=True, help="weight bound W, in [0, 1]")
        parser.add_argument("--zsize", type=int, required=True, help="key register size |Z| ≥ 1")

    def handle(self, *args, **options):
        try:
            query = CorrectionQuery(weight=options["w"], c=options["c"], z_size=options["zsize"])
        except ValidationError as e:
            raise usage_error(e)
        self.stdout.write(f"{delta(query):.12g}")
