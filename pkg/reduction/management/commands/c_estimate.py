from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from reduction.exceptions import ProblemFileError, ProblemValidationError
from reduction.linalg import Tolerance
from reduction.problems import ProblemFile
from reduction.services import CorrectionService

from ._options import EXIT_INVALID, EXIT_USAGE, usage_error


class Command(BaseCommand):
    help = "Compute the contraction constant c (and optionally its nested estimates) for a problem file."

    def add_arguments(self, parser):
        parser.add_argument("input", help="problem file (JSON)")
        parser.add_argument("--tol", type=float, default=None,
                            help="rank cutoff and PSD clip (default from settings)")
        parser.add_argument("--nested", action="store_true",
                            help="also estimate c on the nested subspaces listed in nested_dims")
        parser.add_argument("--convergence-tol", type=float, default=settings.CONVERGENCE_TOL)

    def handle(self, *args, **options):
        try:
            tol = (Tolerance(rank_cutoff=options["tol"], psd_clip=options["tol"])
                   if options["tol"] is not None else Tolerance.from_settings())
        except ValidationError as e:
            raise usage_error(e)
        if options["convergence_tol"] <= 0:
            raise CommandError("--convergence-tol must be positive", returncode=EXIT_USAGE)

        service = CorrectionService(tol)
        try:
            problem = ProblemFile.load(options["input"])
            report, estimate = service.estimate_c(problem, options["nested"], options["convergence_tol"])
        except ProblemFileError as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)
        except ProblemValidationError as e:
            raise CommandError(str(e), returncode=EXIT_INVALID)

        self.stdout.write(f"tolerance: rank_cutoff={tol.rank_cutoff:g} psd_clip={tol.psd_clip:g}")
        for element in report.per_element:
            self.stdout.write(f"element (z={element.z}, c={element.c}): ||K|| = {element.k_norm:.12g}")
        self.stdout.write(self.style.SUCCESS(f"c = {report.c:.12g}"))

        if estimate is not None:
            self.stdout.write("nested estimates:")
            for n, value in zip(estimate.nested_dims, estimate.estimates):
                self.stdout.write(f"  dim {n}: {value:.12g}")
            status = "yes" if estimate.converged else "no"
            self.stdout.write(f"converged: {status} (tol {estimate.convergence_tol:g})")
