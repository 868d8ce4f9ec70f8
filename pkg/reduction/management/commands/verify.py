from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from reduction.services import VerificationService
from reduction.suite import CHECKS, SuiteConfig

from ._options import EXIT_FAILURES, EXIT_IO, int_list, name_list, usage_error


class Command(BaseCommand):
    help = "Run the brute-force verification suites and optionally persist the report."

    def add_arguments(self, parser):
        parser.add_argument("--suite", default="all",
                            help=f"'all' or comma-separated names from: {', '.join(CHECKS)}")
        parser.add_argument("--dims", default=None, help="comma-separated dimensions (default from settings)")
        parser.add_argument("--trials", type=int, default=None, help="trials per check and dimension")
        parser.add_argument("--seed", type=int, default=None, help="base seed")
        parser.add_argument("--slack", type=float, default=None, help="absolute numerical slack")
        parser.add_argument("--workers", type=int, default=None, help="worker processes")
        parser.add_argument("--report", default=None, help="path of the JSON report")

    def handle(self, *args, **options):
        suites = None if options["suite"] == "all" else name_list(options["suite"])
        dims = int_list(options["dims"], "--dims") if options["dims"] else None
        try:
            config = SuiteConfig.from_settings(
                suites=suites,
                dims=dims,
                trials=options["trials"],
                base_seed=options["seed"],
                numerical_slack=options["slack"],
                workers=options["workers"],
            )
        except ValidationError as e:
            raise usage_error(e)

        self.stdout.write(
            f"suites: {', '.join(config.suites)} | dims: {config.dims} | trials: {config.trials} | "
            f"seed: {config.base_seed} | slack: {config.numerical_slack:g} | "
            f"rank_cutoff: {config.tolerance.rank_cutoff:g} | psd_clip: {config.tolerance.psd_clip:g}"
        )
        service = VerificationService()
        report = service.run(config)

        if options["report"]:
            try:
                service.write_report(report, options["report"])
            except OSError as e:
                raise CommandError(f"cannot write {options['report']}: {e}", returncode=EXIT_IO)

        for stats in report.stats:
            margin = "n/a" if stats.min_margin is None else f"{stats.min_margin:.3e}"
            line = f"{stats.name:<15} {stats.passed}/{stats.trials} passed, min margin {margin}"
            self.stdout.write(self.style.SUCCESS(line) if stats.failed == 0 else self.style.ERROR(line))

        if not report.all_passed:
            raise CommandError(f"{report.failures} of {report.total} checks failed", returncode=EXIT_FAILURES)
        self.stdout.write(self.style.SUCCESS(f"✅ all {report.total} checks passed"))
