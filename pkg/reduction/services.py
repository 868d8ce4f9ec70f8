import csv
import logging
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

from .correction import (
    ContractionReport,
    CurvePoint,
    NestedEstimate,
    compute_c,
    delta_curve,
    estimate_c_nested,
    uniform_grid,
)
from .exceptions import DomainError, ProblemValidationError
from .linalg import Tolerance
from .problems import ProblemFile
from .suite import SuiteConfig, SuiteReport, run_suite

logger = logging.getLogger(__name__)


class CorrectionService:
    def __init__(self, tol: Optional[Tolerance] = None):
        self.tol = tol or Tolerance.from_settings()

    def estimate_c(
        self,
        problem: ProblemFile,
        nested: bool = False,
        convergence_tol: float = 1e-6,
    ) -> Tuple[ContractionReport, Optional[NestedEstimate]]:
        """
        Computes c for a parsed problem, optionally with the nested Π_C sequence.

        Args:
            problem (ProblemFile): parsed problem file
            nested (bool): also run the nested-projector estimation
            convergence_tol (float): threshold on the last two nested estimates

        Returns:
            tuple: (ContractionReport, NestedEstimate or None)

        Raises:
            ProblemValidationError: the problem violates a POVM, projector or
                nesting invariant
        """
        povm = problem.to_povm(self.tol)
        pi = problem.to_projector()
        if pi.dim != povm.dim:
            raise ProblemValidationError(f"projector dimension {pi.dim} ≠ POVM dimension {povm.dim}")
        report = compute_c(povm, pi, self.tol)

        estimate = None
        if nested:
            dims = problem.nested_dims or [povm.dim]
            try:
                estimate = estimate_c_nested(povm, pi, dims, self.tol, convergence_tol)
            except DomainError as e:
                raise ProblemValidationError(f"nested_dims: {e}") from e
        return report, estimate

    @staticmethod
    def curve(c_values: Iterable[float], z_size: int, w_max: float, steps: int):
        return delta_curve(list(c_values), z_size, uniform_grid(w_max, steps))

    @staticmethod
    def write_curve_csv(rows: Iterable[CurvePoint], path: Union[str, Path]) -> None:
        """Write ``W,c,delta`` rows; values with 12 significant digits."""
        with open(path, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["W", "c", "delta"])
            for row in rows:
                writer.writerow([format(v, ".12g") for v in row])


class VerificationService:
    def run(self, config: SuiteConfig) -> SuiteReport:
        report = run_suite(config)
        logger.info("suite finished: %d trials, %d failures", report.total, report.failures)
        return report

    @staticmethod
    def write_report(report: SuiteReport, path: Union[str, Path]) -> None:
        Path(path).write_bytes(report.to_json())
