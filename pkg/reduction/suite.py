"""
Verification suite: seeded random instances for every check in
`reduction.oracle`, aggregated into a serializable report.

Trial ``i`` of check ``name`` at dimension ``d`` is seeded with
``base_seed XOR xxh64("name:d:i")``, so a report does not depend on the
order (or the process) in which trials run.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import orjson
import xxhash
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .exceptions import DimensionReductionError
from .linalg import Tolerance
from .oracle import (
    CheckResult,
    InstanceSummary,
    check_continuity,
    check_contraction,
    check_dephasing_lemma,
    check_lemma3,
    check_purification_identity,
    check_trace_distance_bound,
    check_ucdup,
)
from .sampling import (
    random_cq_pair,
    random_density,
    random_povm,
    random_povm_element,
    random_projector,
    random_psd,
)
from .states import Povm, Projector

logger = logging.getLogger(__name__)

Z_SIZES = (2, 4)


# ─────────────────────────────────────────────────────────────────────────────
#  Instance builders, one per check
# ─────────────────────────────────────────────────────────────────────────────
def _projector(rng: np.random.Generator, dim: int) -> Projector:
    return random_projector(dim, int(rng.integers(1, dim)), rng)


def _protocol(rng: np.random.Generator, dim: int, trial: int):
    z_size = Z_SIZES[trial % len(Z_SIZES)]
    c_size = int(rng.integers(1, 3))
    state_rank = int(rng.integers(1, dim + 1))
    rho = random_density(dim, state_rank, rng)
    povm = random_povm(dim, z_size * c_size, z_size, c_size, rng)
    pi = _projector(rng, dim)
    summary = InstanceSummary(
        dim=dim, state_rank=state_rank, projector_rank=pi.rank, z_size=z_size, c_size=c_size
    )
    return rho, povm, pi, summary


def _trial_lemma3(rng, dim, trial, config):
    state_rank = int(rng.integers(1, dim + 1))
    rho = random_density(dim, state_rank, rng)
    p = random_povm_element(dim, rng)
    pi = _projector(rng, dim)
    result = check_lemma3(rho, p, pi, config.tolerance, config.numerical_slack)
    return result, InstanceSummary(dim=dim, state_rank=state_rank, projector_rank=pi.rank)


def _trial_continuity(rng, dim, trial, config):
    z_size = Z_SIZES[trial % len(Z_SIZES)]
    rho, sigma = random_cq_pair(z_size, dim, rng)
    result = check_continuity(rho, sigma, z_size, config.tolerance, config.numerical_slack)
    c_size = 1 + max(label.c for label in rho.labels)
    return result, InstanceSummary(dim=dim, z_size=z_size, c_size=c_size)


def _trial_dephasing(rng, dim, trial, config):
    rho, povm, pi, summary = _protocol(rng, dim, trial)
    return check_dephasing_lemma(rho, povm, pi, config.tolerance, config.numerical_slack), summary


def _trial_trace_distance(rng, dim, trial, config):
    rho, povm, pi, summary = _protocol(rng, dim, trial)
    return check_trace_distance_bound(rho, povm, pi, config.tolerance, config.numerical_slack), summary


def _trial_ucdup(rng, dim, trial, config):
    rho, povm, pi, summary = _protocol(rng, dim, trial)
    weight = float(np.real(np.trace(rho.matrix @ pi.complement().matrix)))
    return check_ucdup(rho, povm, pi, weight, config.tolerance, config.numerical_slack), summary


def _trial_purification(rng, dim, trial, config):
    state_rank = int(rng.integers(1, dim + 1))
    rho = random_density(dim, state_rank, rng)
    p = random_povm_element(dim, rng)
    result = check_purification_identity(rho, p, config.tolerance, config.numerical_slack)
    return result, InstanceSummary(dim=dim, state_rank=state_rank)


def _trial_contraction(rng, dim, trial, config):
    p = random_psd(dim, int(rng.integers(1, dim + 1)), rng)
    pi = _projector(rng, dim)
    return check_contraction(p, pi, config.tolerance, config.numerical_slack), InstanceSummary(
        dim=dim, projector_rank=pi.rank
    )


CHECKS: Dict[str, Callable] = {
    "lemma3": _trial_lemma3,
    "continuity": _trial_continuity,
    "dephasing": _trial_dephasing,
    "trace_distance": _trial_trace_distance,
    "ucdup": _trial_ucdup,
    "purification": _trial_purification,
    "contraction": _trial_contraction,
}


# ─────────────────────────────────────────────────────────────────────────────
#  Configuration
# ─────────────────────────────────────────────────────────────────────────────
class SuiteConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    suites: List[str] = Field(default_factory=lambda: list(CHECKS))
    dims: List[int] = Field(default_factory=lambda: [2, 3, 4, 5, 6, 7, 8], min_length=1)
    trials: int = Field(default=1000, ge=1)
    base_seed: int = Field(default=42, ge=0)
    numerical_slack: float = Field(default=1e-9, gt=0.0)
    tolerance: Tolerance = Field(default_factory=Tolerance)
    workers: int = Field(default=1, ge=1, exclude=True)

    @field_validator("suites")
    @classmethod
    def _known_suites(cls, value: List[str]) -> List[str]:
        unknown = [name for name in value if name not in CHECKS]
        if unknown:
            raise ValueError(f"unknown suite(s) {unknown}; choose from {sorted(CHECKS)} or 'all'")
        if not value:
            raise ValueError("at least one suite is required")
        return [name for name in CHECKS if name in value]

    @field_validator("dims")
    @classmethod
    def _dims_at_least_two(cls, value: List[int]) -> List[int]:
        if any(d < 2 for d in value):
            raise ValueError(f"every dimension must be at least 2, got {value}")
        return value

    @classmethod
    def from_settings(cls, **overrides) -> "SuiteConfig":
        from django.conf import settings

        values = {
            "dims": settings.DEFAULT_DIMS,
            "trials": settings.DEFAULT_TRIALS,
            "base_seed": settings.DEFAULT_SEED,
            "numerical_slack": settings.NUMERICAL_SLACK,
            "tolerance": Tolerance.from_settings(),
            "workers": settings.WORKERS,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def derive_seed(base_seed: int, name: str, dim: int, trial: int) -> int:
    return base_seed ^ xxhash.xxh64_intdigest(f"{name}:{dim}:{trial}")


# ─────────────────────────────────────────────────────────────────────────────
#  Report
# ─────────────────────────────────────────────────────────────────────────────
class CheckStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    trials: int
    passed: int
    failed: int
    min_margin: Optional[float]
    max_tightness: Optional[float]


class SuiteReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: SuiteConfig
    results: List[CheckResult]
    stats: List[CheckStats]
    total: int
    failures: int

    @property
    def all_passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> bytes:
        return orjson.dumps(
            self.model_dump(mode="json", by_alias=True),
            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE,
        )


def _stats(name: str, results: List[CheckResult]) -> CheckStats:
    margins = [r.margin for r in results if np.isfinite(r.margin)]
    ratios = [r.lhs / r.rhs for r in results if r.rhs > 0 and np.isfinite(r.lhs)]
    passed = sum(r.passed for r in results)
    return CheckStats(
        name=name,
        trials=len(results),
        passed=passed,
        failed=len(results) - passed,
        min_margin=min(margins) if margins else None,
        max_tightness=max(ratios) if ratios else None,
    )


# ─────────────────────────────────────────────────────────────────────────────
#  Running
# ─────────────────────────────────────────────────────────────────────────────
def run_trial(name: str, dim: int, trial: int, config: SuiteConfig) -> CheckResult:
    """Run one seeded trial; numerical errors become failed results."""
    seed = derive_seed(config.base_seed, name, dim, trial)
    rng = np.random.default_rng(seed)
    try:
        result, summary = CHECKS[name](rng, dim, trial, config)
    except (DimensionReductionError, np.linalg.LinAlgError) as e:
        logger.warning("%s trial %d at dim %d raised: %s", name, trial, dim, e)
        nan = float("nan")
        result = CheckResult(name=name, lhs=nan, rhs=nan, margin=nan, passed=False, error=str(e))
        summary = InstanceSummary(dim=dim)
    return result.with_context(seed=seed, trial=trial, instance=summary)


def _run_task(task: Tuple[str, int, int, SuiteConfig]) -> CheckResult:
    return run_trial(*task)


def run_suite(config: SuiteConfig) -> SuiteReport:
    tasks = [
        (name, dim, trial, config)
        for name in config.suites
        for dim in config.dims
        for trial in range(config.trials)
    ]
    logger.info("running %d trials over %s", len(tasks), config.suites)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=64))
    else:
        results = [_run_task(task) for task in tasks]

    # pool.map keeps task order; the sort makes the contract explicit
    order = {name: i for i, name in enumerate(config.suites)}
    results.sort(key=lambda r: (order[r.name], r.instance.dim, r.trial))

    stats = [_stats(name, [r for r in results if r.name == name]) for name in config.suites]
    failures = sum(not r.passed for r in results)
    if failures:
        logger.warning("%d of %d trials failed", failures, len(results))
    return SuiteReport(
        config=config, results=results, stats=stats, total=len(results), failures=failures
    )
