"""
Brute-force checks of the inequalities behind the correction term.

Each check evaluates both sides of one inequality on a concrete instance
and returns a CheckResult with margin = rhs − lhs. A check passes when
margin ≥ −slack; failures are recorded, never raised.
"""

import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .correction import (
    CorrectionQuery,
    binary_entropy,
    block_decompose,
    compute_c,
    contraction_norm,
    delta,
)
from .exceptions import DomainError, PreconditionError
from .linalg import (
    DEFAULT_TOLERANCE,
    Tolerance,
    as_matrix,
    dagger,
    hermitian_eig,
    psd_eigvalsh,
    psd_sqrt,
    require_same_dim,
    spectral_norm,
    trace_norm,
)
from .states import (
    CqState,
    OperatorLike,
    Povm,
    Projector,
    operator_matrix,
    conditional_entropy_cq,
    dephase_operator,
    dephase_povm,
    objective_f,
)

logger = logging.getLogger(__name__)

DEFAULT_SLACK = 1e-9
WEIGHT_SLACK = 1e-12


# ─────────────────────────────────────────────────────────────────────────────
#  Result records
# ─────────────────────────────────────────────────────────────────────────────
class InstanceSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int
    state_rank: Optional[int] = None
    projector_rank: Optional[int] = None
    z_size: Optional[int] = None
    c_size: Optional[int] = None


class Lemma3Witness(BaseModel):
    """Quantities of the trace-norm bound ||√ρ H √ρ||₁ ≤ (r + s)√W ||K||."""

    model_config = ConfigDict(frozen=True)

    r: float
    s: float
    weight_bound: float
    k_norm: float
    lhs: float
    rhs: float


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool = Field(serialization_alias="pass")
    seed: Optional[int] = None
    trial: Optional[int] = None
    instance: Optional[InstanceSummary] = None
    witness: Optional[Dict[str, Optional[float]]] = None
    error: Optional[str] = None

    def with_context(self, *, seed: int, trial: int, instance: InstanceSummary) -> "CheckResult":
        return self.model_copy(update={"seed": seed, "trial": trial, "instance": instance})


def _result(name: str, lhs: float, rhs: float, slack: float, witness: Optional[dict] = None) -> CheckResult:
    margin = float(rhs) - float(lhs)
    passed = margin >= -slack
    if not passed:
        logger.warning("%s violated: lhs = %.12g, rhs = %.12g", name, lhs, rhs)
    return CheckResult(
        name=name, lhs=float(lhs), rhs=float(rhs), margin=margin, passed=passed, witness=witness
    )


def _split_weights(rho: np.ndarray, pi: Projector, tol: Tolerance) -> Tuple[float, float]:
    """Tr(ρΠ) and Tr(ρΠ̄); an outside weight at the rank cutoff is exactly 0."""
    inside = float(np.real(np.trace(rho @ pi.matrix)))
    outside = float(np.real(np.trace(rho @ pi.complement().matrix)))
    if outside <= tol.rank_cutoff * max(inside + outside, 0.0):
        outside = 0.0
    return inside, outside


def _require_povm_element(p: np.ndarray, tol: Tolerance) -> None:
    psd_eigvalsh(p, tol, "POVM element")
    top = spectral_norm(p)
    if top > 1.0 + DEFAULT_SLACK:
        raise DomainError(f"POVM element has norm {top:.12g} > 1")


# ─────────────────────────────────────────────────────────────────────────────
#  Explicit purification (oracle for √ρ P √ρ)
# ─────────────────────────────────────────────────────────────────────────────
def purification(rho: OperatorLike, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """|ψ⟩ = Σ_i √λ_i |v_i⟩_AB ⊗ |i⟩_E with ρ = Σ λ_i |v_i⟩⟨v_i|."""
    r = operator_matrix(rho)
    evals, evecs = hermitian_eig(r, tol)
    weights = np.sqrt(np.clip(evals, 0.0, None))
    dim = r.shape[0]
    psi = np.zeros(dim * dim, dtype=np.complex128)
    for i in range(dim):
        psi += weights[i] * np.kron(evecs[:, i], np.eye(dim)[i])
    return psi


def eve_conditional_state(psi: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Tr_AB[(P ⊗ 1_E)|ψ⟩⟨ψ|]."""
    dim = p.shape[0]
    joint = np.kron(p, np.eye(dim)) @ np.outer(psi, psi.conj())
    return np.einsum("aiaj->ij", joint.reshape(dim, dim, dim, dim))


def explicit_conditional_states(rho: OperatorLike, povm: Povm, tol: Tolerance = DEFAULT_TOLERANCE) -> CqState:
    """Φ(ρ_ABE) built from an explicit purification of ρ."""
    psi = purification(rho, tol)
    return CqState(tuple((label, eve_conditional_state(psi, p)) for label, p in povm), tol)


# ─────────────────────────────────────────────────────────────────────────────
#  Checks
# ─────────────────────────────────────────────────────────────────────────────
def check_lemma3(
    rho: OperatorLike,
    p,
    pi: Projector,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
    weight_bound: Optional[float] = None,
) -> CheckResult:
    """||√ρ H √ρ||₁ ≤ (r + s)√W ||√A^g B √D^g||_inf."""
    r_op = operator_matrix(rho)
    p = as_matrix(p, "POVM element")
    require_same_dim(r_op, p, "state and POVM element")
    _require_povm_element(p, tol)

    inside, outside = _split_weights(r_op, pi, tol)
    w = outside if weight_bound is None else float(weight_bound)
    if w < outside - WEIGHT_SLACK:
        raise PreconditionError(f"weight bound {w:.12g} is below Tr(ρΠ̄) = {outside:.12g}")
    w = max(w, 0.0)

    proj, comp = pi.matrix, pi.complement().matrix
    r = float(np.real(np.trace(proj @ r_op @ proj @ p))) / inside if inside > 0 else 0.0
    # ρ inside Π leaves outside exactly 0, and then s = 0
    s = float(np.real(np.trace(comp @ r_op @ comp @ p))) / outside if outside > 0 else 0.0

    bd = block_decompose(p, pi, tol)
    root = psd_sqrt(r_op, tol)
    lhs = trace_norm(root @ bd.off_diagonal @ root)
    k = contraction_norm(bd, tol)
    rhs = (r + s) * math.sqrt(w) * k

    witness = Lemma3Witness(r=r, s=s, weight_bound=w, k_norm=k, lhs=lhs, rhs=rhs)
    return _result("lemma3", lhs, rhs, slack, witness.model_dump())


def check_continuity(
    rho_cq: CqState,
    sigma_cq: CqState,
    z_size: int,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """H(A|B)_σ − H(A|B)_ρ ≤ ε log₂|A| + (1 + ε) h(ε / (1 + ε)).

    ε is the trace distance of the two cq states; the heavier state plays ρ.
    """
    if rho_cq.labels != sigma_cq.labels:
        raise DomainError("cq states must carry the same labels")
    if z_size < 1:
        raise DomainError(f"z_size must be positive, got {z_size}")
    if rho_cq.trace < sigma_cq.trace:
        rho_cq, sigma_cq = sigma_cq, rho_cq

    eps = 0.5 * trace_norm(rho_cq.embed() - sigma_cq.embed())
    lhs = conditional_entropy_cq(sigma_cq, tol) - conditional_entropy_cq(rho_cq, tol)
    rhs = eps * math.log2(z_size) + (1.0 + eps) * binary_entropy(eps / (1.0 + eps))
    witness = {"epsilon": eps, "trace_rho": rho_cq.trace, "trace_sigma": sigma_cq.trace}
    return _result("continuity", lhs, rhs, slack, witness)


def check_dephasing_lemma(
    rho: OperatorLike,
    povm: Povm,
    pi: Projector,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """f(ΠρΠ) ≤ H(Z|[E]) of Φ(Ξ(ρ_ABE)), the latter via the POVM {Ξ(P_k)}."""
    r_op = operator_matrix(rho)
    proj = pi.matrix
    lhs = objective_f(proj @ r_op @ proj, povm, tol)
    rhs = objective_f(r_op, dephase_povm(povm, pi), tol)
    return _result("dephasing", lhs, rhs, slack)


def check_trace_distance_bound(
    rho: OperatorLike,
    povm: Povm,
    pi: Projector,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """½||Φ(ρ) − Φ(Ξ(ρ))||₁ ≤ c√W with W = Tr(ρΠ̄).

    The witness also carries the intermediate bound ½√W Σ_k (r(k) + s(k))||K_k||,
    which sits between the two sides.
    """
    r_op = operator_matrix(rho)
    require_same_dim(r_op, povm.elements[0][1], "state and POVM")
    inside, w = _split_weights(r_op, pi, tol)
    w = max(w, 0.0)
    root = psd_sqrt(r_op, tol)
    lhs = 0.5 * sum(trace_norm(root @ (p - dephase_operator(p, pi)) @ root) for _, p in povm)

    report = compute_c(povm, pi, tol)
    rhs = report.c * math.sqrt(w)

    proj, comp = pi.matrix, pi.complement().matrix
    weighted = 0.0
    for (_, p), norm in zip(povm, report.per_element):
        r = float(np.real(np.trace(proj @ r_op @ proj @ p))) / inside if inside > 0 else 0.0
        s = float(np.real(np.trace(comp @ r_op @ comp @ p))) / w if w > 0 else 0.0
        weighted += (r + s) * norm.k_norm
    weighted *= 0.5 * math.sqrt(w)

    witness = {"weight": w, "c": report.c, "weighted_bound": weighted}
    return _result("trace_distance", lhs, rhs, slack, witness)


def check_ucdup(
    rho: OperatorLike,
    povm: Povm,
    pi: Projector,
    weight_bound: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """f(ΠρΠ) − f(ρ) ≤ Δ(W) for every W ≥ Tr(ρΠ̄)."""
    r_op = operator_matrix(rho)
    _, outside = _split_weights(r_op, pi, tol)
    if weight_bound < outside - WEIGHT_SLACK:
        raise PreconditionError(
            f"weight bound {weight_bound:.12g} is below Tr(ρΠ̄) = {outside:.12g}"
        )
    w = min(max(float(weight_bound), 0.0), 1.0)
    proj = pi.matrix
    lhs = objective_f(proj @ r_op @ proj, povm, tol) - objective_f(r_op, povm, tol)
    report = compute_c(povm, pi, tol)
    rhs = delta(CorrectionQuery(weight=w, c=report.bounded_c, z_size=povm.z_size))
    return _result("ucdup", lhs, rhs, slack, {"weight": w, "c": report.c})


def check_purification_identity(
    rho: OperatorLike,
    p,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """Spectrum of Tr_AB[(P ⊗ 1)|ψ⟩⟨ψ|] equals the spectrum of √ρ P √ρ.

    lhs is the largest eigenvalue discrepancy, rhs is 0.
    """
    r_op = operator_matrix(rho)
    p = as_matrix(p, "P")
    require_same_dim(r_op, p, "state and P")
    explicit = eve_conditional_state(purification(r_op, tol), p)
    root = psd_sqrt(r_op, tol)
    implicit = root @ p @ root
    a = np.sort(np.linalg.eigvalsh((explicit + dagger(explicit)) / 2.0))
    b = np.sort(np.linalg.eigvalsh((implicit + dagger(implicit)) / 2.0))
    lhs = float(np.max(np.abs(a - b)))
    return _result("purification", lhs, 0.0, slack)


def check_contraction(
    p,
    pi: Projector,
    tol: Tolerance = DEFAULT_TOLERANCE,
    slack: float = DEFAULT_SLACK,
) -> CheckResult:
    """||√A^g B √D^g||_inf ≤ 1 for PSD P."""
    k = contraction_norm(block_decompose(p, pi, tol), tol)
    return _result("contraction", k, 1.0, slack)
