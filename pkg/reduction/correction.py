"""
Improved correction term for dimension reduction.

With respect to a projector Π every POVM element splits into blocks

    P = [[A, B], [B†, D]],   A = ΠPΠ, B = ΠPΠ̄, D = Π̄PΠ̄,

and positivity of P makes K = √A^g B √D^g a contraction. The constant
c = max_k ||K_k||_inf measures how far the POVM is from block-diagonal and
enters the correction term

    Δ(W) = c√W log₂|Z| + (1 + c√W) h(c√W / (1 + c√W)).
"""

import logging
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import xlogy

from .exceptions import DomainError
from .linalg import (
    DEFAULT_TOLERANCE,
    Tolerance,
    as_matrix,
    dagger,
    generalized_inverse,
    psd_eigvalsh,
    psd_sqrt,
    require_same_dim,
    require_square,
    spectral_norm,
)
from .states import Povm, Projector

logger = logging.getLogger(__name__)

CONTRACTION_SLACK = 1e-9


# ─────────────────────────────────────────────────────────────────────────────
#  Block decomposition
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Blocks of P in the bases of range Π (rank r) and range Π̄ (rank d − r).

    a_block : r × r, b_block : r × (d − r), d_block : (d − r) × (d − r).
    off_diagonal is H = ΠPΠ̄ + Π̄PΠ embedded in the full space.
    """

    a_block: np.ndarray
    b_block: np.ndarray
    d_block: np.ndarray
    off_diagonal: np.ndarray
    range_basis: np.ndarray
    complement_basis: np.ndarray

    def embed(self) -> np.ndarray:
        """A + B + B† + D in the full space."""
        u, v = self.range_basis, self.complement_basis
        b = u @ self.b_block @ dagger(v)
        return u @ self.a_block @ dagger(u) + b + dagger(b) + v @ self.d_block @ dagger(v)


def block_decompose(p, pi: Projector, tol: Tolerance = DEFAULT_TOLERANCE) -> BlockDecomposition:
    p = as_matrix(p, "POVM element")
    require_square(p, "POVM element")
    require_same_dim(p, pi.matrix, "POVM element and projector")
    psd_eigvalsh(p, tol, "POVM element")
    u, v = pi.bases()
    proj, comp = pi.matrix, pi.complement().matrix
    return BlockDecomposition(
        a_block=dagger(u) @ p @ u,
        b_block=dagger(u) @ p @ v,
        d_block=dagger(v) @ p @ v,
        off_diagonal=proj @ p @ comp + comp @ p @ proj,
        range_basis=u,
        complement_basis=v,
    )


def contraction_norm(bd: BlockDecomposition, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """||√A^g B √D^g||_inf, in [0, 1] for PSD P."""
    if bd.b_block.size == 0:
        return 0.0
    # (√A)^g = √(A^g); the cutoff acts on the spectrum of A itself
    root_a = psd_sqrt(generalized_inverse(bd.a_block, tol), tol)
    root_d = psd_sqrt(generalized_inverse(bd.d_block, tol), tol)
    return spectral_norm(root_a @ bd.b_block @ root_d)


def rank_one_contraction_norm(vector, pi: Projector, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Closed form of ||K|| for P = |v⟩⟨v|.

    K is then the outer product of the unit vectors along Πv and Π̄v, so
    its norm is 1 when both pieces survive the rank cutoff and 0 otherwise.
    """
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    if v.shape[0] != pi.dim:
        raise DomainError(f"vector of length {v.shape[0]} does not match projector dimension {pi.dim}")
    norm_sq = float(np.vdot(v, v).real)
    if norm_sq == 0.0:
        return 0.0
    inside = float(np.vdot(v, pi.matrix @ v).real)
    outside = norm_sq - inside
    cut = tol.rank_cutoff * norm_sq
    return 1.0 if inside > cut and outside > cut else 0.0


# ─────────────────────────────────────────────────────────────────────────────
#  The constant c
# ─────────────────────────────────────────────────────────────────────────────
class ElementNorm(BaseModel):
    model_config = ConfigDict(frozen=True)

    z: int
    c: int
    k_norm: float


class ContractionReport(BaseModel):
    """Per-element ||K_k|| and their maximum c."""

    model_config = ConfigDict(frozen=True)

    per_element: List[ElementNorm]
    c: float

    @property
    def bounded_c(self) -> float:
        """c clipped to 1, for use in Δ (rounding can push it just above)."""
        return min(self.c, 1.0)


def compute_c(povm: Povm, pi: Projector, tol: Tolerance = DEFAULT_TOLERANCE) -> ContractionReport:
    require_same_dim(povm.elements[0][1], pi.matrix, "POVM and projector")
    norms = []
    for label, p in povm:
        k = contraction_norm(block_decompose(p, pi, tol), tol)
        logger.debug("||K|| for element %s: %.12g", tuple(label), k)
        if k > 1.0 + CONTRACTION_SLACK:
            logger.warning("element %s has ||K|| = %.12g > 1", tuple(label), k)
        norms.append(ElementNorm(z=label.z, c=label.c, k_norm=k))
    return ContractionReport(per_element=norms, c=max(n.k_norm for n in norms))


# ─────────────────────────────────────────────────────────────────────────────
#  Correction term
# ─────────────────────────────────────────────────────────────────────────────
class CorrectionQuery(BaseModel):
    """Inputs of Δ: weight bound W, constant c and key register size |Z|."""

    model_config = ConfigDict(frozen=True)

    weight: float = Field(ge=0.0, le=1.0)
    c: float = Field(ge=0.0, le=1.0)
    z_size: int = Field(ge=1)


def binary_entropy(x: float) -> float:
    """h(x) = −x log₂ x − (1 − x) log₂(1 − x), with h(0) = h(1) = 0."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument {x} outside [0, 1]")
    return float(-(xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)) / math.log(2.0))


def delta(q: CorrectionQuery) -> float:
    x = q.c * math.sqrt(q.weight)
    if x == 0.0:
        return 0.0
    return x * math.log2(q.z_size) + (1.0 + x) * binary_entropy(x / (1.0 + x))


def keyrate_lower_bound(finite_dim_value: float, q: CorrectionQuery) -> float:
    """Finite-dimensional optimum minus Δ(W)."""
    return float(finite_dim_value) - delta(q)


class CurvePoint(NamedTuple):
    weight: float
    c: float
    delta: float


def uniform_grid(w_max: float, steps: int) -> np.ndarray:
    """steps + 1 points from 0 to w_max inclusive."""
    if steps < 1:
        raise DomainError(f"steps must be at least 1, got {steps}")
    if not 0.0 <= w_max <= 1.0:
        raise DomainError(f"w_max {w_max} outside [0, 1]")
    return np.linspace(0.0, w_max, steps + 1)


def delta_curve(c_values: Sequence[float], z_size: int, w_grid: Sequence[float]) -> List[CurvePoint]:
    """Δ at every (W, c), rows ordered by (c, W)."""
    rows = []
    for c in sorted(float(c) for c in c_values):
        for w in sorted(float(w) for w in w_grid):
            rows.append(CurvePoint(w, c, delta(CorrectionQuery(weight=w, c=c, z_size=z_size))))
    return rows


# ─────────────────────────────────────────────────────────────────────────────
#  Nested-projector estimation
# ─────────────────────────────────────────────────────────────────────────────
class NestedEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    nested_dims: List[int]
    estimates: List[float]
    converged: bool
    convergence_tol: float


def estimate_c_nested(
    povm: Povm,
    pi: Projector,
    nested_dims: Sequence[int],
    tol: Tolerance = DEFAULT_TOLERANCE,
    convergence_tol: float = 1e-6,
    basis: Optional[np.ndarray] = None,
) -> NestedEstimate:
    """Estimate c on growing subspaces Π_C ⊇ Π.

    Π_C spans the first n columns of ``basis`` (the coordinate basis by
    default). On each, B and D are compressed to Π_C − Π and c is computed
    for the compressed problem; at n = dim this is compute_c.
    """
    dim = pi.dim
    dims = [int(n) for n in nested_dims]
    if not dims:
        raise DomainError("nested_dims is empty")
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise DomainError(f"nested_dims must be strictly increasing, got {dims}")
    if dims[0] < pi.rank or dims[-1] > dim:
        raise DomainError(f"nested_dims must lie in [rank Π = {pi.rank}, {dim}], got {dims}")
    if convergence_tol <= 0:
        raise DomainError("convergence_tol must be positive")
    frame = np.eye(dim, dtype=np.complex128) if basis is None else as_matrix(basis, "basis")
    require_same_dim(frame, pi.matrix, "basis and projector")

    smallest = frame[:, : dims[0]]
    leak = spectral_norm(pi.matrix - smallest @ dagger(smallest) @ pi.matrix)
    if leak > 1e-10:
        raise DomainError(
            f"range of Π is not contained in the smallest Π_C (dimension {dims[0]}): leak {leak:.3e}"
        )

    estimates = []
    for n in dims:
        v = frame[:, :n]
        local_pi = Projector(dagger(v) @ pi.matrix @ v)
        local = povm.map_elements(lambda m: dagger(v) @ m @ v)
        estimates.append(compute_c(local, local_pi, tol).c)
        logger.debug("nested estimate at dimension %d: %.12g", n, estimates[-1])

    converged = len(estimates) >= 2 and abs(estimates[-1] - estimates[-2]) < convergence_tol
    return NestedEstimate(
        nested_dims=dims, estimates=estimates, converged=converged, convergence_tol=convergence_tol
    )
