"""
Dense complex linear algebra for the correction term.

Every operator is a 2-D complex numpy array. Decompositions are sorted in
descending order, norms come from singular values, and positivity is
judged relative to the largest eigenvalue magnitude under an explicit
`Tolerance`.
"""

import logging
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .exceptions import DomainError

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
#  Numerical policy
# ─────────────────────────────────────────────────────────────────────────────
class Tolerance(BaseModel):
    """Relative thresholds for support detection and PSD repair.

    rank_cutoff : eigenvalues (singular values) at or below
                  ``rank_cutoff * largest`` are treated as zero.
    psd_clip    : negative eigenvalues down to ``-psd_clip * largest`` are
                  clipped to zero, anything more negative is rejected.
    """

    model_config = ConfigDict(frozen=True)

    rank_cutoff: float = Field(default=1e-10, gt=0.0, lt=1.0)
    psd_clip: float = Field(default=1e-10, gt=0.0, lt=1.0)

    @classmethod
    def from_settings(cls) -> "Tolerance":
        from django.conf import settings

        return cls(rank_cutoff=settings.RANK_CUTOFF, psd_clip=settings.PSD_CLIP)


DEFAULT_TOLERANCE = Tolerance()


# ─────────────────────────────────────────────────────────────────────────────
#  Input coercion
# ─────────────────────────────────────────────────────────────────────────────
def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DomainError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} contains NaN or Inf entries")
    return arr


def require_square(m: np.ndarray, name: str = "matrix") -> None:
    if m.shape[0] != m.shape[1]:
        raise DomainError(f"{name} must be square, got shape {m.shape}")


def require_same_dim(a: np.ndarray, b: np.ndarray, what: str = "operators") -> None:
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch between {what}: {a.shape} vs {b.shape}")


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


# ─────────────────────────────────────────────────────────────────────────────
#  Decompositions
# ─────────────────────────────────────────────────────────────────────────────
def svd(m) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``M = U diag(s) V†`` with singular values descending.

    Returns ``(U, s, V)``; note that V, not V†, is returned.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    k = min(rows, cols)
    if k == 0:
        return (np.zeros((rows, 0), dtype=np.complex128),
                np.zeros(0),
                np.zeros((cols, 0), dtype=np.complex128))
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return u, s, dagger(vh)


def hermitian_eig(m, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input must be Hermitian within ``psd_clip * ||M||_inf``; the
    Hermitian part is decomposed.

    Raises
    ------
    DomainError
        if M is not square or not Hermitian within tolerance.
    """
    m = as_matrix(m)
    require_square(m)
    if m.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=np.complex128)
    skew = spectral_norm(m - dagger(m)) / 2.0
    scale = spectral_norm(m)
    if skew > tol.psd_clip * scale:
        raise DomainError(
            f"matrix is not Hermitian: anti-Hermitian part has norm {skew:.3e} "
            f"(allowed {tol.psd_clip * scale:.3e})"
        )
    evals, evecs = np.linalg.eigh((m + dagger(m)) / 2.0)
    return evals[::-1], evecs[:, ::-1]


def _psd_spectrum(m, tol: Tolerance, name: str) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition with tiny negative eigenvalues clipped to zero."""
    evals, evecs = hermitian_eig(m, tol)
    if evals.size == 0:
        return evals, evecs
    scale = float(np.max(np.abs(evals)))
    floor = -tol.psd_clip * scale
    if evals[-1] < floor:
        raise DomainError(
            f"{name} is not positive semidefinite: eigenvalue {evals[-1]:.3e} "
            f"below clip threshold {floor:.3e}"
        )
    if evals[-1] < 0:
        logger.debug("clipping %d negative eigenvalue(s) of %s", int(np.sum(evals < 0)), name)
    return np.clip(evals, 0.0, None), evecs


def psd_eigvalsh(m, tol: Tolerance = DEFAULT_TOLERANCE, name: str = "matrix") -> np.ndarray:
    """Clipped eigenvalues (descending) of a PSD matrix."""
    return _psd_spectrum(m, tol, name)[0]


# ─────────────────────────────────────────────────────────────────────────────
#  Schatten norms
# ─────────────────────────────────────────────────────────────────────────────
def singular_values(m) -> np.ndarray:
    m = as_matrix(m)
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def spectral_norm(m) -> float:
    """Largest singular value (Schatten p = inf)."""
    s = singular_values(m)
    return float(s[0]) if s.size else 0.0


def trace_norm(m) -> float:
    """Sum of singular values (Schatten p = 1)."""
    return float(np.sum(singular_values(m)))


# ─────────────────────────────────────────────────────────────────────────────
#  Functions of PSD operators
# ─────────────────────────────────────────────────────────────────────────────
def _support_mask(evals: np.ndarray, tol: Tolerance) -> np.ndarray:
    if evals.size == 0 or evals[0] <= 0.0:
        return np.zeros(evals.shape, dtype=bool)
    return evals > tol.rank_cutoff * evals[0]


def numerical_rank(m, tol: Tolerance = DEFAULT_TOLERANCE) -> int:
    evals, _ = _psd_spectrum(m, tol, "matrix")
    return int(np.sum(_support_mask(evals, tol)))


def support_projector(m, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Projector onto the span of eigenvectors above the rank cutoff."""
    evals, evecs = _psd_spectrum(m, tol, "matrix")
    keep = evecs[:, _support_mask(evals, tol)]
    return keep @ dagger(keep)


def generalized_inverse(m, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Inverse of a PSD operator on its support, zero on its kernel.

    ``M^g M`` is the support projector of M.
    """
    evals, evecs = _psd_spectrum(m, tol, "matrix")
    inv = np.zeros_like(evals)
    mask = _support_mask(evals, tol)
    inv[mask] = 1.0 / evals[mask]
    return (evecs * inv) @ dagger(evecs)


def psd_sqrt(m, tol: Tolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Positive square root of a PSD operator.

    Eigenvalues at or below the rank cutoff count as kernel, so √M is
    supported exactly where M^g is.
    """
    evals, evecs = _psd_spectrum(m, tol, "matrix")
    root = np.zeros_like(evals)
    mask = _support_mask(evals, tol)
    root[mask] = np.sqrt(evals[mask])
    return (evecs * root) @ dagger(evecs)
