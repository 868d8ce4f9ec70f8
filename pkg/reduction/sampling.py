"""
Seeded random instances for the verification suites.

Every generator takes ``seed`` (an int, a numpy Generator or None) and is
deterministic in it. Matrices come from the complex Ginibre ensemble,
unitaries from the QR decomposition of a Ginibre matrix with the phases of
R's diagonal divided out (Haar measure).
"""

from typing import Optional, Tuple, Union

import numpy as np

from .exceptions import DomainError
from .linalg import dagger, generalized_inverse, psd_sqrt
from .states import CqState, DensityOperator, KeyLabel, Povm, Projector

Seed = Union[int, np.random.Generator, None]


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rows: int, cols: int, seed: Seed = None) -> np.ndarray:
    """Matrix of i.i.d. standard complex normal entries."""
    rng = _rng(seed)
    return (rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))) / np.sqrt(2)


def random_unitary(dim: int, seed: Seed = None) -> np.ndarray:
    q, r = np.linalg.qr(ginibre(dim, dim, seed))
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def _check_rank(dim: int, rank: int) -> None:
    if dim < 1:
        raise DomainError(f"dimension must be positive, got {dim}")
    if not 0 <= rank <= dim:
        raise DomainError(f"rank {rank} must lie in [0, {dim}]")


def random_psd(dim: int, rank: int, seed: Seed = None) -> np.ndarray:
    """G G† with G of shape dim × rank (unnormalized)."""
    _check_rank(dim, rank)
    g = ginibre(dim, rank, seed)
    return g @ dagger(g)


def random_density(dim: int, rank: int, seed: Seed = None) -> DensityOperator:
    """Normalized G G† with G of width ``rank``."""
    _check_rank(dim, rank)
    if rank == 0:
        raise DomainError("a density operator needs rank at least 1")
    m = random_psd(dim, rank, seed)
    return DensityOperator(m / np.real(np.trace(m)))


def random_projector(dim: int, rank: int, seed: Seed = None) -> Projector:
    """Span of the first ``rank`` columns of a Haar unitary."""
    _check_rank(dim, rank)
    return Projector.from_isometry(random_unitary(dim, seed)[:, :rank])


def random_povm(dim: int, n_elements: int, z_size: int, c_size: int, seed: Seed = None) -> Povm:
    """Complete POVM S^{-1/2} M_k S^{-1/2} with M_k = G_k G_k†, S = Σ M_k.

    Labels run over z fastest: k = c·|Z| + z.
    """
    if n_elements < 1 or n_elements != z_size * c_size:
        raise DomainError(
            f"n_elements = {n_elements} must equal z_size·c_size = {z_size * c_size} and be positive"
        )
    rng = _rng(seed)
    raw = [random_psd(dim, dim, rng) for _ in range(n_elements)]
    s_inv_root = psd_sqrt(generalized_inverse(sum(raw)))
    elements = []
    for k, m in enumerate(raw):
        p = s_inv_root @ m @ s_inv_root
        elements.append((KeyLabel(k % z_size, k // z_size), (p + dagger(p)) / 2.0))
    return Povm(tuple(elements), z_size=z_size, c_size=c_size)


def random_povm_element(dim: int, seed: Seed = None) -> np.ndarray:
    """V diag(u) V† with u uniform in [0, 1]: always 0 ≤ P ≤ 1."""
    rng = _rng(seed)
    v = random_unitary(dim, rng)
    u = rng.uniform(0.0, 1.0, size=dim)
    return (v * u) @ dagger(v)


def random_block_diagonal_povm(pi: Projector, z_size: int, c_size: int, seed: Seed = None) -> Povm:
    """Complete POVM whose elements all commute with Π."""
    rng = _rng(seed)
    povm = random_povm(pi.dim, z_size * c_size, z_size, c_size, rng)
    p = pi.matrix
    q = np.eye(pi.dim) - p
    # a random POVM on each block, glued: Π P Π + Π̄ P' Π̄
    other = random_povm(pi.dim, z_size * c_size, z_size, c_size, rng)
    return Povm(
        tuple(
            (label, p @ a @ p + q @ b @ q)
            for (label, a), (_, b) in zip(povm.elements, other.elements)
        ),
        z_size=z_size,
        c_size=c_size,
    )


def random_cq_state(
    z_size: int,
    c_size: int,
    dim: int,
    trace: float = 1.0,
    seed: Seed = None,
    rank: Optional[int] = None,
) -> CqState:
    """Cq state over all labels (z, c) with total trace ``trace``."""
    if not 0.0 < trace <= 1.0:
        raise DomainError(f"trace {trace} must lie in (0, 1]")
    rng = _rng(seed)
    blocks = []
    for c in range(c_size):
        for z in range(z_size):
            r = rank if rank is not None else int(rng.integers(1, dim + 1))
            blocks.append((KeyLabel(z, c), random_psd(dim, r, rng) * rng.uniform(0.05, 1.0)))
    total = sum(np.real(np.trace(m)) for _, m in blocks)
    return CqState(tuple((label, m * (trace / total)) for label, m in blocks))


def random_cq_pair(z_size: int, dim: int, seed: Seed = None) -> Tuple[CqState, CqState]:
    """Two subnormalized cq states over the same labels.

    Half of the pairs are close (σ a small perturbation of ρ), the rest are
    independent, so both the small-ε and large-ε regimes get exercised.
    """
    rng = _rng(seed)
    c_size = int(rng.integers(1, 3))
    rho = random_cq_state(z_size, c_size, dim, float(rng.uniform(0.3, 1.0)), rng)
    other = random_cq_state(z_size, c_size, dim, float(rng.uniform(0.3, 1.0)), rng)
    if rng.uniform() < 0.5:
        t = float(rng.uniform(0.0, 0.2))
        sigma = rho.mixed(other, 1.0 - t)
    else:
        sigma = other
    return rho, sigma
