"""
Quantum-information objects for the key-rate objective.

Density operators may be subnormalized, POVMs may be incomplete (the discard
outcome is not a key symbol), and Eve's register is never materialized:
her conditional operator for outcome k is ``√ρ P_k √ρ`` up to an isometry,
which is all an entropy needs.

Entropies are in bits. Subnormalized operators enter ``-Tr[σ log₂ σ]``
directly, and conditional entropies are differences of such terms.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag
from scipy.special import entr

from .exceptions import DomainError
from .linalg import (
    DEFAULT_TOLERANCE,
    Tolerance,
    as_matrix,
    dagger,
    hermitian_eig,
    psd_eigvalsh,
    psd_sqrt,
    require_same_dim,
    require_square,
    spectral_norm,
)

logger = logging.getLogger(__name__)

TRACE_SLACK = 1e-12
POVM_SLACK = 1e-9
PROJECTOR_SLACK = 1e-10


class KeyLabel(NamedTuple):
    """Outcome label (z, c): key symbol z in S_Z, announcement c in S_C."""

    z: int
    c: int


# ─────────────────────────────────────────────────────────────────────────────
#  Density operators
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class DensityOperator:
    """PSD operator with trace in (0, 1]; subnormalized states allowed."""

    matrix: np.ndarray
    tol: Tolerance = DEFAULT_TOLERANCE

    def __post_init__(self):
        m = as_matrix(self.matrix, "density operator")
        require_square(m, "density operator")
        psd_eigvalsh(m, self.tol, "density operator")
        tr = float(np.real(np.trace(m)))
        if not 0.0 < tr <= 1.0 + TRACE_SLACK:
            raise DomainError(f"density operator trace {tr:.6g} is outside (0, 1]")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))

    def sqrt(self) -> np.ndarray:
        return psd_sqrt(self.matrix, self.tol)


OperatorLike = Union[DensityOperator, np.ndarray]


def operator_matrix(rho: OperatorLike) -> np.ndarray:
    if isinstance(rho, DensityOperator):
        return rho.matrix
    m = as_matrix(rho, "state")
    require_square(m, "state")
    return m


# ─────────────────────────────────────────────────────────────────────────────
#  Projectors
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent Π; ``complement()`` gives Π̄ = 1 − Π."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, "projector")
        require_square(m, "projector")
        if spectral_norm(m - dagger(m)) > PROJECTOR_SLACK:
            raise DomainError("projector is not Hermitian")
        if spectral_norm(m @ m - m) > PROJECTOR_SLACK:
            raise DomainError("projector is not idempotent (Π² ≠ Π)")
        object.__setattr__(self, "matrix", (m + dagger(m)) / 2.0)

    @classmethod
    def from_indices(cls, dim: int, indices: Iterable[int]) -> "Projector":
        """Coordinate projector onto the given basis indices."""
        idx = sorted(set(int(i) for i in indices))
        if any(i < 0 or i >= dim for i in idx):
            raise DomainError(f"projector indices {idx} out of range for dimension {dim}")
        diag = np.zeros(dim)
        diag[idx] = 1.0
        return cls(np.diag(diag).astype(np.complex128))

    @classmethod
    def from_isometry(cls, v: np.ndarray) -> "Projector":
        v = as_matrix(v, "isometry")
        return cls(v @ dagger(v))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(float(np.real(np.trace(self.matrix)))))

    def complement(self) -> "Projector":
        return Projector(np.eye(self.dim, dtype=np.complex128) - self.matrix)

    def bases(self) -> Tuple[np.ndarray, np.ndarray]:
        """Orthonormal bases (as column isometries) of range Π and range Π̄.

        Taken from the eigenbasis of Π, so the pair completes each other.
        """
        _, evecs = hermitian_eig(self.matrix)
        r = self.rank
        return evecs[:, :r], evecs[:, r:]


# ─────────────────────────────────────────────────────────────────────────────
#  POVMs
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class Povm:
    """Labelled family {P_{z,c}} with Σ P_k ≤ 1.

    ``strict=True`` additionally demands Σ P_k = 1. |Z| and |C| default to
    one more than the largest label present.
    """

    elements: Tuple[Tuple[KeyLabel, np.ndarray], ...]
    z_size: Optional[int] = None
    c_size: Optional[int] = None
    strict: bool = False
    tol: Tolerance = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.elements:
            raise DomainError("POVM needs at least one element")
        elements = []
        for label, m in self.elements:
            label = KeyLabel(int(label[0]), int(label[1]))
            if label.z < 0 or label.c < 0:
                raise DomainError(f"negative label {tuple(label)}")
            m = as_matrix(m, f"POVM element {tuple(label)}")
            require_square(m, f"POVM element {tuple(label)}")
            psd_eigvalsh(m, self.tol, f"POVM element {tuple(label)}")
            elements.append((label, m))
        first = elements[0][1]
        for label, m in elements[1:]:
            require_same_dim(first, m, f"POVM elements {tuple(elements[0][0])} and {tuple(label)}")
        labels = [label for label, _ in elements]
        if len(set(labels)) != len(labels):
            raise DomainError("POVM labels must be unique")

        z_size = self.z_size if self.z_size is not None else 1 + max(l.z for l in labels)
        c_size = self.c_size if self.c_size is not None else 1 + max(l.c for l in labels)
        if any(l.z >= z_size or l.c >= c_size for l in labels):
            raise DomainError(f"labels exceed |Z| = {z_size}, |C| = {c_size}")

        total = sum(m for _, m in elements)
        top = float(np.max(np.linalg.eigvalsh((total + dagger(total)) / 2.0)))
        if top > 1.0 + POVM_SLACK:
            raise DomainError(f"POVM elements sum above identity (largest eigenvalue {top:.12g})")
        if self.strict and spectral_norm(total - np.eye(first.shape[0])) > POVM_SLACK:
            raise DomainError("POVM is not complete (Σ P_k ≠ 1)")

        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "z_size", z_size)
        object.__setattr__(self, "c_size", c_size)

    @classmethod
    def from_dict(cls, elements: Dict[Tuple[int, int], np.ndarray], **kwargs) -> "Povm":
        return cls(tuple((KeyLabel(*k), m) for k, m in elements.items()), **kwargs)

    @property
    def dim(self) -> int:
        return self.elements[0][1].shape[0]

    @property
    def labels(self) -> List[KeyLabel]:
        return [label for label, _ in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def total(self) -> np.ndarray:
        return sum(m for _, m in self.elements)

    def map_elements(self, fn) -> "Povm":
        return Povm(
            tuple((label, fn(m)) for label, m in self.elements),
            z_size=self.z_size,
            c_size=self.c_size,
            tol=self.tol,
        )


# ─────────────────────────────────────────────────────────────────────────────
#  Classical-quantum states
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class CqState:
    """Σ_k |k⟩⟨k| ⊗ σ_k over labels k = (z, c), stored blockwise."""

    blocks: Tuple[Tuple[KeyLabel, np.ndarray], ...]
    tol: Tolerance = DEFAULT_TOLERANCE

    def __post_init__(self):
        if not self.blocks:
            raise DomainError("cq state needs at least one block")
        blocks = []
        for label, m in self.blocks:
            label = KeyLabel(int(label[0]), int(label[1]))
            m = as_matrix(m, f"cq block {tuple(label)}")
            require_square(m, f"cq block {tuple(label)}")
            psd_eigvalsh(m, self.tol, f"cq block {tuple(label)}")
            blocks.append((label, m))
        for label, m in blocks[1:]:
            require_same_dim(blocks[0][1], m, "cq blocks")
        if len({label for label, _ in blocks}) != len(blocks):
            raise DomainError("cq labels must be unique")
        blocks.sort(key=lambda item: item[0])
        object.__setattr__(self, "blocks", tuple(blocks))
        tr = self.trace
        if tr > 1.0 + TRACE_SLACK:
            raise DomainError(f"cq state trace {tr:.12g} exceeds 1")

    @property
    def dim(self) -> int:
        """Dimension of the conditioning (quantum) register."""
        return self.blocks[0][1].shape[0]

    @property
    def labels(self) -> List[KeyLabel]:
        return [label for label, _ in self.blocks]

    @property
    def trace(self) -> float:
        return float(sum(np.real(np.trace(m)) for _, m in self.blocks))

    def block(self, label) -> np.ndarray:
        label = KeyLabel(*label)
        for l, m in self.blocks:
            if l == label:
                return m
        raise KeyError(tuple(label))

    def embed(self) -> np.ndarray:
        """Block-diagonal matrix of the whole state, blocks in label order."""
        return block_diag(*[m for _, m in self.blocks])

    def scaled(self, t: float) -> "CqState":
        return CqState(tuple((l, t * m) for l, m in self.blocks), self.tol)

    def mixed(self, other: "CqState", t: float) -> "CqState":
        """t·self + (1 − t)·other; labels must agree."""
        if self.labels != other.labels:
            raise DomainError("cq states have different labels")
        return CqState(
            tuple((l, t * a + (1.0 - t) * b) for (l, a), (_, b) in zip(self.blocks, other.blocks)),
            self.tol,
        )


# ─────────────────────────────────────────────────────────────────────────────
#  Dephasing channel Ξ(X) = ΠXΠ + Π̄XΠ̄
# ─────────────────────────────────────────────────────────────────────────────
def dephase_operator(m, pi: Projector) -> np.ndarray:
    m = as_matrix(m)
    require_same_dim(m, pi.matrix, "operator and projector")
    p = pi.matrix
    q = np.eye(pi.dim, dtype=np.complex128) - p
    return p @ m @ p + q @ m @ q


def dephase(rho: OperatorLike, pi: Projector) -> DensityOperator:
    tol = rho.tol if isinstance(rho, DensityOperator) else DEFAULT_TOLERANCE
    return DensityOperator(dephase_operator(operator_matrix(rho), pi), tol)


def dephase_povm(povm: Povm, pi: Projector) -> Povm:
    """{Ξ(P_k)}: again a POVM because Ξ is positive and unital."""
    return povm.map_elements(lambda m: dephase_operator(m, pi))


def dephase_adjoint_identity_check(rho: OperatorLike, p, pi: Projector) -> Tuple[float, float]:
    """Both sides of Tr(P Ξ(ρ)) = Tr(Ξ(P) ρ)."""
    r = operator_matrix(rho)
    p = as_matrix(p, "P")
    require_same_dim(r, p, "state and P")
    lhs = np.trace(p @ dephase_operator(r, pi))
    rhs = np.trace(dephase_operator(p, pi) @ r)
    return float(np.real(lhs)), float(np.real(rhs))


# ─────────────────────────────────────────────────────────────────────────────
#  Eve's conditional states and entropies
# ─────────────────────────────────────────────────────────────────────────────
def conditional_states(rho: OperatorLike, povm: Povm, tol: Tolerance = DEFAULT_TOLERANCE) -> CqState:
    """Blocks √ρ P_k √ρ, Eve's conditional operators up to an isometry."""
    r = operator_matrix(rho)
    require_same_dim(r, povm.elements[0][1], "state and POVM")
    root = psd_sqrt(r, tol)
    return CqState(tuple((label, root @ p @ root) for label, p in povm), tol)


def von_neumann_entropy(m, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """−Σ λ log₂ λ over the (clipped) spectrum; 0·log 0 = 0."""
    evals = psd_eigvalsh(m, tol, "operator")
    return float(np.sum(entr(evals)) / np.log(2.0))


def conditional_entropy_cq(state: CqState, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """H(Z|CE) = H(ZCE) − H(CE) of a cq state.

    H(ZCE) is a direct sum over all blocks; H(CE) uses σ_c = Σ_z σ_{z,c}.
    """
    h_zce = sum(von_neumann_entropy(m, tol) for _, m in state.blocks)
    marginals: Dict[int, np.ndarray] = {}
    for label, m in state.blocks:
        marginals[label.c] = marginals.get(label.c, 0) + m
    h_ce = sum(von_neumann_entropy(m, tol) for m in marginals.values())
    return float(h_zce - h_ce)


def objective_f(rho: OperatorLike, povm: Povm, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Key-rate objective H(Z|[E]) of Φ(ρ_ABE); ρ may be subnormalized."""
    return conditional_entropy_cq(conditional_states(rho, povm, tol), tol)


def relabel_announcements(povm: Povm, permutation: Sequence[int]) -> Povm:
    """Same POVM with announcement c renamed to permutation[c]."""
    return Povm(
        tuple((KeyLabel(label.z, int(permutation[label.c])), m) for label, m in povm),
        z_size=povm.z_size,
        c_size=povm.c_size,
        tol=povm.tol,
    )
