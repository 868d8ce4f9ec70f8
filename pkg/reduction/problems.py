"""
Problem files: the inputs of a correction-constant computation.

A problem file is a JSON document

    {
      "dim": 2,
      "projector": {"indices": [0]},               # or {"matrix": M}
      "povm": [{"z": 0, "c": 0, "matrix": M}, ...],
      "nested_dims": [1, 2]                         # optional
    }

with every complex matrix written as rows of [re, im] pairs.
"""

from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .exceptions import DomainError, ProblemFileError, ProblemValidationError
from .linalg import DEFAULT_TOLERANCE, Tolerance
from .states import KeyLabel, Povm, Projector

ComplexEntry = Tuple[float, float]
MatrixRows = List[List[ComplexEntry]]


def _check_shape(rows: MatrixRows, dim: int, where: str) -> None:
    if len(rows) != dim:
        raise ValueError(f"{where}: matrix has {len(rows)} rows, expected {dim}")
    for j, row in enumerate(rows):
        if len(row) != dim:
            raise ValueError(f"{where}: row {j} has {len(row)} entries, expected {dim}")


def rows_to_matrix(rows: MatrixRows) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.float64)
    return arr[..., 0] + 1j * arr[..., 1]


def matrix_to_rows(m: np.ndarray) -> MatrixRows:
    return [[(float(z.real), float(z.imag)) for z in row] for row in np.asarray(m)]


class ProjectorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    indices: Optional[List[int]] = None
    matrix: Optional[MatrixRows] = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "ProjectorSpec":
        if (self.indices is None) == (self.matrix is None):
            raise ValueError("projector needs exactly one of 'indices' or 'matrix'")
        return self


class PovmEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    z: int = Field(ge=0)
    c: int = Field(ge=0)
    matrix: MatrixRows


class ProblemFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=1)
    projector: ProjectorSpec
    povm: List[PovmEntry] = Field(min_length=1)
    nested_dims: Optional[List[int]] = None

    @model_validator(mode="after")
    def _shapes_match_dim(self) -> "ProblemFile":
        for i, entry in enumerate(self.povm):
            _check_shape(entry.matrix, self.dim, f"povm[{i}]")
        if self.projector.matrix is not None:
            _check_shape(self.projector.matrix, self.dim, "projector")
        return self

    # ── parsing ──────────────────────────────────────────────────────────
    @classmethod
    def parse(cls, raw: Union[bytes, str]) -> "ProblemFile":
        try:
            data = orjson.loads(raw)
        except orjson.JSONDecodeError as e:
            raise ProblemFileError(f"invalid JSON: {e}") from e
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            details = "; ".join(
                f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
                for err in e.errors()
            )
            raise ProblemFileError(f"invalid problem file: {details}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ProblemFile":
        try:
            raw = Path(path).read_bytes()
        except OSError as e:
            raise ProblemFileError(f"cannot read {path}: {e}") from e
        return cls.parse(raw)

    # ── canonical serialization ──────────────────────────────────────────
    @classmethod
    def from_operators(
        cls, povm: Povm, pi: Projector, nested_dims: Optional[Sequence[int]] = None
    ) -> "ProblemFile":
        return cls(
            dim=povm.dim,
            projector=ProjectorSpec(matrix=matrix_to_rows(pi.matrix)),
            povm=[
                PovmEntry(z=label.z, c=label.c, matrix=matrix_to_rows(m)) for label, m in povm
            ],
            nested_dims=list(nested_dims) if nested_dims is not None else None,
        )

    def dumps(self) -> bytes:
        return orjson.dumps(
            self.model_dump(exclude_none=True),
            option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
        )

    # ── domain objects ───────────────────────────────────────────────────
    def to_projector(self) -> Projector:
        try:
            if self.projector.indices is not None:
                return Projector.from_indices(self.dim, self.projector.indices)
            return Projector(rows_to_matrix(self.projector.matrix))
        except DomainError as e:
            raise ProblemValidationError(f"projector: {e}") from e

    def to_povm(self, tol: Tolerance = DEFAULT_TOLERANCE) -> Povm:
        z_values = {entry.z for entry in self.povm}
        missing = sorted(set(range(max(z_values) + 1)) - z_values)
        if missing:
            # a skipped z would silently change log₂|Z|
            raise ProblemValidationError(f"povm: key symbol index(es) {missing} are skipped")
        try:
            return Povm(
                tuple((KeyLabel(e.z, e.c), rows_to_matrix(e.matrix)) for e in self.povm),
                tol=tol,
            )
        except DomainError as e:
            raise ProblemValidationError(f"povm: {e}") from e
