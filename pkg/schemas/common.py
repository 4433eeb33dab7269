"""
Shared pydantic types

Complex numbers travel as [re, im] pairs; matrices as row-major lists of
such pairs. The same encoding is used by scenario documents, matrix
exchange documents and reports.
"""
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, Field, PlainSerializer, PlainValidator, model_validator


def _to_complex(value: Any) -> complex:
    if isinstance(value, complex):
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (re, im)):
            return complex(float(re), float(im))
    raise ValueError(f"expected a [re, im] pair, got {value!r}")


def _from_complex(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


ComplexValue = Annotated[
    complex,
    PlainValidator(_to_complex),
    PlainSerializer(_from_complex, return_type=list[float]),
]


def _to_matrix(value: Any) -> np.ndarray:
    if isinstance(value, np.ndarray):
        matrix = value.astype(complex)
    else:
        if not isinstance(value, (list, tuple)) or not value:
            raise ValueError("matrix must be a non-empty list of rows")
        rows = [[_to_complex(entry) for entry in row] for row in value]
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise ValueError("matrix rows have different lengths")
        matrix = np.array(rows, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"matrix must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix has non-finite entries")
    return matrix


def _from_matrix(value: np.ndarray) -> list[list[list[float]]]:
    return [[_from_complex(complex(entry)) for entry in row] for row in value]


MatrixField = Annotated[
    np.ndarray,
    PlainValidator(_to_matrix),
    PlainSerializer(_from_matrix, return_type=list),
]


class MatrixDocument(BaseModel):
    """Matrix exchange document: {dim, rows}"""

    model_config = {"extra": "forbid", "arbitrary_types_allowed": True}

    dim: int = Field(ge=1, le=256, description="Matrix dimension")
    rows: MatrixField = Field(description="Row-major entries as [re, im] pairs")

    @model_validator(mode="after")
    def check_dim(self) -> "MatrixDocument":
        if self.rows.shape[0] != self.dim:
            raise ValueError(f"dim={self.dim} but rows describe a {self.rows.shape[0]}x{self.rows.shape[0]} matrix")
        return self

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "MatrixDocument":
        matrix = np.asarray(matrix, dtype=complex)
        return cls(dim=matrix.shape[0], rows=matrix)
