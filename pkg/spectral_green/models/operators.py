"""
Operator records on Hilbert and Liouville spaces.

Arrays are copied on construction and marked read-only, so every record
is immutable and can be shared between sweep workers.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from spectral_green.config import numeric_policy
from spectral_green.models.exceptions.known_exceptions import (
    InvalidDensityOperatorException,
    NotHermitianException,
    ShapeMismatchException,
)


def _frozen_array(value, dtype=complex) -> np.ndarray:
    array = np.array(value, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


class QOperator(BaseModel):
    """Complex square matrix on a finite Hilbert space."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray
    hermitian: bool = False
    # Declared trace of a density-like operator (1 for states, 0 for deviations)
    density_trace: Optional[float] = None

    @field_validator('entries', mode='before')
    @classmethod
    def _coerce_entries(cls, value):
        array = _frozen_array(value)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ShapeMismatchException(f"Operator must be a square matrix, got shape {array.shape}")
        return array

    @model_validator(mode='after')
    def _check_flags(self):
        scale = max(float(np.max(np.abs(self.entries), initial=0.0)), 1.0)
        if self.hermitian:
            deviation = float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))
            if deviation > numeric_policy.hermitian_tol * scale:
                raise NotHermitianException(f"Operator flagged Hermitian deviates by {deviation:.3e}")
        if self.density_trace is not None:
            trace = np.trace(self.entries)
            if abs(trace.imag) > numeric_policy.trace_tol * scale or \
                    abs(trace.real - self.density_trace) > numeric_policy.trace_tol * scale:
                raise InvalidDensityOperatorException(
                    f"Density-like operator has trace {trace} instead of {self.density_trace}")
        return self

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def dag(self) -> 'QOperator':
        return QOperator(entries=self.entries.conj().T, hermitian=self.hermitian)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def expectation(self, observable: 'QOperator') -> float:
        """Real part of Tr(self · observable)"""
        if observable.dim != self.dim:
            raise ShapeMismatchException(f"Observable dimension {observable.dim} does not match {self.dim}")
        return float(np.real(np.einsum('ij,ji->', self.entries, observable.entries)))


class SuperOperator(BaseModel):
    """
    Complex matrix acting on column-stacked operators.

    When the matrix is the restriction of a Liouville-space map to an invariant
    subspace, `support` lists the column-stacked indices it acts on. Coordinate
    spaces that are not operator spaces leave `hilbert_dim` unset.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray
    hilbert_dim: Optional[int] = None
    support: Optional[np.ndarray] = None

    @field_validator('entries', mode='before')
    @classmethod
    def _coerce_entries(cls, value):
        array = _frozen_array(value)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise ShapeMismatchException(f"Superoperator must be square, got shape {array.shape}")
        return array

    @field_validator('support', mode='before')
    @classmethod
    def _coerce_support(cls, value):
        if value is None:
            return None
        return _frozen_array(value, dtype=np.int64)

    @model_validator(mode='after')
    def _check_dims(self):
        if self.hilbert_dim is not None:
            expected = self.hilbert_dim ** 2 if self.support is None else len(self.support)
            if self.dim != expected:
                raise ShapeMismatchException(
                    f"Superoperator of size {self.dim} does not match Hilbert dimension {self.hilbert_dim}")
        elif self.support is not None and len(self.support) != self.dim:
            raise ShapeMismatchException("Support length does not match superoperator size")
        return self

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __add__(self, other: 'SuperOperator') -> 'SuperOperator':
        if other.dim != self.dim:
            raise ShapeMismatchException(f"Cannot add superoperators of sizes {self.dim} and {other.dim}")
        return SuperOperator(entries=self.entries + other.entries, hilbert_dim=self.hilbert_dim, support=self.support)

    def __sub__(self, other: 'SuperOperator') -> 'SuperOperator':
        return self + other.scaled(-1.0)

    def scaled(self, factor: complex) -> 'SuperOperator':
        return SuperOperator(entries=factor * self.entries, hilbert_dim=self.hilbert_dim, support=self.support)

    def apply(self, operand: QOperator) -> QOperator:
        """Apply to an operator through the column-stacking convention"""
        from spectral_green.liouops.vectorization import devec, vec

        if self.hilbert_dim is None or self.support is not None:
            raise ShapeMismatchException("apply() needs a superoperator on the full Liouville space")
        if operand.dim != self.hilbert_dim:
            raise ShapeMismatchException(f"Operand dimension {operand.dim} does not match {self.hilbert_dim}")
        return QOperator(entries=devec(self.entries @ vec(operand.entries), self.hilbert_dim))
