from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from spectral_green.models.exceptions.known_exceptions import ShapeMismatchException


class DickeReducedState(BaseModel):
    """
    Zero-quantum coefficients of the ensemble density operator.

    u: diagonal of ρ₀ (length N+1), v: diagonal of ρ_z (length N+1),
    w: secondary diagonal of ρ₊ (length N, ⟨n,↓|ρ|n−1,↑⟩ for n = −I+1..I).
    ρ₋ = ρ₊† is implicit.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    v: np.ndarray
    w: Optional[np.ndarray] = None

    @field_validator('u', 'v', mode='before')
    @classmethod
    def _real(cls, value):
        return np.asarray(value, dtype=float)

    @field_validator('w', mode='before')
    @classmethod
    def _complex(cls, value):
        return None if value is None else np.asarray(value, dtype=complex)

    @model_validator(mode='after')
    def _lengths(self):
        if self.u.ndim != 1 or self.u.shape != self.v.shape:
            raise ShapeMismatchException("u and v must be vectors of the same length")
        if self.w is not None and self.w.shape != (self.n_passive,):
            raise ShapeMismatchException(f"w must have length N={self.n_passive}")
        return self

    @property
    def n_passive(self) -> int:
        return len(self.u) - 1

    @property
    def coefficient_count(self) -> int:
        return 4 * self.n_passive + 2

    def with_w(self, w: np.ndarray) -> 'DickeReducedState':
        return DickeReducedState(u=self.u, v=self.v, w=w)
