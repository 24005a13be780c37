from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spectral_green.models.exceptions.known_exceptions import (
    InvalidParameterException,
    NotHermitianException,
    ShapeMismatchException,
)
from spectral_green.models.operators import QOperator


class JumpTerm(BaseModel):
    """One dissipator term rate·𝓛(X); zero rates are allowed and contribute nothing."""
    model_config = ConfigDict(frozen=True)

    operator: QOperator
    rate: float = Field(ge=0.0)
    label: Optional[str] = None


class LindbladModel(BaseModel):
    """
    Split generator data: 𝓜 = −i[P + H0 + ζH1, ·] + Σ rate·𝓛(X).

    `support` optionally restricts every superoperator built from the model to an
    invariant subspace of the column-stacked Liouville space (for example the
    zero-quantum subspace of the ensemble model).
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h0: QOperator
    h1: QOperator
    p: QOperator
    jumps: List[JumpTerm] = Field(default_factory=list)
    rho_th: QOperator
    support: Optional[np.ndarray] = None
    name: str = 'model'

    @field_validator('support', mode='before')
    @classmethod
    def _coerce_support(cls, value):
        if value is None:
            return None
        support = np.array(value, dtype=np.int64, copy=True)
        if support.ndim != 1 or len(np.unique(support)) != len(support):
            raise InvalidParameterException("Support must be a list of distinct indices")
        support.setflags(write=False)
        return support

    @model_validator(mode='after')
    def _check_model(self):
        dim = self.rho_th.dim
        for label, op in (('h0', self.h0), ('h1', self.h1), ('p', self.p)):
            if op.dim != dim:
                raise ShapeMismatchException(f"{label} has dimension {op.dim}, expected {dim}")
            if not op.hermitian:
                raise NotHermitianException(f"{label} must be flagged Hermitian")
        for jump in self.jumps:
            if jump.operator.dim != dim:
                raise ShapeMismatchException(f"Jump operator {jump.label} has dimension {jump.operator.dim}, expected {dim}")
        if self.rho_th.density_trace != 1.0:
            raise InvalidParameterException("rho_th must be declared density-like with trace 1")
        if self.support is not None and (self.support.min() < 0 or self.support.max() >= dim * dim):
            raise InvalidParameterException("Support indices fall outside the Liouville space")
        return self

    @property
    def hilbert_dim(self) -> int:
        return self.rho_th.dim

    @property
    def liouville_dim(self) -> int:
        return self.hilbert_dim ** 2 if self.support is None else len(self.support)

    def with_driving(self, p: QOperator) -> 'LindbladModel':
        return self.model_copy(update={'p': p})

    def without_driving(self) -> 'LindbladModel':
        return self.with_driving(QOperator(entries=np.zeros_like(self.p.entries), hermitian=True))
