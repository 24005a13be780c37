"""
The inhomogeneous spectral problem (𝓕₀ − 𝓟 − ζ𝓗₁)ρ̄ = 𝓟ρ_th on some coordinate space.

A SpectralProblem is built either from a LindbladModel (Liouville coordinates,
possibly restricted to an invariant support) or directly from coordinate
matrices, as the ensemble reductions do.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from spectral_green.liouops.generator import generator_blocks, thermal_vector
from spectral_green.liouops.vectorization import devec, embed, restrict, vec
from spectral_green.models.exceptions.known_exceptions import ShapeMismatchException
from spectral_green.models.lindblad_model import LindbladModel
from spectral_green.models.methods import GreenKind
from spectral_green.models.operators import QOperator


@dataclass(frozen=True)
class SpectralProblem:
    f0: np.ndarray
    p: np.ndarray
    h1: np.ndarray
    trace: np.ndarray
    thermal: np.ndarray
    hilbert_dim: Optional[int] = None
    support: Optional[np.ndarray] = None
    name: str = 'problem'
    scale: float = field(default=0.0)

    def __post_init__(self):
        dim = self.f0.shape[0]
        for label, matrix in (('f0', self.f0), ('p', self.p), ('h1', self.h1)):
            if matrix.shape != (dim, dim):
                raise ShapeMismatchException(f"{label} has shape {matrix.shape}, expected {(dim, dim)}")
        if self.trace.shape != (dim,) or self.thermal.shape != (dim,):
            raise ShapeMismatchException("trace and thermal vectors must match the problem dimension")
        if self.scale <= 0.0:
            # Γ-scale: the largest relaxation rate on the diagonal of 𝓕₀
            scale = float(np.max(np.abs(np.diag(self.f0)), initial=0.0))
            object.__setattr__(self, 'scale', scale if scale > 0 else 1.0)

    @classmethod
    def from_model(cls, model: LindbladModel) -> 'SpectralProblem':
        blocks = generator_blocks(model)
        return cls(
            f0=blocks.f0,
            p=blocks.p,
            h1=blocks.h1,
            trace=blocks.trace_vector(),
            thermal=thermal_vector(model),
            hilbert_dim=model.hilbert_dim,
            support=model.support,
            name=model.name,
        )

    @property
    def dim(self) -> int:
        return self.f0.shape[0]

    @property
    def is_operator_space(self) -> bool:
        return self.hilbert_dim is not None

    def operator(self, kind: GreenKind, zeta: float) -> np.ndarray:
        """𝓕₀ − [𝓟] − ζ𝓗₁"""
        matrix = self.f0 - zeta * self.h1
        return matrix - self.p if kind == GreenKind.DRIVEN else matrix

    def generator(self, zeta: float) -> np.ndarray:
        return self.operator(GreenKind.DRIVEN, zeta)

    def without_driving(self) -> 'SpectralProblem':
        return replace(self, p=np.zeros_like(self.p))

    def trace_of(self, vector: np.ndarray) -> complex:
        return complex(np.vdot(self.trace, vector))

    def to_vector(self, operand: Union[QOperator, np.ndarray]) -> np.ndarray:
        if isinstance(operand, QOperator):
            if not self.is_operator_space or operand.dim != self.hilbert_dim:
                raise ShapeMismatchException(f"Operand of dimension {operand.dim} does not fit {self.name}")
            return restrict(vec(operand.entries), self.support)
        vector = np.asarray(operand, dtype=complex)
        if vector.shape != (self.dim,):
            raise ShapeMismatchException(f"Operand of shape {vector.shape} does not fit {self.name}")
        return vector

    def to_operator(self, vector: np.ndarray, density_trace: Optional[float] = None) -> QOperator:
        if not self.is_operator_space:
            raise ShapeMismatchException(f"{self.name} is not an operator-space problem")
        full = embed(vector, self.hilbert_dim, self.support)
        return QOperator(entries=devec(full, self.hilbert_dim), density_trace=density_trace)


def as_problem(source: Union[LindbladModel, SpectralProblem]) -> SpectralProblem:
    if isinstance(source, SpectralProblem):
        return source
    return SpectralProblem.from_model(source)
