from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from spectral_green.models.methods import GreenKind, SteadyMethod
from spectral_green.models.operators import QOperator


class PoleOrigin(str, Enum):
    PENCIL = "pencil"
    INHERITED = "inherited"
    ANALYTIC = "analytic"


class PoleSet(BaseModel):
    """
    Finite spectral poles, conjugate-paired, with optional residue data.

    Poles sharing a `pair_index` are complex conjugates. When residues are
    present, `constant` holds the pole-free part 𝓖⁽⁰⁾ of the rational form.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    poles: np.ndarray
    kind: GreenKind
    pair_index: np.ndarray
    origins: List[PoleOrigin]
    residues: Optional[List[np.ndarray]] = None
    constant: Optional[np.ndarray] = None

    @field_validator('poles', mode='before')
    @classmethod
    def _complex_poles(cls, value):
        array = np.array(value, dtype=complex, copy=True)
        array.setflags(write=False)
        return array

    @field_validator('pair_index', mode='before')
    @classmethod
    def _int_pairs(cls, value):
        array = np.array(value, dtype=np.int64, copy=True)
        array.setflags(write=False)
        return array

    @property
    def count(self) -> int:
        return len(self.poles)

    @property
    def pair_count(self) -> int:
        return len(np.unique(self.pair_index))

    @property
    def has_residues(self) -> bool:
        return self.residues is not None and self.constant is not None

    def upper(self) -> np.ndarray:
        """Poles in the upper half plane, one per conjugate pair"""
        return self.poles[self.poles.imag > 0]


class SteadyStateResult(BaseModel):
    """Steady state from one of the Green function routes."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vector: np.ndarray
    method: SteadyMethod
    zeta: float
    rho: Optional[QOperator] = None
    spectral_radius: Optional[float] = None
    convergent: Optional[bool] = None
    warnings: List[str] = []

    @property
    def trace(self) -> complex:
        if self.rho is not None:
            return self.rho.trace()
        raise AttributeError("trace is only available for operator-space problems")


class SplitReport(BaseModel):
    """Checks that the generator split preserves trace and Hermiticity and leaves the thermal state invariant."""
    dissipator_residual: float
    h0_commutator: float
    h1_commutator: float
    p_commutator: float
    trace_residual: float
    hermiticity_residual: float
    trace_ok: bool
    hermiticity_ok: bool
    dissipator_ok: bool
    h0_ok: bool
    h1_ok: bool
    driving_ok: bool

    @property
    def passed(self) -> bool:
        return (self.trace_ok and self.hermiticity_ok and self.dissipator_ok
                and self.h0_ok and self.h1_ok and self.driving_ok)


class CommutationReport(BaseModel):
    """
    Residuals of (1+𝓧)(1−𝓧₀) = 1 and [𝓧, 𝓧₀] = 0, each divided by (1+‖𝓧‖)(1+‖𝓧₀‖).
    """
    inverse_residual: float
    commutator_residual: float

    def within(self, tol: float) -> bool:
        return self.inverse_residual <= tol and self.commutator_residual <= tol


class ProjectedSteadyState(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho0: np.ndarray
    rho1: np.ndarray
    zeta: float

    @property
    def total(self) -> np.ndarray:
        return self.rho0 + self.rho1


class AdiabaticityReport(BaseModel):
    """Both readings of the adiabatic elimination condition are reported."""
    min_fast_eigenvalue: float
    driving_norm: float
    eigenvalue_over_driving: float
    driving_over_eigenvalue: float
    adiabatic_regime: bool


class AdiabaticGenerator(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    generator: np.ndarray
    zero_block: np.ndarray
    report: AdiabaticityReport


class ExtraPoleScan(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    zeta: np.ndarray
    abs_determinant: np.ndarray
