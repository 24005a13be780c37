import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from spectral_green.config import numeric_policy


class ModelParams(BaseModel):
    """
    Parameters of the driven two-level ensemble, all rates in rad/s.

    Serialized with the JSON keys N, omega, gamma1, gamma2, Gamma1, Gamma2, zeta
    and the optional couplings list.
    """
    model_config = ConfigDict(populate_by_name=True, extra='forbid', frozen=True)

    n_passive: int = Field(alias='N', ge=1)
    omega: float = Field(alias='omega')
    gamma1: float = Field(alias='gamma1', gt=0.0)
    gamma2: float = Field(alias='gamma2', gt=0.0)
    big_gamma1: float = Field(alias='Gamma1', gt=0.0)
    big_gamma2: float = Field(alias='Gamma2', gt=0.0)
    zeta: float = Field(default=0.0, alias='zeta')
    couplings: Optional[List[float]] = Field(default=None, alias='couplings')

    @field_validator('n_passive', mode='before')
    @classmethod
    def _integral_n(cls, value):
        # Accept 1e3 style values coming from JSON or the command line
        if isinstance(value, float):
            if not value.is_integer():
                raise ValueError(f"N must be an integer, got {value}")
            return int(value)
        return value

    @field_validator('couplings')
    @classmethod
    def _nonnegative_couplings(cls, value):
        if value is not None and any(a < 0 for a in value):
            raise ValueError("couplings must be nonnegative")
        return value

    @model_validator(mode='after')
    def _couplings_length(self):
        if self.couplings is not None and len(self.couplings) != self.n_passive:
            raise ValueError(f"couplings has {len(self.couplings)} entries, expected N={self.n_passive}")
        return self

    @property
    def spin_i(self) -> float:
        return self.n_passive / 2

    @property
    def big_gamma(self) -> float:
        """Γ = γ₂ + Γ₂ + Γ₁/2"""
        return self.gamma2 + self.big_gamma2 + self.big_gamma1 / 2

    @property
    def gamma_ratio(self) -> float:
        """γ = Γ₁/γ₁"""
        return self.big_gamma1 / self.gamma1

    @property
    def eta0(self) -> float:
        return 4 * self.omega ** 2 / (self.gamma1 * self.big_gamma)

    def eta(self, zeta: Optional[float] = None) -> float:
        zeta = self.zeta if zeta is None else zeta
        return self.eta0 / (1 + (zeta / self.big_gamma) ** 2)

    def eta_bar(self, zeta: Optional[float] = None) -> float:
        return 1 + self.eta(zeta)

    def lam(self, zeta: Optional[float] = None, endpoint_correction: bool = False) -> float:
        """λ = I·ln η̄; the corrected variant uses the (N+1)/2 cell half-width"""
        half_width = (self.n_passive + 1) / 2 if endpoint_correction else self.spin_i
        return half_width * math.log1p(self.eta(zeta))

    @property
    def exchange_rate(self) -> float:
        """κ = 2Ω²Γ/(Γ² + ζ²), the rate of the eliminated flip-flop exchange"""
        return 2 * self.omega ** 2 * self.big_gamma / (self.big_gamma ** 2 + self.zeta ** 2)

    def coupling_vector(self) -> np.ndarray:
        if self.couplings is None:
            return np.ones(self.n_passive)
        return np.asarray(self.couplings, dtype=float)

    @property
    def uniform_couplings(self) -> bool:
        a = self.coupling_vector()
        return bool(np.all(a == a[0]))

    def reduced_path_valid(self, ratio: Optional[float] = None) -> bool:
        ratio = numeric_policy.reduced_validity_ratio if ratio is None else ratio
        return self.gamma1 / self.big_gamma < ratio

    def updated(self, **changes) -> 'ModelParams':
        """Validated copy with some fields replaced (python field names)"""
        data = self.model_dump()
        data.update(changes)
        return ModelParams.model_validate(data)

    def to_json_dict(self) -> dict:
        return self.model_dump(by_alias=True, exclude_none=True)


class ThermalDiagnostics(BaseModel):
    beta: float
    omega_s: float


class EffectiveCouplingParams(BaseModel):
    """Solid-effect parameters before the flip-flop reduction, in rad/s."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    omega1: float
    avg_coupling: float
    omega_i: float = Field(gt=0.0)
    delta: float
    beta_thermal: Optional[ThermalDiagnostics] = None
