"""
Numeric policy for spectral_green.

Every tolerance used by the solvers lives here so that one record controls
them all. Values can be overridden through environment variables (or a
.env file) prefixed with SPECTRAL_GREEN_.
"""

import os
from dataclasses import dataclass, fields, replace
from dotenv import load_dotenv

load_dotenv()

_ENV_PREFIX = 'SPECTRAL_GREEN_'


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and size limits shared by all numerical routines"""
    hermitian_tol: float = 1e-12
    trace_tol: float = 1e-12
    dissipator_tol: float = 1e-10
    operand_trace_tol: float = 1e-10
    solve_residual_tol: float = 1e-10
    pole_rank_cutoff: float = 1e-10
    pole_imag_tol: float = 1e-8
    pole_match_tol: float = 1e-7
    pole_proximity_tol: float = 1e-8
    pole_shift_factor: float = 0.37
    pole_shift_attempts: int = 3
    spurious_pole_tol: float = 1e-8
    nullspace_gap: float = 1e6
    psd_tol: float = 1e-9
    polynomial_zero_cutoff: float = 1e-10
    dense_liouville_limit: int = 4096
    reduced_validity_ratio: float = 0.01
    full_representation_max_n: int = 6
    pencil_max_n: int = 20
    adiabatic_ratio: float = 0.1
    sweep_workers: int = 4

    @classmethod
    def from_environment(cls) -> 'NumericPolicy':
        """Create the policy from SPECTRAL_GREEN_* environment variables"""
        overrides = {}
        for field in fields(cls):
            raw = os.getenv(f'{_ENV_PREFIX}{field.name.upper()}')
            if raw is None:
                continue
            try:
                overrides[field.name] = int(raw) if field.type in (int, 'int') else float(raw)
            except ValueError:
                raise ValueError(f"Invalid value for {_ENV_PREFIX}{field.name.upper()}: {raw}")
        policy = cls(**overrides)
        policy.validate()
        return policy

    def validate(self) -> bool:
        """Validate the policy"""
        for field in fields(self):
            if getattr(self, field.name) <= 0:
                raise ValueError(f"Numeric policy value {field.name} must be positive")
        if self.pole_shift_attempts < 1:
            raise ValueError("pole_shift_attempts must be at least 1")
        return True

    def with_overrides(self, **overrides) -> 'NumericPolicy':
        """Return a validated copy with some values replaced"""
        policy = replace(self, **overrides)
        policy.validate()
        return policy


numeric_policy = NumericPolicy.from_environment()
