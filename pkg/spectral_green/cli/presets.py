"""
Built-in parameter sets of the four figure panels, all rates in rad/s.

Panel (c) leaves Γ₁ open; it defaults to 10 rad/s, negligible against
γ₂ = 10³ rad/s, and the sweep reports how much the curve moves when Γ₁ → 0.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from spectral_green.models.params import ModelParams
from spectral_green.models.run_config import GridScale, GridSpec

FIGURE_IDS = ('1a', '1b', '1c', '1d')

# N = 10³, η₀ = 0.4, Γ = 10⁵
FIG1A_PARAMS = ModelParams(N=1000, omega=100.0, gamma1=1.0, gamma2=1000.0, Gamma1=10000.0, Gamma2=94000.0, zeta=0.0)

FIG1C_PARAMS = ModelParams(N=1000, omega=10.0, gamma1=1e-2, gamma2=1000.0, Gamma1=10.0, Gamma2=1e6, zeta=0.0)
FIG1C_GAMMA2_REF = 1e6

FIG1D_PARAMS = FIG1A_PARAMS.updated(n_passive=1000000)

# γ → ∞ regime with η₀ ≈ 0.02, used by the analytic verification suite
ANALYTIC_CHECK_PARAMS = ModelParams(N=100, omega=100.0, gamma1=1.0, gamma2=1000.0, Gamma1=1e6, Gamma2=1.5e6, zeta=0.0)


@dataclass(frozen=True)
class FigurePreset:
    params: ModelParams
    method: str
    grid: Optional[GridSpec] = None
    n_values: Tuple[int, ...] = ()
    extras: Dict[str, float] = field(default_factory=dict)


FIGURE_PRESETS: Dict[str, FigurePreset] = {
    '1a': FigurePreset(params=FIG1A_PARAMS, grid=GridSpec(start=-3e6, stop=3e6, count=601), method='analytic'),
    '1b': FigurePreset(params=FIG1A_PARAMS, method='analytic'),
    '1c': FigurePreset(params=FIG1C_PARAMS, grid=GridSpec(start=1e-2, stop=1e3, count=101, scale=GridScale.LOG),
                       method='analytic', n_values=(1000, 10000, 100000),
                       extras={'Gamma2_ref': FIG1C_GAMMA2_REF}),
    '1d': FigurePreset(params=FIG1D_PARAMS, grid=GridSpec(start=1e4, stop=1e8, count=81, scale=GridScale.LOG),
                       method='recurrence'),
}
