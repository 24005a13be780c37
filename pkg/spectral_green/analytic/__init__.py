from spectral_green.analytic.closed_form import (
    discrete_moments,
    moments_continuous,
    poles_analytic,
    recurrence_state,
    rho0_analytic,
    rho_plus_analytic,
)
from spectral_green.analytic.sweeps import concentration_sweep, gamma_recurrence, spectral_sweep
