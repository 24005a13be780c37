"""
Parameter sweeps over ζ, ξ and γ, returned as SweepResult columns in grid order.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from spectral_green.analytic.closed_form import discrete_moments, moments_continuous, recurrence_state, rho0_analytic
from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.dicke.builders import build_ensemble_model, ensemble_observables, ensemble_operators
from spectral_green.dicke.reduced import observables, solve_rho0z
from spectral_green.green.problem import SpectralProblem
from spectral_green.green.solvers import steady_state
from spectral_green.models.exceptions.known_exceptions import (
    InvalidGridException,
    InvalidParameterException,
    UnsupportedRepresentationException,
)
from spectral_green.models.methods import Representation, SweepMethod
from spectral_green.models.params import ModelParams
from spectral_green.models.results.sweep_results import SweepResult

# Triple (⟨I_z⟩, ⟨I_z²⟩, ⟨S_z⟩) at one grid point
Moments = Tuple[float, float, float]


def _checked_grid(grid: Sequence[float], name: str) -> np.ndarray:
    values = np.asarray(grid, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise InvalidGridException(f"The {name} grid must be a non-empty vector")
    if not np.all(np.isfinite(values)):
        raise InvalidGridException(f"The {name} grid has non-finite entries")
    return values


def parallel_map(function: Callable[[float], Moments], grid: np.ndarray, workers: Optional[int] = None):
    """Evaluate on every grid point; results come back in grid order"""
    workers = numeric_policy.sweep_workers if workers is None else workers
    if workers <= 1 or len(grid) == 1:
        return [function(float(x)) for x in grid]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, [float(x) for x in grid]))


def _analytic_point(params: ModelParams, discrete: bool, endpoint_correction: bool) -> Callable[[float], Moments]:
    def evaluate(zeta: float) -> Moments:
        if discrete:
            iz, iz2 = discrete_moments(rho0_analytic(params, zeta, thermal_limit=True).u)
        else:
            iz, iz2 = moments_continuous(params, zeta, endpoint_correction=endpoint_correction)
        # the active polarization follows from ⟨S_z⟩ + ⟨I_z⟩/γ + 1/2 = 0
        return iz, iz2, -0.5 - iz / params.gamma_ratio
    return evaluate


def _reduced_point(params: ModelParams) -> Callable[[float], Moments]:
    def evaluate(zeta: float) -> Moments:
        return observables(solve_rho0z(params.updated(zeta=zeta))).as_tuple()
    return evaluate


def _full_point(params: ModelParams) -> Callable[[float], Moments]:
    if not params.uniform_couplings:
        # unequal couplings leave conserved passive quantities, so the kernel is not unique
        raise UnsupportedRepresentationException("The full sweep needs equal couplings")
    ops = ensemble_operators(params, Representation.DICKE)
    problem = SpectralProblem.from_model(build_ensemble_model(params, Representation.DICKE, ops=ops))

    def evaluate(zeta: float) -> Moments:
        return ensemble_observables(steady_state(problem, zeta).rho, ops)
    return evaluate


def spectral_sweep(params: ModelParams, zeta_grid: Sequence[float], method: SweepMethod = SweepMethod.ANALYTIC,
                   discrete: bool = False, endpoint_correction: bool = False,
                   workers: Optional[int] = None) -> SweepResult:
    """
    ⟨I_z⟩, ⟨I_z²⟩ and ⟨S_z⟩ over ζ.

    analytic: continuum moments (or the discrete sums with `discrete`)
    reduced:  the population chain of the γ₁ ≪ Γ equations
    full:     Green function steady state of the zero-quantum dicke representation
    """
    grid = _checked_grid(zeta_grid, 'zeta')
    if method == SweepMethod.ANALYTIC:
        evaluate = _analytic_point(params, discrete, endpoint_correction)
    elif method == SweepMethod.REDUCED:
        evaluate = _reduced_point(params)
    else:
        evaluate = _full_point(params)

    logger.info(f"Spectral sweep ({method.value}) over {len(grid)} points, N={params.n_passive}")
    values = np.array(parallel_map(evaluate, grid, workers), dtype=float).reshape(len(grid), 3)
    n = params.n_passive
    return SweepResult(
        grid_name='zeta_rad_s',
        grid=grid,
        columns={
            'iz_norm': 2 * values[:, 0] / n,
            'iz2_norm': 4 * values[:, 1] / n ** 2,
            'sz': values[:, 2],
        },
        metadata={'n_passive': float(n)},
        notes=[f"method={method.value}"],
    )


def _xi_times_iz(params: ModelParams, xi: np.ndarray, big_gamma2_ref: float) -> np.ndarray:
    iz = np.array([moments_continuous(params.updated(big_gamma2=big_gamma2_ref * x ** 2, zeta=0.0), 0.0)[0]
                   for x in xi])
    return xi * iz


def concentration_sweep(params: ModelParams, xi_grid: Sequence[float], big_gamma2_ref: float,
                        sensitivity_factor: float = 1e-6) -> SweepResult:
    """
    ξ·⟨I_z⟩ with Γ₂ = Γ₂⁰ξ² and ζ = 0.

    The optimum is reported on |ξ⟨I_z⟩|. The result is recomputed with Γ₁
    scaled by `sensitivity_factor` and the largest change, relative to the
    peak, is reported as `gamma1_sensitivity`.
    """
    xi = _checked_grid(xi_grid, 'xi')
    if np.any(xi <= 0):
        raise InvalidGridException("Concentrations must be positive")
    if big_gamma2_ref <= 0:
        raise InvalidParameterException(f"Gamma2 reference must be positive, got {big_gamma2_ref}")
    params = params.updated(zeta=0.0)
    logger.info(f"Concentration sweep over {len(xi)} points, N={params.n_passive}")
    product = _xi_times_iz(params, xi, big_gamma2_ref)
    reference = _xi_times_iz(params.updated(big_gamma1=params.big_gamma1 * sensitivity_factor), xi, big_gamma2_ref)

    magnitude = np.abs(product)
    peak = int(np.argmax(magnitude))
    metadata = {
        'n_passive': float(params.n_passive),
        'argmax_xi': float(xi[peak]),
        'max_abs_xi_iz': float(magnitude[peak]),
        'gamma1_sensitivity': float(np.max(np.abs(product - reference)) / max(magnitude[peak], np.finfo(float).tiny)),
    }
    notes = []
    if peak in (0, len(xi) - 1):
        notes.append("optimum at the grid edge; widen the xi grid")
        logger.warning(f"Concentration optimum for N={params.n_passive} sits at the grid edge xi={xi[peak]:.3g}")
    return SweepResult(grid_name='xi', grid=xi, columns={'xi_iz': product, 'iz_norm': 2 * product / xi / params.n_passive},
                       metadata=metadata, notes=notes)


def gamma_recurrence(params: ModelParams, gamma_grid: Sequence[float], eta0_infinite: bool = True) -> SweepResult:
    """
    ⟨I_z⟩ and ⟨S_z⟩ against γ = Γ₁/γ₁.

    With `eta0_infinite` the η₀ → ∞ recurrence is solved in O(N) per point.
    Otherwise each point solves the population chain with Γ₁ = γγ₁, which
    also moves Γ and η₀.
    """
    gamma = _checked_grid(gamma_grid, 'gamma')
    if np.any(gamma <= 0):
        raise InvalidGridException("gamma values must be positive")
    n = params.n_passive
    if n < 2:
        raise InvalidParameterException(f"The gamma sweep needs N >= 2, got {n}")

    def evaluate(value: float) -> Moments:
        if eta0_infinite:
            state = recurrence_state(n, value)
        else:
            state = solve_rho0z(params.updated(big_gamma1=value * params.gamma1))
        return observables(state).as_tuple()

    logger.info(f"Gamma sweep over {len(gamma)} points, N={n}, eta0_infinite={eta0_infinite}")
    values = np.array(parallel_map(evaluate, gamma), dtype=float).reshape(len(gamma), 3)
    return SweepResult(
        grid_name='gamma',
        grid=gamma,
        columns={'sz': values[:, 2], 'iz_norm': 2 * values[:, 0] / n, 'iz': values[:, 0]},
        metadata={'n_passive': float(n)},
        notes=["eta0 -> infinity recurrence" if eta0_infinite else "population chain"],
    )
