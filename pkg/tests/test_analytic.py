"""
Tests for the closed-form γ → ∞ results, the continuum moments, the
η₀ → ∞ recurrence and the parameter sweeps.

Run with: pytest tests/test_analytic.py -v
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spectral_green.analytic import (
    concentration_sweep,
    discrete_moments,
    gamma_recurrence,
    moments_continuous,
    poles_analytic,
    recurrence_state,
    rho0_analytic,
    spectral_sweep,
)
from spectral_green.analytic.closed_form import polarization_profile
from spectral_green.cli.presets import FIG1A_PARAMS, FIG1C_GAMMA2_REF, FIG1C_PARAMS, FIG1D_PARAMS
from spectral_green.dicke.reduced import observables
from spectral_green.models.exceptions.known_exceptions import (
    DegenerateParameterException,
    InvalidGridException,
    InvalidParameterException,
    UnsupportedRepresentationException,
)
from spectral_green.models.methods import SweepMethod


def test_rho0_is_normalized_and_geometric(fig1a_params):
    """Σu = 1 and consecutive populations fall by 1/η̄."""
    params = fig1a_params.updated(n_passive=50)
    u = rho0_analytic(params).u
    assert np.sum(u) == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(u[1:] / u[:-1], 1 / params.eta_bar(), rtol=1e-12)


def test_rho0_thermal_limit(fig1a_params):
    """η = 0 needs the explicit thermal-limit flag; small η is close to uniform."""
    undriven = fig1a_params.updated(n_passive=10, omega=0.0)
    with pytest.raises(DegenerateParameterException):
        rho0_analytic(undriven)
    assert np.allclose(rho0_analytic(undriven, thermal_limit=True).u, 1 / 11)
    weak = fig1a_params.updated(n_passive=10, omega=1e-3)
    assert np.allclose(rho0_analytic(weak).u, 1 / 11, rtol=1e-9)


def test_rho0_large_ensemble_is_finite(fig1a_params):
    """N = 10⁶ evaluates without overflow."""
    u = rho0_analytic(fig1a_params.updated(n_passive=1_000_000)).u
    assert np.all(np.isfinite(u))
    assert np.sum(u) == pytest.approx(1.0, abs=1e-9)


def test_closed_forms_need_mean_field_couplings(fig1a_params):
    """Couplings other than a_k = 1 are rejected."""
    params = fig1a_params.updated(n_passive=2, couplings=[1.0, 0.5])
    with pytest.raises(UnsupportedRepresentationException):
        rho0_analytic(params)
    with pytest.raises(UnsupportedRepresentationException):
        poles_analytic(params)


def test_fig1a_polarization_at_resonance(fig1a_params):
    """The resonance-sweep preset gives 2⟨I_z⟩/N ≈ −0.994 at ζ = 0."""
    iz, _ = moments_continuous(fig1a_params, 0.0)
    assert 2 * iz / fig1a_params.n_passive == pytest.approx(-0.994, abs=1e-3)
    iz_discrete, _ = discrete_moments(rho0_analytic(fig1a_params).u)
    assert 2 * iz_discrete / fig1a_params.n_passive == pytest.approx(-0.994, abs=2e-3)


def test_polarization_profile_limits():
    """λ → 0 gives (0, 1/3); λ → ∞ gives (−1, 1); the series branch joins the closed form."""
    first, second = polarization_profile(1e-8)
    assert first == pytest.approx(0.0, abs=1e-8)
    assert second == pytest.approx(1 / 3)
    first, second = polarization_profile(1e3)
    assert first == pytest.approx(-1.0, abs=2e-3)
    assert second == pytest.approx(1.0, abs=3e-3)
    lam = 1.01e-4
    assert np.allclose(polarization_profile(lam), (-lam / 3 + lam ** 3 / 45, 1 / 3 + 2 * lam ** 2 / 45),
                       rtol=0, atol=1e-6)


@given(eta0=st.floats(min_value=1e-3, max_value=10.0), zeta_factor=st.floats(min_value=-3.0, max_value=3.0))
def test_endpoint_corrected_moments_equal_discrete_sums(eta0, zeta_factor):
    """With the endpoint correction the continuum moments equal the discrete sums."""
    params = FIG1A_PARAMS.updated(n_passive=200)
    # Ω chosen to reach the requested η₀
    params = params.updated(omega=math.sqrt(eta0 * params.gamma1 * params.big_gamma / 4))
    zeta = zeta_factor * params.big_gamma
    corrected = moments_continuous(params, zeta, endpoint_correction=True)
    discrete = discrete_moments(rho0_analytic(params, zeta).u)
    assert np.allclose(corrected, discrete, rtol=1e-8, atol=1e-8)


def test_continuum_moments_track_discrete_sums(fig1a_params):
    """N = 200, η₀ = 0.4, ζ = Γ/2: the plain continuum moments are within 2e-2 of the sums."""
    params = fig1a_params.updated(n_passive=200)
    zeta = 0.5 * params.big_gamma
    continuum = np.array(moments_continuous(params, zeta))
    discrete = np.array(discrete_moments(rho0_analytic(params, zeta).u))
    assert np.all(np.abs(continuum - discrete) <= 2e-2 * np.abs(discrete))


def test_single_spin_poles(fig1a_params):
    """N = 1, η₀ = 0.4: upper poles iΓ and iΓ√1.2."""
    params = fig1a_params.updated(n_passive=1)
    assert params.eta0 == pytest.approx(0.4)
    poles = poles_analytic(params)
    gamma = params.big_gamma
    upper = np.sort_complex(poles.upper())
    assert poles.count == 4
    assert np.allclose(upper, [1j * gamma, 1j * gamma * math.sqrt(1.2)], rtol=1e-12, atol=1e-6 * gamma)


def test_pole_count_and_conjugation(fig1a_params):
    """2(N+1) poles in exact conjugate pairs."""
    params = fig1a_params.updated(n_passive=50)
    poles = poles_analytic(params)
    assert poles.count == 2 * 51
    assert poles.pair_count == 51
    assert np.array_equal(poles.poles[0::2], np.conj(poles.poles[1::2]))


def test_poles_solve_the_dispersion_relation(fig1a_params):
    """Every ζ_m with m ≥ 1 satisfies (1 + η(ζ_m))^{N+1} = 1."""
    params = fig1a_params.updated(n_passive=50)
    poles = poles_analytic(params)
    zeta_m = poles.poles[2:]
    eta = params.eta0 / (1 + (zeta_m / params.big_gamma) ** 2)
    assert np.max(np.abs((1 + eta) ** (params.n_passive + 1) - 1)) <= 1e-8


def test_largest_pole_scale(fig1a_params):
    """For N = 1000 the largest |ζ_m| is about Γ√(η₀(N+1)/2π)."""
    poles = poles_analytic(fig1a_params)
    estimate = fig1a_params.big_gamma * math.sqrt(fig1a_params.eta0 * 1001 / (2 * math.pi))
    assert np.max(np.abs(poles.poles)) == pytest.approx(estimate, rel=0.02)
    assert estimate == pytest.approx(7.98e5, rel=0.01)


def test_recurrence_regimes():
    """N = 10⁴: γ = 100 gives ⟨I_z⟩ ≈ −γ/2; γ = 10⁶ polarizes to ≈ −N/2."""
    n = 10_000
    low = observables(recurrence_state(n, 100.0))
    assert low.iz == pytest.approx(-50.0, rel=0.05)
    assert abs(low.sz) <= 0.05

    high = observables(recurrence_state(n, 1e6))
    assert high.iz == pytest.approx(-n / 2, rel=0.05)
    assert high.sz == pytest.approx((n / 1e6 - 1) / 2, rel=0.05)


@given(gamma=st.floats(min_value=1e-2, max_value=1e8))
def test_recurrence_satisfies_polarization_relation(gamma):
    """⟨S_z⟩ + ⟨I_z⟩/γ + 1/2 = 0 and Σu = 1 for every γ."""
    state = recurrence_state(500, gamma)
    obs = observables(state)
    assert np.sum(state.u) == pytest.approx(1.0, abs=1e-12)
    assert abs(obs.sz + obs.iz / gamma + 0.5) <= 1e-9


def test_recurrence_rejects_bad_input():
    """N < 2 and γ ≤ 0 are rejected."""
    with pytest.raises(InvalidParameterException):
        recurrence_state(1, 10.0)
    with pytest.raises(InvalidParameterException):
        recurrence_state(10, 0.0)


def test_analytic_sweep_is_symmetric(fig1a_params):
    """The analytic sweep is even in ζ and dips at resonance."""
    grid = np.linspace(-3e6, 3e6, 61)
    result = spectral_sweep(fig1a_params, grid)
    iz = result.column('iz_norm')
    assert np.allclose(iz, iz[::-1], rtol=1e-12, atol=1e-15)
    assert int(np.argmin(iz)) == 30
    assert result.grid_name == 'zeta_rad_s'
    assert np.allclose(result.column('sz'), -0.5 - iz * fig1a_params.n_passive / 2 / fig1a_params.gamma_ratio)


def test_undriven_sweep_is_flat(fig1a_params):
    """Ω = 0 gives zero polarization over the whole grid."""
    result = spectral_sweep(fig1a_params.updated(omega=0.0), np.linspace(-1e6, 1e6, 5), discrete=True)
    assert np.allclose(result.column('iz_norm'), 0.0, atol=1e-12)


def test_sweep_methods_agree_for_small_ensembles(fig1a_params):
    """Analytic, reduced and full sweeps agree for N = 3 at the resonance-sweep rates."""
    params = fig1a_params.updated(n_passive=3)
    grid = np.linspace(-3, 3, 7) * params.big_gamma
    analytic = spectral_sweep(params, grid, SweepMethod.ANALYTIC, discrete=True).column('iz_norm')
    reduced = spectral_sweep(params, grid, SweepMethod.REDUCED).column('iz_norm')
    full = spectral_sweep(params, grid, SweepMethod.FULL, workers=1).column('iz_norm')
    assert np.allclose(reduced, full, atol=1e-3)
    assert np.allclose(analytic, reduced, atol=1e-3)


def test_single_spin_response_peaks_at_resonance(fig1a_params):
    """N = 1 has purely imaginary poles, so the largest deviation sits at ζ = 0."""
    grid = np.linspace(-2, 2, 41) * fig1a_params.big_gamma
    result = spectral_sweep(fig1a_params.updated(n_passive=1), grid, SweepMethod.REDUCED)
    assert abs(result.grid[int(np.argmin(result.column('iz_norm')))]) <= grid[1] - grid[0]


def test_sweeps_reject_empty_grids(fig1a_params):
    """Empty or non-finite grids raise InvalidGridException."""
    with pytest.raises(InvalidGridException):
        spectral_sweep(fig1a_params, [])
    with pytest.raises(InvalidGridException):
        spectral_sweep(fig1a_params, [0.0, float('nan')])
    with pytest.raises(InvalidGridException):
        concentration_sweep(FIG1C_PARAMS, [], FIG1C_GAMMA2_REF)


def test_concentration_sweep_has_interior_optimum():
    """ξ⟨I_z⟩ vanishes at both ends and peaks inside; neither the optimum nor the peak height falls with N."""
    xi = np.logspace(-2, 3, 101)
    optima, heights = [], []
    for n in (1_000, 10_000, 100_000):
        result = concentration_sweep(FIG1C_PARAMS.updated(n_passive=n), xi, FIG1C_GAMMA2_REF)
        magnitude = np.abs(result.column('xi_iz'))
        peak = int(np.argmax(magnitude))
        assert 0 < peak < len(xi) - 1
        assert magnitude[0] < magnitude[peak] and magnitude[-1] < magnitude[peak]
        assert not result.notes
        optima.append(result.metadata['argmax_xi'])
        heights.append(result.metadata['max_abs_xi_iz'])
    assert optima == sorted(optima)
    assert heights == sorted(heights)
    assert heights[-1] > 100 * heights[0]


def test_gamma_recurrence_columns():
    """The γ sweep reports ⟨S_z⟩ and the normalized polarization in grid order."""
    params = FIG1D_PARAMS.updated(n_passive=10_000)
    result = gamma_recurrence(params, [1e2, 1e4, 1e6])
    assert result.grid_name == 'gamma'
    assert set(result.columns) == {'sz', 'iz_norm', 'iz'}
    assert np.all(np.diff(result.column('iz')) < 0)
    with pytest.raises(InvalidParameterException):
        gamma_recurrence(params.updated(n_passive=1), [1.0])
