"""
Tests for the ensemble model: collective operators, model builders, the
4N+2 reduced generator, the population chain and the flip-flop coupling.

Run with: pytest tests/test_dicke.py -v
"""

import time

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from spectral_green.analytic import rho0_analytic, rho_plus_analytic
from spectral_green.dicke import (
    build_ensemble_model,
    collective_operators,
    effective_coupling,
    ensemble_observables,
    ensemble_operators,
    lambda_table,
    observables,
    reduced_generator,
    reduced_steady_state,
    rho1_from_rho0,
    solve_rho0z,
)
from spectral_green.dicke.builders import symmetric_isometry
from spectral_green.dicke.reduced import population_rate_matrix
from spectral_green.green import SpectralProblem, steady_state
from spectral_green.models.dicke_state import DickeReducedState
from spectral_green.models.exceptions.known_exceptions import UnsupportedRepresentationException
from spectral_green.models.methods import Representation
from spectral_green.models.params import EffectiveCouplingParams, ModelParams, ThermalDiagnostics


def test_collective_operators_for_two_spins():
    """I_z = diag(−1, 0, 1), [I₊, I₋] = 2I_z and I₊ carries √λ_n."""
    ops = collective_operators(2)
    assert np.allclose(np.diag(ops.iz.entries), [-1.0, 0.0, 1.0])
    commutator = ops.i_plus.entries @ ops.i_minus.entries - ops.i_minus.entries @ ops.i_plus.entries
    assert np.allclose(commutator, 2 * ops.iz.entries)
    assert np.allclose(np.diag(ops.i_plus.entries, k=-1), np.sqrt([2.0, 2.0]))


@given(n=st.integers(min_value=1, max_value=60))
def test_lambda_table_matches_spin_algebra(n):
    """λ_n = (I − n + 1)(I + n) vanishes at n = −I and is symmetric about the centre."""
    lam = lambda_table(n)
    spin = n / 2
    values = np.arange(n + 1) - spin
    assert lam[0] == 0.0
    assert np.allclose(lam, (spin - values + 1) * (spin + values))
    assert np.allclose(lam[1:], lam[1:][::-1])


def test_representation_rules(fig1a_params):
    """Dicke needs equal couplings; the full representation stops at N = 6."""
    unequal = fig1a_params.updated(n_passive=2, couplings=[1.0, 0.5])
    with pytest.raises(UnsupportedRepresentationException):
        ensemble_operators(unequal, Representation.DICKE)
    with pytest.raises(UnsupportedRepresentationException):
        ensemble_operators(fig1a_params.updated(n_passive=7), Representation.FULL)
    assert ensemble_operators(unequal, Representation.FULL).dim == 8


def test_symmetric_isometry_carries_dicke_operators(small_params):
    """U†·I₊·U in the full representation equals the collective I₊ of the dicke representation."""
    full = ensemble_operators(small_params, Representation.FULL)
    dicke = ensemble_operators(small_params, Representation.DICKE)
    u = symmetric_isometry(small_params.n_passive)
    assert np.allclose((u.T @ u).toarray(), np.eye(u.shape[1]))
    assert np.allclose((u.T @ full.v_plus @ u).toarray(), dicke.v_plus.toarray())
    assert np.allclose((u.T @ full.iz @ u).toarray(), dicke.iz.toarray())


def test_model_params_validation():
    """N ≥ 1, positive rates and a couplings list of length N are enforced."""
    base = dict(N=2, omega=1.0, gamma1=1.0, gamma2=1.0, Gamma1=1.0, Gamma2=1.0)
    assert ModelParams.model_validate(dict(base, N=1e3)).n_passive == 1000
    for bad in (dict(base, N=0), dict(base, gamma1=0.0), dict(base, couplings=[1.0]),
                dict(base, couplings=[1.0, -1.0]), dict(base, extra=1.0), dict(base, N=2.5)):
        with pytest.raises(ValidationError):
            ModelParams.model_validate(bad)


def test_reduced_generator_size_and_thermal_invariance(fig1a_params):
    """The reduced generator acts on 4N+2 coordinates and annihilates ρ_th without driving."""
    params = fig1a_params.updated(n_passive=4)
    generator = reduced_generator(params)
    assert generator.size == 4 * 4 + 2
    undriven = reduced_generator(params.updated(omega=0.0))
    image = undriven.apply(0.0, undriven.thermal_vector())
    assert np.max(np.abs(image)) <= 1e-12 * params.big_gamma1
    assert np.max(np.abs(generator.trace_vector().conj() @ generator.matrix(0.3 * params.big_gamma))) \
        <= 1e-9 * params.big_gamma1


@pytest.mark.parametrize("n_passive", [1, 5, 20])
def test_reduced_generator_matches_green_steady_state(fig1a_params, n_passive):
    """Observables of the reduced kernel agree with the Green steady state of the dicke model."""
    params = fig1a_params.updated(n_passive=n_passive)
    ops = ensemble_operators(params, Representation.DICKE)
    problem = SpectralProblem.from_model(build_ensemble_model(params, ops=ops))
    generator = reduced_generator(params)
    for zeta in np.linspace(-3, 3, 11) * params.big_gamma:
        reduced = observables(reduced_steady_state(params, zeta, generator))
        green = ensemble_observables(steady_state(problem, zeta).rho, ops)
        assert np.allclose(reduced.as_tuple(), green, rtol=1e-8, atol=1e-8 * n_passive ** 2)


def test_reduced_state_is_hermitian(fig1a_params):
    """The coherence coordinates of the reduced kernel come in conjugate pairs."""
    params = fig1a_params.updated(n_passive=5)
    generator = reduced_generator(params)
    state = reduced_steady_state(params, 0.5 * params.big_gamma, generator)
    coefficients = generator.vector_from_state(state)
    image = generator.apply(0.5 * params.big_gamma, coefficients)
    assert np.max(np.abs(image)) <= 1e-9 * params.big_gamma1
    assert abs(np.sum(state.u) - 1.0) <= 1e-12


@pytest.mark.parametrize("n_passive", [1, 10, 100, 1000])
def test_population_chain_invariants(fig1a_params, n_passive):
    """Σu = 1, u ≥ 0 and Σv = −⟨I_z⟩/γ hold for the population chain."""
    params = fig1a_params.updated(n_passive=n_passive)
    state = solve_rho0z(params)
    obs = observables(state)
    assert abs(np.sum(state.u) - 1.0) <= 1e-12
    assert np.min(state.u) >= -1e-12
    assert abs(np.sum(state.v) + obs.iz / params.gamma_ratio) <= 1e-9
    assert obs.sz == pytest.approx(-0.5 - obs.iz / params.gamma_ratio, abs=1e-9)


def test_population_chain_is_symmetric_in_detuning(fig1a_params):
    """Observables at ±ζ coincide."""
    params = fig1a_params.updated(n_passive=50)
    plus = observables(solve_rho0z(params.updated(zeta=0.7 * params.big_gamma)))
    minus = observables(solve_rho0z(params.updated(zeta=-0.7 * params.big_gamma)))
    assert np.allclose(plus.as_tuple(), minus.as_tuple(), rtol=1e-12, atol=0)


def test_population_rates_conserve_probability(small_params):
    """Columns of the rate matrix sum to zero."""
    rates = population_rate_matrix(small_params).toarray()
    assert np.max(np.abs(rates.sum(axis=0))) <= 1e-12 * small_params.big_gamma1


def test_population_bands_match_jump_operator_rates(fig1a_params):
    """The banded chain carries |⟨f|X|i⟩|² rates of S₋, V± and P± with columns summing to zero."""
    params = fig1a_params.updated(n_passive=4, zeta=0.3 * fig1a_params.big_gamma, couplings=[0.7] * 4)
    ops = ensemble_operators(params, Representation.DICKE)
    kappa = params.exchange_rate
    expected = np.zeros((ops.dim, ops.dim))
    for jump, rate in ((ops.s_minus, params.big_gamma1), (ops.v_plus, params.gamma1 / 2),
                       (ops.v_minus, params.gamma1 / 2), (ops.v_minus @ ops.s_plus, kappa),
                       (ops.v_plus @ ops.s_minus, kappa)):
        transfer = rate * np.abs(jump.toarray()) ** 2
        expected += transfer - np.diag(transfer.sum(axis=0))
    rates = population_rate_matrix(params).toarray()
    assert np.allclose(rates, expected, rtol=1e-12, atol=1e-12 * params.big_gamma1)

    with pytest.raises(UnsupportedRepresentationException):
        population_rate_matrix(params.updated(couplings=[1.0, 0.5, 1.0, 1.0]))


def test_population_chain_for_a_million_spins(fig1a_params):
    """N = 10⁶: the chain and its observables take under 2 s."""
    params = fig1a_params.updated(n_passive=1_000_000)
    start = time.perf_counter()
    obs = observables(solve_rho0z(params))
    elapsed = time.perf_counter() - start
    assert elapsed < 2.0
    assert -1.0 <= obs.iz_norm <= 0.0
    assert obs.sz == pytest.approx(-0.5 - obs.iz / params.gamma_ratio, abs=1e-9)


@pytest.mark.parametrize("n_passive", [1, 10, 100])
def test_population_chain_approaches_closed_form(analytic_params, n_passive):
    """With γ = 10⁶ the chain matches the closed-form populations to 1e-6 and v vanishes."""
    params = analytic_params.updated(n_passive=n_passive)
    state = solve_rho0z(params)
    assert np.max(np.abs(state.u - rho0_analytic(params).u)) <= 1e-6
    assert np.max(np.abs(state.v)) <= 1e-6


def test_observables_of_simple_states():
    """Fully polarized, uniform and two-spin states give the textbook moments."""
    n = 4
    inverted = DickeReducedState(u=np.eye(n + 1)[0], v=np.zeros(n + 1))
    assert observables(inverted).iz == pytest.approx(-n / 2)
    assert observables(inverted).iz_norm == pytest.approx(-1.0)

    uniform = DickeReducedState(u=np.full(n + 1, 1 / (n + 1)), v=np.zeros(n + 1))
    assert observables(uniform).iz == pytest.approx(0.0, abs=1e-15)
    assert observables(uniform).sz == pytest.approx(-0.5)

    pair = DickeReducedState(u=np.full(3, 1 / 3), v=np.zeros(3))
    assert observables(pair).iz2 == pytest.approx(2 / 3)


def test_rho1_without_driving_vanishes(fig1a_params):
    """Ω = 0 leaves no single-quantum coherence."""
    params = fig1a_params.updated(n_passive=3, omega=0.0)
    state = solve_rho0z(params)
    assert not np.any(rho1_from_rho0(params, state).w)


def test_rho1_matches_closed_form_coherences(analytic_params):
    """From the closed-form populations the bare-Γ coherences are w = iΩ√λ u/(Γ − iζ)."""
    params = analytic_params.updated(n_passive=10, zeta=0.3 * analytic_params.big_gamma)
    state = rho0_analytic(params)
    w = rho1_from_rho0(params, state).w
    assert np.allclose(w, rho_plus_analytic(params), rtol=1e-12, atol=1e-15)


def test_exact_rho1_reproduces_reduced_kernel(fig1a_params):
    """Solving the Λ⁽¹⁾ block from the exact populations returns the exact coherences."""
    params = fig1a_params.updated(n_passive=6, zeta=0.2 * fig1a_params.big_gamma)
    generator = reduced_generator(params)
    exact = reduced_steady_state(params, generator=generator)
    rebuilt = rho1_from_rho0(params, exact.model_copy(update={'w': None}), exact=True, generator=generator)
    assert np.allclose(rebuilt.w, exact.w, rtol=1e-9, atol=1e-14)


def test_effective_coupling_examples():
    """ω₁ = 4, A = 1, ω_I = 1 gives Ω = 1; Δ = ω_I gives ζ = 0; ω₁ = 0 gives Ω = 0."""
    coupling = effective_coupling(EffectiveCouplingParams(omega1=4.0, avg_coupling=1.0, omega_i=1.0, delta=1.0))
    assert coupling.omega == pytest.approx(1.0)
    assert coupling.zeta == 0.0
    assert effective_coupling(EffectiveCouplingParams(omega1=0.0, avg_coupling=1.0, omega_i=1.0,
                                                      delta=2.0)).omega == 0.0
    with pytest.raises(ValidationError):
        EffectiveCouplingParams(omega1=4.0, avg_coupling=1.0, omega_i=0.0, delta=1.0)

    thermal = effective_coupling(EffectiveCouplingParams(
        omega1=4.0, avg_coupling=1.0, omega_i=2.0, delta=2.0,
        beta_thermal=ThermalDiagnostics(beta=1.0, omega_s=4.0)))
    assert thermal.p_s == pytest.approx(np.tanh(2.0))
    assert thermal.p_i == pytest.approx(np.tanh(1.0))
