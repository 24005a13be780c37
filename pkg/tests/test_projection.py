"""
Tests for the graded projection of the steady-state problem and the
adiabatic elimination of the fast block.

Run with: pytest tests/test_projection.py -v
"""

import numpy as np
import pytest

from spectral_green.analytic import rho0_analytic, rho_plus_analytic
from spectral_green.dicke.builders import active_coherence_grading, build_ensemble_model
from spectral_green.dicke.reduced import adiabatic_grading, adiabatic_reduced_problem
from spectral_green.green import Grading, SpectralProblem, adiabatic_generator, projected_steady_state, steady_state
from spectral_green.green.projection import validate_grading
from spectral_green.models.exceptions.known_exceptions import GradingValidationException, ShapeMismatchException


@pytest.mark.parametrize("n_passive", [1, 2, 3])
def test_projected_steady_state_matches_direct(fig1a_params, n_passive):
    """ρ⁽⁰⁾ + ρ⁽¹⁾ from the graded solve equals the full steady state to 1e-10."""
    params = fig1a_params.updated(n_passive=n_passive)
    model = build_ensemble_model(params)
    problem = SpectralProblem.from_model(model)
    grading = active_coherence_grading(model)
    for factor in (0.0, 0.8, -2.0):
        zeta = factor * params.big_gamma
        projected = projected_steady_state(problem, zeta, grading)
        direct = steady_state(problem, zeta).vector
        assert np.max(np.abs(projected.total - direct)) <= 1e-10
        assert not np.any(projected.rho0[grading.one_block])
        assert np.max(np.abs(projected.rho1[grading.zero_block]), initial=0.0) <= 1e-12


def test_invalid_grading_is_rejected(small_params):
    """Putting every coordinate in Λ⁽⁰⁾ violates 𝓟Λ⁽⁰⁾ ⊂ Λ⁽¹⁾."""
    problem = SpectralProblem.from_model(build_ensemble_model(small_params))
    with pytest.raises(GradingValidationException) as excinfo:
        validate_grading(problem, Grading(labels=np.zeros(problem.dim, dtype=int)), 0.0)
    assert "P L0 in L1" in str(excinfo.value)

    with pytest.raises(ShapeMismatchException):
        Grading(labels=np.array([0, 2, 1]))


def test_adiabatic_generator_annihilates_slow_part(small_params):
    """The Schur complement on Λ⁽⁰⁾ has the zero-order part of the exact steady state in its kernel."""
    model = build_ensemble_model(small_params)
    problem = SpectralProblem.from_model(model)
    grading = active_coherence_grading(model)
    zeta = 0.3 * small_params.big_gamma
    eliminated = adiabatic_generator(problem, zeta, grading)
    slow = steady_state(problem, zeta).vector[eliminated.zero_block]
    residual = np.linalg.norm(eliminated.generator @ slow)
    assert residual <= 1e-9 * np.linalg.norm(eliminated.generator, 2) * np.linalg.norm(slow)


def test_adiabaticity_report_reads_both_ratios(fig1a_params):
    """The report carries both readings of the condition and flags the weak-driving regime."""
    weak = adiabatic_reduced_problem(fig1a_params.updated(n_passive=2))
    report = adiabatic_generator(weak, 0.0, adiabatic_grading(fig1a_params.updated(n_passive=2))).report
    assert report.min_fast_eigenvalue == pytest.approx(fig1a_params.big_gamma, rel=1e-12)
    assert report.eigenvalue_over_driving * report.driving_over_eigenvalue == pytest.approx(1.0)
    assert report.adiabatic_regime

    strong_params = fig1a_params.updated(n_passive=2, omega=1e7)
    strong = adiabatic_reduced_problem(strong_params)
    assert not adiabatic_generator(strong, 0.0, adiabatic_grading(strong_params)).report.adiabatic_regime


def test_adiabatic_problem_steady_state_is_closed_form(fig1a_params):
    """The adiabatic problem's steady state is the closed-form γ → ∞ state with its coherences."""
    params = fig1a_params.updated(n_passive=6)
    problem = adiabatic_reduced_problem(params)
    zeta = 0.4 * params.big_gamma
    vector = steady_state(problem, zeta).vector
    grading = adiabatic_grading(params)
    populations = vector[grading.zero_block]
    coherences = vector[grading.zero_block[1:] + 1]

    assert np.max(np.abs(populations - rho0_analytic(params, zeta).u)) <= 1e-10
    assert np.max(np.abs(coherences - rho_plus_analytic(params, zeta))) <= 1e-10
    validate_grading(problem, grading, zeta)
