"""
Tests for pole extraction, conjugate pairing and the rational expansion
of the driven Green function.

Run with: pytest tests/test_poles.py -v
"""

import numpy as np
import pytest

from spectral_green.analytic import poles_analytic
from spectral_green.dicke.reduced import adiabatic_reduced_problem, reduced_generator
from spectral_green.green import (
    compute_poles,
    extra_pole_scan,
    green_matrix,
    pair_conjugates,
    rational_eval,
    sort_pairs,
)
from spectral_green.green.solvers import trace_projector
from spectral_green.models.exceptions.known_exceptions import MissingResiduesException, PoleProximityException
from spectral_green.models.methods import GreenKind
from spectral_green.models.results.green_results import PoleOrigin


def _match_error(found: np.ndarray, expected: np.ndarray) -> float:
    """Largest distance from an expected pole to its nearest found pole, relative to |expected|"""
    return max(float(np.min(np.abs(found - value))) / abs(value) for value in expected)


def test_pair_conjugates_is_exact():
    """Noisy conjugate pairs are merged into exact pairs; real-axis values are dropped."""
    values = [1.0 + 2.0j, 1.0 - 2.0000000001j, -3.0 + 0.5j, -3.0 - 0.5j, 4.0 + 0.0j]
    paired = pair_conjugates(values, scale=1.0)
    assert len(paired.poles) == 4
    for index in np.unique(paired.pair_index):
        members = paired.poles[paired.pair_index == index]
        assert members[0] == np.conj(members[1])
        assert members[0].imag > 0
    # sorted by |Re ζ|
    assert abs(paired.poles[0].real) <= abs(paired.poles[2].real)


def test_pair_conjugates_merges_coincident_values():
    """Eigenvalues that coincide within the merge tolerance count once."""
    values = [2.0j, 2.0j * (1 + 1e-14), -2.0j]
    paired = pair_conjugates(values, scale=1.0)
    assert len(paired.poles) == 2


def test_sort_pairs_keeps_pairs_together():
    """Pairs are reordered by |Re ζ| with their members and aligned lists moved as a unit."""
    poles = [3.0 + 1.0j, 3.0 - 1.0j, 1.0 + 2.0j, 1.0 - 2.0j, 2.0j, -2.0j]
    poles, pair_index, origins = sort_pairs(poles, [0, 0, 1, 1, 2, 2], ['a', 'a', 'b', 'b', 'c', 'c'])
    assert poles == [2.0j, -2.0j, 1.0 + 2.0j, 1.0 - 2.0j, 3.0 + 1.0j, 3.0 - 1.0j]
    assert pair_index == [0, 0, 1, 1, 2, 2]
    assert origins == ['c', 'c', 'b', 'b', 'a', 'a']
    assert sort_pairs([1.0j, -1.0j], [4, 4], None)[2] is None


@pytest.mark.parametrize("n_passive", [2, 4])
def test_inherited_poles_are_sorted_in(fig1a_params, n_passive):
    """The inherited ±iΓ pair is placed by |Re ζ| like every other pair, not appended last."""
    params = fig1a_params.updated(n_passive=n_passive)
    found = compute_poles(adiabatic_reduced_problem(params), GreenKind.DRIVEN)
    assert PoleOrigin.INHERITED in found.origins
    upper = found.poles[0::2]
    assert np.all(np.diff(np.abs(upper.real)) >= 0)
    assert found.pair_index.tolist() == [index for index in range(found.pair_count) for _ in (0, 1)]
    assert found.origins[0] == PoleOrigin.INHERITED
    assert found.poles[0] == pytest.approx(1j * params.big_gamma, rel=1e-9)


@pytest.mark.parametrize("n_passive", [1, 2, 4])
def test_adiabatic_pencil_matches_closed_form(fig1a_params, n_passive):
    """The pencil of the adiabatic problem reproduces the closed-form poles, 2(N+1) in total."""
    params = fig1a_params.updated(n_passive=n_passive)
    found = compute_poles(adiabatic_reduced_problem(params), GreenKind.DRIVEN)
    expected = poles_analytic(params)
    assert found.count == 2 * (n_passive + 1)
    assert found.pair_count == n_passive + 1
    assert _match_error(found.poles, expected.poles) <= 1e-6
    assert PoleOrigin.INHERITED in found.origins
    for index in np.unique(found.pair_index):
        members = found.poles[found.pair_index == index]
        assert members[0] == np.conj(members[1])


def test_non_driven_poles_are_bare_relaxation(fig1a_params):
    """The non-driven adiabatic pencil has the single pair ±iΓ."""
    params = fig1a_params.updated(n_passive=3)
    found = compute_poles(adiabatic_reduced_problem(params), GreenKind.NON_DRIVEN)
    assert found.count == 2
    assert np.allclose(np.sort_complex(found.poles), [-1j * params.big_gamma, 1j * params.big_gamma], rtol=1e-9)


@pytest.mark.parametrize("n_passive", [1, 2, 3, 4])
def test_rational_expansion_reproduces_direct_solves(fig1a_params, n_passive):
    """𝓖⁽⁰⁾ + Σ𝓖⁽ʳ⁾/(ζ − ζ_r) matches 𝓖(ζ)Q at held-out real detunings to 1e-7 relative."""
    problem = reduced_generator(fig1a_params.updated(n_passive=n_passive)).to_problem()
    poles = compute_poles(problem, GreenKind.DRIVEN, with_residues=True)
    assert poles.has_residues
    q = trace_projector(problem.trace)
    for zeta in np.linspace(-2.7, 3.1, 10) * problem.scale:
        expected = green_matrix(problem, GreenKind.DRIVEN, zeta)
        rational = rational_eval(poles, zeta).entries @ q
        assert np.linalg.norm(rational - expected, 2) <= 1e-7 * np.linalg.norm(expected, 2)


def test_rational_eval_guards(fig1a_params):
    """Evaluation needs residues and refuses points on top of a pole."""
    problem = adiabatic_reduced_problem(fig1a_params.updated(n_passive=1))
    bare = compute_poles(problem, GreenKind.DRIVEN)
    with pytest.raises(MissingResiduesException):
        rational_eval(bare, 0.0)

    with_residues = compute_poles(problem, GreenKind.DRIVEN, with_residues=True)
    with pytest.raises(PoleProximityException):
        rational_eval(with_residues, complex(with_residues.poles[0]))


def test_extra_pole_scan(fig1a_params):
    """|det(1 − 𝓧₀)| is positive on a real grid away from the poles."""
    problem = adiabatic_reduced_problem(fig1a_params.updated(n_passive=2))
    grid = np.linspace(-3, 3, 7) * problem.scale
    scan = extra_pole_scan(problem, grid)
    assert scan.abs_determinant.shape == grid.shape
    assert np.all(scan.abs_determinant > 0)
