"""
Shared fixtures for the spectral_green test suite.

Hypothesis profiles: `default` for local runs, `ci` with more examples.
Select one with HYPOTHESIS_PROFILE=ci.
"""

import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Add parent directory to path to import modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from spectral_green.cli.presets import ANALYTIC_CHECK_PARAMS, FIG1A_PARAMS
from spectral_green.models.lindblad_model import JumpTerm, LindbladModel
from spectral_green.models.operators import QOperator

settings.register_profile('default', max_examples=20, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv('HYPOTHESIS_PROFILE', 'default'))


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (a + a.conj().T) / 2


def random_lindblad_model(seed: int, dim: int = None, n_jumps: int = 2) -> LindbladModel:
    """Generic model with random Hamiltonian blocks and jump operators, rho_th = 1/dim"""
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(2, 5)) if dim is None else dim
    jumps = []
    for index in range(n_jumps):
        x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        jumps.append(JumpTerm(operator=QOperator(entries=x), rate=float(rng.uniform(0.5, 2.0)), label=f"X{index}"))
    return LindbladModel(
        h0=QOperator(entries=random_hermitian(rng, dim), hermitian=True),
        h1=QOperator(entries=random_hermitian(rng, dim), hermitian=True),
        p=QOperator(entries=random_hermitian(rng, dim, 0.5), hermitian=True),
        jumps=jumps,
        rho_th=QOperator(entries=np.eye(dim) / dim, hermitian=True, density_trace=1.0),
        name=f"random[{seed}]",
    )


@pytest.fixture
def fig1a_params():
    """Resonance-sweep preset rates (η₀ = 0.4); tests shrink N with .updated(n_passive=...)"""
    return FIG1A_PARAMS


@pytest.fixture
def analytic_params():
    """γ = 10⁶ and η₀ ≈ 0.02, where the population chain approaches the closed form"""
    return ANALYTIC_CHECK_PARAMS


@pytest.fixture
def small_params(fig1a_params):
    return fig1a_params.updated(n_passive=2)
