"""
Zero-quantum reductions of the mean-field ensemble.

reduced_generator    exact restriction of the dicke-representation generator to the
                     4N+2 coordinates (u, v, w, w̃) of ρ = ρ₀(1/2 − S_z) + 2ρ_zS_z + ρ₊S₋ + ρ₋S₊
solve_rho0z          the population chain behind the (u, v) equations, O(N)
rho1_from_rho0       ρ⁽¹⁾ = 𝓧₀ρ⁽⁰⁾
adiabatic_reduced_problem
                     γ₁ ≪ Γ, γ → ∞ model on (u, w, w̃) whose pencil carries the closed-form poles
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from pydantic import BaseModel

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.dicke.banded import from_banded, solve_pinned, solve_pinned_banded
from spectral_green.dicke.builders import build_ensemble_model, ensemble_operators
from spectral_green.dicke.collective import lambda_table, occupation_numbers
from spectral_green.green.problem import SpectralProblem
from spectral_green.green.projection import Grading
from spectral_green.liouops.generator import sparse_generator_blocks
from spectral_green.models.dicke_state import DickeReducedState
from spectral_green.models.exceptions.known_exceptions import (
    InvalidParameterException,
    UnsupportedRepresentationException,
)
from spectral_green.models.methods import Representation
from spectral_green.models.params import EffectiveCouplingParams, ModelParams


class EnsembleObservables(BaseModel):
    n_passive: int
    iz: float
    iz2: float
    sz: float

    @property
    def iz_norm(self) -> float:
        """2⟨I_z⟩/N"""
        return 2 * self.iz / self.n_passive

    @property
    def iz2_norm(self) -> float:
        """4⟨I_z²⟩/N²"""
        return 4 * self.iz2 / self.n_passive ** 2

    def as_tuple(self):
        return self.iz, self.iz2, self.sz


class EffectiveCoupling(BaseModel):
    omega: float
    zeta: float
    p_s: Optional[float] = None
    p_i: Optional[float] = None


@dataclass(frozen=True)
class ReducedLayout:
    """Coordinate positions, ordered per occupation index k as u, v, w, w̃ (no w at k = 0)."""
    n_passive: int

    @property
    def size(self) -> int:
        return 4 * self.n_passive + 2

    @property
    def u(self) -> np.ndarray:
        return np.concatenate([[0], 2 + 4 * np.arange(self.n_passive)])

    @property
    def v(self) -> np.ndarray:
        return self.u + 1

    @property
    def w(self) -> np.ndarray:
        return 4 + 4 * np.arange(self.n_passive)

    @property
    def w_tilde(self) -> np.ndarray:
        return self.w + 1


@dataclass(frozen=True)
class ReducedGenerator:
    """Sparse 𝓕₀, 𝓟, 𝓗₁ on the 4N+2 reduced coordinates."""
    layout: ReducedLayout
    f0: sp.csr_matrix
    p: sp.csr_matrix
    h1: sp.csr_matrix

    @property
    def size(self) -> int:
        return self.layout.size

    def matrix(self, zeta: float) -> sp.csr_matrix:
        return (self.f0 - self.p - zeta * self.h1).tocsr()

    def trace_vector(self) -> np.ndarray:
        t = np.zeros(self.size, dtype=complex)
        t[self.layout.u] = 1.0
        return t

    def thermal_vector(self) -> np.ndarray:
        x = np.zeros(self.size, dtype=complex)
        x[self.layout.u] = 1.0 / (self.layout.n_passive + 1)
        return x

    def apply(self, zeta: float, coefficients: np.ndarray) -> np.ndarray:
        return self.matrix(zeta) @ coefficients

    def to_problem(self) -> SpectralProblem:
        return SpectralProblem(f0=self.f0.toarray(), p=self.p.toarray(), h1=self.h1.toarray(),
                               trace=self.trace_vector(), thermal=self.thermal_vector(),
                               name=f"reduced[N={self.layout.n_passive}]")

    def grading(self) -> Grading:
        labels = np.zeros(self.size, dtype=np.int64)
        labels[self.layout.w] = 1
        labels[self.layout.w_tilde] = 1
        return Grading(labels=labels)

    def state_from_vector(self, coefficients: np.ndarray) -> DickeReducedState:
        return DickeReducedState(
            u=np.real(coefficients[self.layout.u]),
            v=np.real(coefficients[self.layout.v]),
            w=coefficients[self.layout.w],
        )

    def vector_from_state(self, state: DickeReducedState) -> np.ndarray:
        coefficients = np.zeros(self.size, dtype=complex)
        coefficients[self.layout.u] = state.u
        coefficients[self.layout.v] = state.v
        if state.w is not None:
            coefficients[self.layout.w] = state.w
            coefficients[self.layout.w_tilde] = np.conj(state.w)
        return coefficients


def _warn_if_outside_reduced_regime(params: ModelParams) -> None:
    if not params.reduced_path_valid():
        logger.warning(
            f"gamma1/Gamma = {params.gamma1 / params.big_gamma:.3g} is not small; "
            f"the reduced ensemble equations assume gamma1 << Gamma")


def _coordinate_map(params: ModelParams, support: np.ndarray):
    """Sparse T with x_support = T·c and its left inverse c = T⁺·x_support"""
    layout = ReducedLayout(params.n_passive)
    dim = 2 * (params.n_passive + 1)
    k = np.arange(params.n_passive + 1)
    kw = np.arange(1, params.n_passive + 1)
    a_index = (2 * k + 1) * (1 + dim)
    b_index = 2 * k * (1 + dim)
    w_index = (2 * kw + 1) + 2 * (kw - 1) * dim
    w_tilde_index = 2 * (kw - 1) + (2 * kw + 1) * dim
    position = lambda index: np.searchsorted(support, index)

    rows = np.concatenate([position(a_index), position(a_index), position(b_index),
                           position(w_index), position(w_tilde_index)])
    cols = np.concatenate([layout.u, layout.v, layout.v, layout.w, layout.w_tilde])
    values = np.concatenate([np.ones(len(k)), -np.ones(len(k)), np.ones(len(k)),
                             np.ones(len(kw)), np.ones(len(kw))])
    forward = sp.csr_matrix((values, (rows, cols)), shape=(len(support), layout.size))

    rows = np.concatenate([layout.u, layout.u, layout.v, layout.w, layout.w_tilde])
    cols = np.concatenate([position(a_index), position(b_index), position(b_index),
                           position(w_index), position(w_tilde_index)])
    values = np.ones(len(rows))
    inverse = sp.csr_matrix((values, (rows, cols)), shape=(layout.size, len(support)))
    return forward, inverse


def reduced_generator(params: ModelParams) -> ReducedGenerator:
    """
    Generator on the 4N+2 zero-quantum coordinates.

    Entries are obtained by applying the assembled dicke-representation
    superoperators to the coordinate basis, not from transcribed recurrences.
    """
    if params.n_passive < 1:
        raise InvalidParameterException("N must be at least 1")
    _warn_if_outside_reduced_regime(params)
    model = build_ensemble_model(params, Representation.DICKE, zero_quantum=True)
    blocks = sparse_generator_blocks(model)
    forward, inverse = _coordinate_map(params, model.support)
    reduce = lambda block: (inverse @ block @ forward).tocsr()
    return ReducedGenerator(layout=ReducedLayout(params.n_passive), f0=reduce(blocks.f0),
                            p=reduce(blocks.p), h1=reduce(blocks.h1))


def reduced_steady_state(params: ModelParams, zeta: Optional[float] = None,
                         generator: Optional[ReducedGenerator] = None) -> DickeReducedState:
    """Banded kernel solve of the reduced generator, normalized to Σu = 1"""
    zeta = params.zeta if zeta is None else zeta
    generator = reduced_generator(params) if generator is None else generator
    coefficients = solve_pinned(generator.matrix(zeta), int(generator.layout.u[0]))
    coefficients = coefficients / np.sum(coefficients[generator.layout.u])
    return generator.state_from_vector(coefficients)


# lower/upper bandwidth of the population chain; index 2k + s with s = 0 for ↑
_CHAIN_BANDS = 3


def population_bands(params: ModelParams) -> np.ndarray:
    """
    Rate matrix on the 2(N+1) populations (k, s) in LAPACK band storage,
    ab[3 + i − j, j] = R[i, j], for the Lindblad terms Γ₁𝓛(S₋),
    γ₁/2 𝓛(V±) and κ𝓛(P±), P₊ = V₋S₊, P₋ = V₊S₋.
    """
    if not params.uniform_couplings:
        raise UnsupportedRepresentationException("The population chain requires equal couplings a_k")
    n = params.n_passive
    size = 2 * (n + 1)
    coupling = float(params.coupling_vector()[0])
    lam = coupling ** 2 * lambda_table(n)[1:]
    centre = _CHAIN_BANDS
    ab = np.zeros((2 * _CHAIN_BANDS + 1, size))

    def transfer(offset: int, columns: slice, rates) -> None:
        ab[centre + offset, columns] += rates
        ab[centre, columns] -= rates

    transfer(1, slice(0, size, 2), params.big_gamma1)           # (k, ↑) → (k, ↓)
    for s in (0, 1):
        transfer(2, slice(s, 2 * n, 2), params.gamma1 / 2 * lam)        # k − 1 → k
        transfer(-2, slice(2 + s, size, 2), params.gamma1 / 2 * lam)    # k → k − 1
    transfer(-3, slice(3, size, 2), params.exchange_rate * lam)        # (k, ↓) → (k − 1, ↑)
    transfer(3, slice(0, 2 * n, 2), params.exchange_rate * lam)        # (k − 1, ↑) → (k, ↓)
    return ab


def population_rate_matrix(params: ModelParams) -> sp.csr_matrix:
    """The population chain as a sparse matrix"""
    return from_banded(_CHAIN_BANDS, _CHAIN_BANDS, population_bands(params))


def solve_rho0z(params: ModelParams) -> DickeReducedState:
    """
    u and v of the zero-order projection; O(N) banded solve with Σu = 1.

    The pin sits on (n = −I, ↓), the most populated state for a polarizing drive.
    """
    _warn_if_outside_reduced_regime(params)
    populations = solve_pinned_banded(_CHAIN_BANDS, _CHAIN_BANDS, population_bands(params), 1, in_place=True)
    populations /= populations.sum()
    down, up = populations[1::2], populations[0::2]
    state = DickeReducedState(u=down + up, v=up)
    if state.u.min() < -numeric_policy.psd_tol:
        logger.warning(f"Negative population {state.u.min():.3e} in the reduced steady state")
    return state


def rho1_from_rho0(params: ModelParams, state: DickeReducedState, exact: bool = False,
                   generator: Optional[ReducedGenerator] = None) -> DickeReducedState:
    """
    Fill w = ⟨n,↓|ρ|n−1,↑⟩ from ρ⁽¹⁾ = 𝓧₀ρ⁽⁰⁾.

    By default the single-quantum coherences relax at the bare rate Γ, the regime
    of the reduced (u, v) equations; `exact` solves the Λ⁽¹⁾ block of the
    reduced generator instead.
    """
    zeta = params.zeta
    if exact:
        generator = reduced_generator(params) if generator is None else generator
        layout = generator.layout
        rho0 = generator.vector_from_state(DickeReducedState(u=state.u, v=state.v))
        fast = np.concatenate([layout.w, layout.w_tilde])
        a11 = (generator.f0 - zeta * generator.h1).tocsr()[fast][:, fast]
        driven = (generator.p @ rho0)[fast]
        rho1 = spla.spsolve(a11.tocsc(), driven)
        return state.with_w(np.asarray(rho1)[:params.n_passive])

    ops = ensemble_operators(params, Representation.DICKE)
    p = (params.omega * (ops.v_plus @ ops.s_minus + ops.v_minus @ ops.s_plus)).tocsr()
    k = np.arange(1, params.n_passive + 1)
    a = state.u - state.v
    b = state.v
    rows, cols = 2 * k + 1, 2 * (k - 1)
    coupling = np.asarray(p[rows, cols]).ravel()
    # (𝓟ρ⁽⁰⁾)_ij = i·P_ij(ρ_jj − ρ_ii) for diagonal ρ⁽⁰⁾
    driven = 1j * coupling * (b[k - 1] - a[k])
    return state.with_w(-driven / (params.big_gamma - 1j * zeta))


def observables(state: DickeReducedState, params: Optional[ModelParams] = None) -> EnsembleObservables:
    """⟨I_z⟩ = Σ n·u_n, ⟨I_z²⟩ = Σ n²·u_n, ⟨S_z⟩ = Σv − 1/2"""
    n = occupation_numbers(state.n_passive)
    return EnsembleObservables(
        n_passive=state.n_passive,
        iz=float(np.dot(n, state.u)),
        iz2=float(np.dot(n * n, state.u)),
        sz=float(np.sum(state.v) - 0.5),
    )


def effective_coupling(p: EffectiveCouplingParams) -> EffectiveCoupling:
    """Ω = ω₁A/(4ω_I), ζ = Δ − ω_I, and optionally p_S, p_I = tanh(βω/2)"""
    coupling = EffectiveCoupling(omega=p.omega1 * p.avg_coupling / (4 * p.omega_i), zeta=p.delta - p.omega_i)
    if p.beta_thermal is not None:
        coupling.p_s = float(np.tanh(p.beta_thermal.beta * p.beta_thermal.omega_s / 2))
        coupling.p_i = float(np.tanh(p.beta_thermal.beta * p.omega_i / 2))
    return coupling


def adiabatic_reduced_problem(params: ModelParams) -> SpectralProblem:
    """
    Spectral problem on (a, w, w̃) with the active excited population returned to
    the ground state instantly (γ → ∞) and Λ⁽¹⁾ relaxing at the bare rate Γ.

    Coordinates are ordered per occupation index: a_0, then a_k, w_k, w̃_k for k ≥ 1.
    """
    n = params.n_passive
    size = 3 * n + 1
    coupling = params.coupling_vector()
    if not params.uniform_couplings:
        raise InvalidParameterException("The adiabatic reduced problem needs equal couplings")
    a_pos = np.concatenate([[0], 1 + 3 * np.arange(n)])
    k = np.arange(1, n + 1)
    w_pos = a_pos[k] + 1
    wt_pos = a_pos[k] + 2
    lam = lambda_table(n)[k]
    passive = params.gamma1 / 2 * coupling[0] ** 2 * lam
    exchange = params.omega * coupling[0] * np.sqrt(lam)
    gamma = params.big_gamma

    f0 = np.zeros((size, size), dtype=complex)
    # passive ladder on populations: k−1 → k (I₊) and k → k−1 (I₋), both at γ₁/2·λ_k
    f0[a_pos[k], a_pos[k - 1]] += passive
    f0[a_pos[k - 1], a_pos[k - 1]] -= passive
    f0[a_pos[k - 1], a_pos[k]] += passive
    f0[a_pos[k], a_pos[k]] -= passive
    f0[w_pos, w_pos] = -gamma
    f0[wt_pos, wt_pos] = -gamma

    h1 = np.zeros((size, size), dtype=complex)
    h1[w_pos, w_pos] = -1j
    h1[wt_pos, wt_pos] = 1j

    p = np.zeros((size, size), dtype=complex)
    p[w_pos, a_pos[k]] = -1j * exchange
    p[wt_pos, a_pos[k]] = 1j * exchange
    p[a_pos[k - 1], w_pos] = 1j * exchange
    p[a_pos[k], w_pos] = -1j * exchange
    p[a_pos[k], wt_pos] = 1j * exchange
    p[a_pos[k - 1], wt_pos] = -1j * exchange

    trace = np.zeros(size, dtype=complex)
    trace[a_pos] = 1.0
    thermal = np.zeros(size, dtype=complex)
    thermal[a_pos] = 1.0 / (n + 1)
    return SpectralProblem(f0=f0, p=p, h1=h1, trace=trace, thermal=thermal,
                           name=f"adiabatic[N={n}]", scale=gamma)


def adiabatic_grading(params: ModelParams) -> Grading:
    labels = np.ones(3 * params.n_passive + 1, dtype=np.int64)
    labels[0] = 0
    labels[1::3] = 0
    return Grading(labels=labels)
