"""
Closed-form results of the mean-field ensemble in the γ → ∞ limit and the
η₀ → ∞ recurrence.

Populations are evaluated in log space: η̄^{±I} overflows long before N = 10⁶.
"""

import math
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from spectral_green.dicke.collective import lambda_table, occupation_numbers
from spectral_green.models.dicke_state import DickeReducedState
from spectral_green.models.exceptions.known_exceptions import (
    DegenerateParameterException,
    InvalidParameterException,
    UnsupportedRepresentationException,
)
from spectral_green.models.methods import GreenKind
from spectral_green.models.params import ModelParams
from spectral_green.models.results.green_results import PoleOrigin, PoleSet

SMALL_LAMBDA = 1e-4
LARGE_LAMBDA = 30.0


def _require_mean_field(params: ModelParams) -> None:
    if not np.all(params.coupling_vector() == 1.0):
        raise UnsupportedRepresentationException("Closed forms are stated for the mean-field couplings a_k = 1")


def _log_populations(params: ModelParams, zeta: Optional[float]) -> np.ndarray:
    """log u_k with u_k ∝ η̄^{N−k}, normalized with a shared shift"""
    log_eta_bar = math.log1p(params.eta(zeta))
    exponents = (params.n_passive - np.arange(params.n_passive + 1)) * log_eta_bar
    return exponents - logsumexp(exponents)


def rho0_analytic(params: ModelParams, zeta: Optional[float] = None, thermal_limit: bool = False) -> DickeReducedState:
    """
    u_n = ηη̄^I η̄^{−n}/(η̄^{N+1} − 1) and v = 0.

    η = 0 is rejected unless `thermal_limit` is set, in which case the uniform
    populations 1/(N+1) are returned.
    """
    _require_mean_field(params)
    size = params.n_passive + 1
    if params.eta(zeta) == 0.0:
        if not thermal_limit:
            raise DegenerateParameterException("rho0_analytic needs eta > 0; pass thermal_limit=True for Omega = 0")
        return DickeReducedState(u=np.full(size, 1.0 / size), v=np.zeros(size))
    return DickeReducedState(u=np.exp(_log_populations(params, zeta)), v=np.zeros(size))


def rho_plus_analytic(params: ModelParams, zeta: Optional[float] = None) -> np.ndarray:
    """w_n = iΩ/(Γ − iζ)·√λ_n·u_n for n = −I+1..I"""
    zeta = params.zeta if zeta is None else zeta
    state = rho0_analytic(params, zeta)
    k = np.arange(1, params.n_passive + 1)
    prefactor = 1j * params.omega / (params.big_gamma - 1j * zeta)
    return prefactor * np.sqrt(lambda_table(params.n_passive)[k]) * state.u[k]


def poles_analytic(params: ModelParams) -> PoleSet:
    """
    ζ₀ = ±iΓ and ζ_m = ±iΓ√(1 + η₀/2 − i(η₀/2)cot(πm/(N+1))), m = 1..N.

    The upper-half-plane member of each pair is iΓs_m with the principal root;
    its partner is the exact complex conjugate.
    """
    _require_mean_field(params)
    n = params.n_passive
    gamma, eta0 = params.big_gamma, params.eta0
    m = np.arange(1, n + 1)
    cot = 1.0 / np.tan(np.pi * m / (n + 1))
    upper = np.concatenate([[1j * gamma], 1j * gamma * np.sqrt(1 + eta0 / 2 - 1j * (eta0 / 2) * cot)])
    poles = np.column_stack([upper, np.conj(upper)]).ravel()
    pair_index = np.repeat(np.arange(n + 1), 2)
    return PoleSet(poles=poles, kind=GreenKind.DRIVEN, pair_index=pair_index,
                   origins=[PoleOrigin.ANALYTIC] * len(poles))


def polarization_profile(lam: float) -> Tuple[float, float]:
    """(λ⁻¹ − coth λ, 1 + 2λ⁻² − 2λ⁻¹coth λ) with series and saturated branches"""
    if abs(lam) < SMALL_LAMBDA:
        return -lam / 3 + lam ** 3 / 45, 1 / 3 + 2 * lam ** 2 / 45
    coth = 1.0 if lam > LARGE_LAMBDA else 1.0 / math.tanh(lam)
    return 1 / lam - coth, 1 + 2 / lam ** 2 - 2 * coth / lam


def _cell_moments(mu: float) -> Tuple[float, float]:
    """First and second moment of the density ∝ e^{−μy} on one occupation cell [−1/2, 1/2]"""
    if abs(mu) < SMALL_LAMBDA:
        return -mu / 12, 1 / 12 + mu ** 2 / 360
    coth = 1.0 / math.tanh(mu / 2)
    return 1 / mu - coth / 2, 0.25 + 2 / mu ** 2 - coth / mu


def moments_continuous(params: ModelParams, zeta: Optional[float] = None,
                       endpoint_correction: bool = False) -> Tuple[float, float]:
    """
    (⟨I_z⟩, ⟨I_z²⟩) of the continuum limit of the γ → ∞ populations.

    The default integrates the density η̄^{−n} over [−I, I]. With
    `endpoint_correction` it integrates over the N+1 occupation cells,
    [−(N+1)/2, (N+1)/2], and removes the within-cell offset and spread, which
    are the same in every cell; the result then equals the discrete sums.
    """
    _require_mean_field(params)
    first, second = polarization_profile(params.lam(zeta, endpoint_correction=endpoint_correction))
    if not endpoint_correction:
        return params.spin_i * first, params.spin_i ** 2 * second
    half_width = (params.n_passive + 1) / 2
    offset, spread = _cell_moments(math.log1p(params.eta(zeta)))
    iz = half_width * first - offset
    return iz, half_width ** 2 * second - 2 * offset * iz - spread


def discrete_moments(u: np.ndarray) -> Tuple[float, float]:
    """(Σ n·u_n, Σ n²·u_n)"""
    u = np.asarray(u, dtype=float)
    n = occupation_numbers(len(u) - 1)
    return float(np.dot(n, u)), float(np.dot(n * n, u))


def recurrence_state(n_passive: int, gamma: float) -> DickeReducedState:
    """
    Populations of the η₀ → ∞ limit, where the flip-flop exchange equalizes
    (k,↓) and (k−1,↑): v_k/v_{k−1} = s_k/(s_k + 2γ) with s_k = λ_k + λ_{k+1},
    u_0 = (2 + 2γ/N)v_0 and u_k = v_k + v_{k−1}.
    """
    if n_passive < 2:
        raise InvalidParameterException(f"The recurrence needs N >= 2, got {n_passive}")
    if gamma <= 0:
        raise InvalidParameterException(f"gamma must be positive, got {gamma}")
    lam = np.append(lambda_table(n_passive), 0.0)
    k = np.arange(1, n_passive + 1)
    s = lam[k] + lam[k + 1]
    log_v = np.concatenate([[0.0], np.cumsum(np.log(s) - np.log(s + 2 * gamma))])
    log_u = np.concatenate([[math.log(2 + 2 * gamma / n_passive) + log_v[0]],
                            np.logaddexp(log_v[1:], log_v[:-1])])
    shift = logsumexp(log_u)
    return DickeReducedState(u=np.exp(log_u - shift), v=np.exp(log_v - shift))
