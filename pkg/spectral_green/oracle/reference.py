"""
Brute-force references for the fast paths.

Everything here assembles its own dense matrices with numpy Kronecker products
and shares no factorization with the green or dicke solvers.
"""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.dicke.builders import (
    build_ensemble_model,
    ensemble_observables,
    ensemble_operators,
    symmetric_isometry,
)
from spectral_green.green.poles import pair_conjugates, sort_pairs
from spectral_green.green.problem import SpectralProblem
from spectral_green.green.solvers import steady_state
from spectral_green.liouops.vectorization import devec, embed, restrict, trace_vector, vec
from spectral_green.models.exceptions.known_exceptions import (
    InvalidDensityOperatorException,
    InvalidParameterException,
    NonUniqueSteadyStateException,
    PoleShiftFailedException,
    PropagationStepException,
    SizeGuardException,
)
from spectral_green.models.lindblad_model import LindbladModel
from spectral_green.models.methods import GreenKind, Representation
from spectral_green.models.operators import QOperator, SuperOperator
from spectral_green.models.params import ModelParams
from spectral_green.models.results.green_results import PoleOrigin, PoleSet
from spectral_green.models.results.oracle_results import OracleReport

# relative positions of the three shifts used by the dense pencil oracle
PENCIL_SHIFTS = (0.29, -0.53, 0.83)


def _commutator(h: np.ndarray) -> np.ndarray:
    """[H, ·] in column stacking"""
    eye = np.eye(h.shape[0])
    return np.kron(eye, h) - np.kron(h.T, eye)


def _dissipator(x: np.ndarray, rate: float) -> np.ndarray:
    eye = np.eye(x.shape[0])
    xdx = x.conj().T @ x
    return rate * (np.kron(x.conj(), x) - 0.5 * np.kron(eye, xdx) - 0.5 * np.kron(xdx.T, eye))


def dense_blocks(model: LindbladModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(𝓕₀, 𝓟, 𝓗₁) restricted to the model support"""
    # assembled on the whole Liouville space before restriction
    if model.hilbert_dim ** 2 > numeric_policy.dense_liouville_limit:
        raise SizeGuardException(f"{model.name} is too large for the dense oracle")
    f0 = -1j * _commutator(model.h0.entries)
    for jump in model.jumps:
        f0 = f0 + _dissipator(jump.operator.entries, jump.rate)
    p = 1j * _commutator(model.p.entries)
    h1 = 1j * _commutator(model.h1.entries)
    if model.support is not None:
        index = np.ix_(model.support, model.support)
        f0, p, h1 = f0[index], p[index], h1[index]
    return f0, p, h1


def dense_generator(model: LindbladModel, zeta: float) -> SuperOperator:
    f0, p, h1 = dense_blocks(model)
    return SuperOperator(entries=f0 - p - zeta * h1, hilbert_dim=model.hilbert_dim, support=model.support)


def nullspace_solution(matrix: np.ndarray, trace: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Kernel vector of `matrix` by SVD, normalized to t†x = 1, and the gap
    σ_{n−1}/σ_n between the two smallest singular values.
    """
    _, sigma, vh = la.svd(matrix)
    smallest = max(float(sigma[-1]), np.finfo(float).tiny)
    gap = float(sigma[-2]) / smallest if len(sigma) > 1 else np.inf
    if gap < numeric_policy.nullspace_gap:
        raise NonUniqueSteadyStateException(gap)
    kernel = vh[-1].conj()
    return kernel / np.vdot(trace, kernel), gap


def _density_from_vector(vector: np.ndarray, hilbert_dim: int, support: Optional[np.ndarray]) -> QOperator:
    rho = devec(embed(vector, hilbert_dim, support), hilbert_dim)
    if float(np.max(np.abs(rho - rho.conj().T), initial=0.0)) > numeric_policy.psd_tol:
        raise InvalidDensityOperatorException("Reference steady state is not Hermitian")
    rho = (rho + rho.conj().T) / 2
    lowest = float(np.min(la.eigvalsh(rho)))
    if lowest < -numeric_policy.psd_tol:
        raise InvalidDensityOperatorException(f"Reference steady state has eigenvalue {lowest:.3e}")
    return QOperator(entries=rho, hermitian=True, density_trace=1.0)


def nullspace_with_gap(generator: SuperOperator) -> Tuple[QOperator, float]:
    if generator.hilbert_dim is None:
        raise InvalidParameterException("The null-space oracle needs an operator-space generator")
    trace = trace_vector(generator.hilbert_dim, generator.support)
    vector, gap = nullspace_solution(generator.entries, trace)
    return _density_from_vector(vector, generator.hilbert_dim, generator.support), gap


def nullspace_steady_state(generator: SuperOperator) -> QOperator:
    """Trace-one kernel of the generator; raises if the kernel is not one-dimensional"""
    return nullspace_with_gap(generator)[0]


def propagate(generator: SuperOperator, rho0: QOperator, t_final: float, steps: int = 10) -> QOperator:
    """
    e^{𝓜t}ρ₀ by one scaling-and-squaring exponential per step, with trace and
    positivity checked at every checkpoint.
    """
    if t_final < 0:
        raise InvalidParameterException(f"t_final must be nonnegative, got {t_final}")
    if t_final == 0:
        return rho0
    if steps < 1:
        raise InvalidParameterException(f"steps must be positive, got {steps}")
    dt = t_final / steps
    if dt <= np.finfo(float).tiny:
        raise InvalidParameterException(f"Step {dt} underflows")
    dim, support = generator.hilbert_dim, generator.support
    step = la.expm(generator.entries * dt)
    state = restrict(vec(rho0.entries), support)
    initial_trace = np.trace(rho0.entries)
    for checkpoint in range(1, steps + 1):
        state = step @ state
        rho = devec(embed(state, dim, support), dim)
        drift = abs(np.trace(rho) - initial_trace)
        if drift > 1e-10:
            raise PropagationStepException(f"Trace drifted by {drift:.3e} at checkpoint {checkpoint}")
        lowest = float(np.min(la.eigvalsh((rho + rho.conj().T) / 2)))
        if lowest < -numeric_policy.psd_tol:
            raise PropagationStepException(f"Eigenvalue {lowest:.3e} at checkpoint {checkpoint}")
    return QOperator(entries=(rho + rho.conj().T) / 2, hermitian=True)


def _pencil_blocks(source: Union[LindbladModel, SpectralProblem]):
    if isinstance(source, LindbladModel):
        f0, p, h1 = dense_blocks(source)
        return f0, p, h1, trace_vector(source.hilbert_dim, source.support), source.name
    return source.f0, source.p, source.h1, source.trace, source.name


def _pencil_eigenvalues(a: np.ndarray, h1: np.ndarray, trace: np.ndarray, shift: float) -> np.ndarray:
    """Finite ζ with (A − ζ𝓗₁)g = 0, t†g = 0 from the bordered inverse at one shift"""
    dim = a.shape[0]
    bordered = np.zeros((dim + 1, dim + 1), dtype=complex)
    bordered[:dim, :dim] = a - shift * h1
    bordered[:dim, dim] = trace
    bordered[dim, :dim] = trace.conj()
    inverse = la.inv(bordered)[:dim, :dim]
    theta = la.eigvals(inverse @ h1)
    norm = max(float(np.max(np.abs(theta), initial=0.0)), np.finfo(float).tiny)
    theta = theta[np.abs(theta) > numeric_policy.pole_rank_cutoff * norm]
    return shift + 1 / theta


def _reproduced(candidates: List[np.ndarray], scale: float) -> np.ndarray:
    """Poles of the first shift also found by at least one other shift"""
    tol = numeric_policy.spurious_pole_tol
    kept = []
    for value in candidates[0]:
        hits = sum(np.min(np.abs(other - value), initial=np.inf) <= tol * max(abs(value), scale)
                   for other in candidates[1:])
        if hits >= 1:
            kept.append(value)
    return np.array(kept, dtype=complex)


def _dense_pencil(a: np.ndarray, h1: np.ndarray, trace: np.ndarray, scale: float, name: str) -> np.ndarray:
    candidates = []
    for factor in PENCIL_SHIFTS:
        try:
            candidates.append(_pencil_eigenvalues(a, h1, trace, factor * scale))
        except la.LinAlgError:
            logger.warning(f"Dense pencil shift {factor * scale:.6g} is singular for {name}")
    if len(candidates) < 2:
        raise PoleShiftFailedException(f"Fewer than two admissible shifts for {name}")
    return _reproduced(candidates, scale)


def pencil_poles_dense(source: Union[LindbladModel, SpectralProblem], kind: GreenKind = GreenKind.DRIVEN) -> PoleSet:
    """
    Poles of the driven (or non-driven) pencil from three shifts, keeping those
    reproduced by at least two. Non-driven poles missing from the driven pencil
    are merged in as inherited, sorted by |Re ζ| with the rest.
    """
    f0, p, h1, trace, name = _pencil_blocks(source)
    scale = max(float(np.max(np.abs(np.diag(f0)), initial=0.0)), 1.0)
    base = f0 - p if kind == GreenKind.DRIVEN else f0
    paired = pair_conjugates(_dense_pencil(base, h1, trace, scale, name), scale)
    poles = list(paired.poles)
    pair_index = list(paired.pair_index)
    origins = [PoleOrigin.PENCIL] * len(poles)
    if kind == GreenKind.DRIVEN:
        inherited = pair_conjugates(_dense_pencil(f0, h1, trace, scale, name), scale)
        next_pair = max(pair_index, default=-1) + 1
        for index in np.unique(inherited.pair_index):
            members = inherited.poles[inherited.pair_index == index]
            known = np.array(poles, dtype=complex)
            if known.size and np.min(np.abs(known - members[0])) <= numeric_policy.pole_match_tol * max(abs(members[0]), scale):
                continue
            poles.extend(members)
            pair_index.extend([next_pair] * len(members))
            origins.extend([PoleOrigin.INHERITED] * len(members))
            next_pair += 1
        poles, pair_index, origins = sort_pairs(poles, pair_index, origins)
    logger.info(f"Dense pencil of {name}: {len(poles)} {kind.value} poles")
    return PoleSet(poles=np.array(poles, dtype=complex), kind=kind, pair_index=np.array(pair_index), origins=origins)


def _symmetric_sector_state(params: ModelParams, zeta: float) -> Tuple[QOperator, float]:
    """
    Full-representation steady state inside the symmetric sector J = N/2.

    Collective dynamics conserves J², so the kernel on the whole space has one
    state per sector; the sector reached from ρ_th is the symmetric one.
    """
    model = build_ensemble_model(params, Representation.FULL, zero_quantum=False)
    generator = dense_generator(model, zeta).entries
    u = symmetric_isometry(params.n_passive).toarray()
    w = np.kron(u.conj(), u)
    reduced = w.conj().T @ generator @ w
    vector, gap = nullspace_solution(reduced, trace_vector(u.shape[1]))
    rho_sym = devec(vector, u.shape[1])
    rho = u @ rho_sym @ u.conj().T
    return _density_from_vector(vec(rho), model.hilbert_dim, None), gap


def _observable_reports(labels: Sequence[str], fast: Sequence[float], oracle: Sequence[Optional[float]],
                        tolerance: float, gap: Optional[float], note: Optional[str] = None) -> List[OracleReport]:
    return [OracleReport(quantity=label, fast_value=f, oracle_value=o, tolerance=tolerance,
                         singular_value_gap=gap, note=note)
            for label, f, o in zip(labels, fast, oracle)]


def full_ensemble_crosscheck(params: ModelParams, zeta: Optional[float] = None,
                             tolerance: float = 1e-9) -> List[OracleReport]:
    """
    Full 2^{N+1}-dimensional ensemble against the dicke route for equal
    couplings; for unequal couplings the full-representation observables are
    recorded as reference data and zero-coupled passive spins are checked to
    stay unpolarized.
    """
    if params.n_passive > 4:
        raise SizeGuardException(f"The full-ensemble cross-check is limited to N <= 4, got {params.n_passive}")
    zeta = params.zeta if zeta is None else zeta
    full_ops = ensemble_operators(params, Representation.FULL)
    labels = ('iz', 'iz2', 'sz')
    logger.info(f"Full-ensemble cross-check, N={params.n_passive}, zeta={zeta}")

    if params.uniform_couplings:
        rho_full, gap = _symmetric_sector_state(params, zeta)
        dicke_ops = ensemble_operators(params, Representation.DICKE)
        problem = SpectralProblem.from_model(build_ensemble_model(params, Representation.DICKE, ops=dicke_ops))
        fast = ensemble_observables(steady_state(problem, zeta).rho, dicke_ops)
        oracle = ensemble_observables(rho_full, full_ops)
        return _observable_reports(labels, fast, oracle, tolerance, gap, note=f"zeta={zeta}")

    model = build_ensemble_model(params, Representation.FULL, ops=full_ops)
    generator = dense_generator(model, zeta)
    try:
        rho, gap = nullspace_with_gap(generator)
        note = "nullspace"
    except NonUniqueSteadyStateException as e:
        logger.info(f"Unequal couplings leave a degenerate kernel (gap {e.singular_value_gap:.3e}); propagating")
        rho = propagate(generator, model.rho_th, 50 / params.gamma1, steps=50)
        gap, note = e.singular_value_gap, "propagated from rho_th"

    reports = _observable_reports(labels, ensemble_observables(rho, full_ops), [None] * 3, tolerance, gap, note)
    for site, coupling in enumerate(params.coupling_vector()):
        if coupling == 0.0:
            polarization = float(np.real(np.sum(full_ops.iz_each[site].multiply(rho.entries.T))))
            reports.append(OracleReport(quantity=f"iz[{site}]", fast_value=polarization, oracle_value=0.0,
                                        tolerance=tolerance, singular_value_gap=gap, note="zero coupling"))
    return reports
