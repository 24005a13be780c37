"""
Green function solvers on the traceless subspace.

The traceless restriction is never formed explicitly. Every solve goes through
the bordered system

    [ A   t ] [x]   [b]
    [ t†  0 ] [μ] = [0]

with t the trace vector. Because t†A = 0 for a trace-preserving A, the solution
is x = 𝓖·Q·b where Q removes the trace part of b, so the matrices returned by
green_matrix satisfy the Dyson and commutation identities on the whole space.
"""

import warnings
from typing import Optional, Union

import numpy as np
import scipy.linalg as la

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.green.problem import SpectralProblem, as_problem
from spectral_green.models.exceptions.known_exceptions import (
    SingularSystemException,
    TracefulOperandException,
)
from spectral_green.models.lindblad_model import LindbladModel
from spectral_green.models.methods import GreenKind, SteadyMethod, SteadyVariant
from spectral_green.models.operators import QOperator
from spectral_green.models.results.green_results import CommutationReport, SteadyStateResult

Source = Union[LindbladModel, SpectralProblem]


def bordered_solve(a: np.ndarray, t: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve the trace-bordered system for one or many right-hand sides.

    Raises SingularSystemException when LAPACK reports ill-conditioning.
    """
    dim = a.shape[0]
    bordered = np.zeros((dim + 1, dim + 1), dtype=complex)
    bordered[:dim, :dim] = a
    bordered[:dim, dim] = t
    bordered[dim, :dim] = t.conj()
    rhs = np.asarray(rhs, dtype=complex)
    extended = np.zeros((dim + 1,) + rhs.shape[1:], dtype=complex)
    extended[:dim] = rhs
    try:
        with warnings.catch_warnings():
            warnings.simplefilter('error', la.LinAlgWarning)
            solution = la.solve(bordered, extended)
    except (la.LinAlgError, la.LinAlgWarning) as e:
        with np.errstate(all='ignore'):
            condition = float(np.linalg.cond(bordered))
        raise SingularSystemException("bordered system is numerically singular",
                                      condition_estimate=condition, original_exception=e)
    return solution[:dim]


def trace_projector(trace: np.ndarray) -> np.ndarray:
    """Q = 1 − t·t†/(t†t): removes the trace part of a vector"""
    return np.eye(len(trace), dtype=complex) - np.outer(trace, trace.conj()) / np.vdot(trace, trace)


def green_matrix(source: Source, kind: GreenKind, zeta: float) -> np.ndarray:
    """Matrix of 𝓖(ζ)·Q (driven) or 𝓖₀(ζ)·Q (non-driven)"""
    problem = as_problem(source)
    return bordered_solve(problem.operator(kind, zeta), problem.trace, np.eye(problem.dim, dtype=complex))


def transfer_matrix(source: Source, kind: GreenKind, zeta: float) -> np.ndarray:
    """𝓧(ζ) = 𝓖(ζ)𝓟 (driven) or 𝓧₀(ζ) = 𝓖₀(ζ)𝓟 (non-driven)"""
    problem = as_problem(source)
    return bordered_solve(problem.operator(kind, zeta), problem.trace, problem.p)


def green_apply(source: Source, kind: GreenKind, zeta: float,
                operand: Union[QOperator, np.ndarray]) -> Union[QOperator, np.ndarray]:
    """
    Apply the driven or non-driven Green function to a traceless operand.

    Returns a QOperator for QOperator operands, otherwise a coordinate vector.
    """
    problem = as_problem(source)
    b = problem.to_vector(operand)
    norm_b = float(np.linalg.norm(b))
    trace = problem.trace_of(b)
    if abs(trace) > numeric_policy.operand_trace_tol * max(1.0, norm_b):
        raise TracefulOperandException(f"Green function operand must be traceless, got trace {trace}")

    a = problem.operator(kind, zeta)
    x = bordered_solve(a, problem.trace, b)
    residual = float(np.linalg.norm(a @ x - b))
    bound = numeric_policy.solve_residual_tol * (norm_b + float(np.linalg.norm(a, 2) * np.linalg.norm(x)))
    if residual > bound:
        logger.warning(f"Bordered solve for {problem.name} at zeta={zeta} has residual {residual:.3e}")

    if isinstance(operand, QOperator):
        return problem.to_operator(x)
    return x


def _result(problem: SpectralProblem, vector: np.ndarray, method: SteadyMethod, zeta: float,
            **extra) -> SteadyStateResult:
    rho = problem.to_operator(vector) if problem.is_operator_space else None
    return SteadyStateResult(vector=vector, method=method, zeta=zeta, rho=rho, **extra)


def _leja_order(values: np.ndarray) -> np.ndarray:
    """Leja ordering keeps the partial products of the Newton form bounded"""
    if len(values) == 0:
        return values
    remaining = list(values)
    first = int(np.argmax(np.abs(remaining)))
    ordered = [remaining.pop(first)]
    log_distance = np.zeros(len(remaining))
    while remaining:
        log_distance = np.array([np.log(abs(z - ordered[-1]) + 1e-300) for z in remaining]) + log_distance
        pick = int(np.argmax(log_distance))
        ordered.append(remaining.pop(pick))
        log_distance = np.delete(log_distance, pick)
    return np.array(ordered)


def renormalized_polynomial_apply(x0: np.ndarray, rhs: np.ndarray,
                                  zero_cutoff: Optional[float] = None) -> np.ndarray:
    """
    Evaluate π̄(𝓧₀)·rhs = (1 − 𝓧₀)⁻¹·rhs through the characteristic polynomial of 𝓧₀.

    π̄(x) = Σ_j (1 − μ_j)⁻¹ Π_{i<j} (x − μ_i)/(1 − μ_i) over the eigenvalues μ of 𝓧₀;
    the remainder term vanishes by Cayley-Hamilton.
    """
    zero_cutoff = numeric_policy.polynomial_zero_cutoff if zero_cutoff is None else zero_cutoff
    mu = la.eigvals(x0)
    magnitude = np.abs(mu)
    threshold = zero_cutoff * max(1.0, float(magnitude.max(initial=0.0)))
    nonzero = _leja_order(mu[magnitude >= threshold])
    ordered = np.concatenate([nonzero, np.zeros(int(np.sum(magnitude < threshold)), dtype=complex)])

    accumulated = np.zeros_like(rhs, dtype=complex)
    term = np.asarray(rhs, dtype=complex).copy()
    floor = np.finfo(float).eps * 1e-3 * max(float(np.linalg.norm(rhs)), 1e-300)
    for value in ordered:
        accumulated += term / (1 - value)
        term = (x0 @ term - value * term) / (1 - value)
        if np.linalg.norm(term) <= floor:
            break
    return accumulated


def steady_state(source: Source, zeta: float,
                 method: SteadyMethod = SteadyMethod(variant=SteadyVariant.DIRECT)) -> SteadyStateResult:
    """
    Steady state ρ = ρ_th + ρ̄ by one of four routes.

    direct:     ρ_th + 𝓖(ζ)𝓟ρ_th
    dyson:      solve (1 − 𝓧₀(ζ))ρ = ρ_th
    series:     Σ_k 𝓧₀ᵏ ρ_th up to the given order, with the spectral radius of 𝓧₀
    polynomial: π̄(𝓧₀)ρ_th from the eigenvalues of 𝓧₀
    """
    problem = as_problem(source)
    rho_th = problem.thermal
    if method.variant == SteadyVariant.DIRECT:
        driven = bordered_solve(problem.operator(GreenKind.DRIVEN, zeta), problem.trace, problem.p @ rho_th)
        return _result(problem, rho_th + driven, method, zeta)

    x0 = transfer_matrix(problem, GreenKind.NON_DRIVEN, zeta)
    if method.variant == SteadyVariant.DYSON:
        vector = la.solve(np.eye(problem.dim) - x0, rho_th)
        return _result(problem, vector, method, zeta)

    if method.variant == SteadyVariant.POLYNOMIAL:
        return _result(problem, renormalized_polynomial_apply(x0, rho_th), method, zeta)

    radius = float(np.max(np.abs(la.eigvals(x0)), initial=0.0))
    vector = rho_th.astype(complex)
    term = rho_th.astype(complex)
    for _ in range(method.order):
        term = x0 @ term
        vector = vector + term
    convergent = radius < 1.0
    messages = []
    if not convergent:
        messages.append(f"series is not convergent: spectral radius of X0 is {radius:.6g}")
        logger.warning(f"Series steady state for {problem.name} at zeta={zeta}: spectral radius {radius:.6g} >= 1")
    return _result(problem, vector, method, zeta, spectral_radius=radius, convergent=convergent, warnings=messages)


def dyson_residual(source: Source, zeta: float, probe: str = 'basis', n_probes: int = 8, seed: int = 0,
                   green_perturbation: float = 0.0) -> float:
    """
    Relative norm of (1 − 𝓖₀𝓟)𝓖 − 𝓖₀ on the traceless subspace.

    `probe` is 'basis' (the columns of the trace-removing projector) or 'random'.
    `green_perturbation` adds a relative random error to 𝓖 and exists to exercise
    the detector.
    """
    problem = as_problem(source)
    g = green_matrix(problem, GreenKind.DRIVEN, zeta)
    g0 = green_matrix(problem, GreenKind.NON_DRIVEN, zeta)
    rng = np.random.default_rng(seed)
    if green_perturbation:
        noise = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        g = g + green_perturbation * np.linalg.norm(g, 2) * noise / np.linalg.norm(noise, 2)

    q = trace_projector(problem.trace)
    if probe == 'random':
        probes = q @ (rng.standard_normal((problem.dim, n_probes)) + 1j * rng.standard_normal((problem.dim, n_probes)))
    else:
        probes = q
    g_probes = g @ probes
    g0_probes = g0 @ probes
    residual = g_probes - g0 @ (problem.p @ g_probes) - g0_probes
    scale = max(float(np.linalg.norm(g0_probes, 2)),
                float(np.linalg.norm(g0, 2) * np.linalg.norm(problem.p, 2) * np.linalg.norm(g_probes, 2)),
                np.finfo(float).tiny)
    return float(np.linalg.norm(residual, 2)) / scale


def commutation_check(source: Source, zeta: float) -> CommutationReport:
    """(1+𝓧)(1−𝓧₀) = 1 and 𝓧𝓧₀ = 𝓧₀𝓧 on the traceless subspace"""
    problem = as_problem(source)
    x = transfer_matrix(problem, GreenKind.DRIVEN, zeta)
    x0 = transfer_matrix(problem, GreenKind.NON_DRIVEN, zeta)
    identity = np.eye(problem.dim, dtype=complex)
    q = trace_projector(problem.trace)
    scale = (1 + np.linalg.norm(x, 2)) * (1 + np.linalg.norm(x0, 2))
    inverse = ((identity + x) @ (identity - x0) - identity) @ q
    commutator = (x @ x0 - x0 @ x) @ q
    return CommutationReport(
        inverse_residual=float(np.linalg.norm(inverse, 2) / scale),
        commutator_residual=float(np.linalg.norm(commutator, 2) / scale),
    )
