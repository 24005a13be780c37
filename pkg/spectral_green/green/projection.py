"""
Projection of the steady-state problem onto a graded space Λ⁽⁰⁾ ⊕ Λ⁽¹⁾.

A valid grading has (𝓕₀ − ζ𝓗₁)Λ⁽ˢ⁾ ⊂ Λ⁽ˢ⁾, 𝓟Λ⁽ˢ⁾ ⊂ Λ⁽¹⁻ˢ⁾ and ρ_th ∈ Λ⁽⁰⁾.
Then ρ⁽⁰⁾ solves (1 − 𝓧₀²)ρ⁽⁰⁾ = ρ_th inside Λ⁽⁰⁾ and ρ⁽¹⁾ = 𝓧₀ρ⁽⁰⁾.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as la

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.green.problem import SpectralProblem, as_problem
from spectral_green.green.solvers import Source, transfer_matrix
from spectral_green.models.exceptions.known_exceptions import GradingValidationException, ShapeMismatchException
from spectral_green.models.methods import GreenKind
from spectral_green.models.results.green_results import (
    AdiabaticGenerator,
    AdiabaticityReport,
    ProjectedSteadyState,
)


@dataclass(frozen=True)
class Grading:
    """Label 0 or 1 for every coordinate of a spectral problem."""
    labels: np.ndarray

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or not np.all(np.isin(labels, (0, 1))):
            raise ShapeMismatchException("Grading labels must be a vector of 0 and 1")
        object.__setattr__(self, 'labels', labels)

    @property
    def zero_block(self) -> np.ndarray:
        return np.flatnonzero(self.labels == 0)

    @property
    def one_block(self) -> np.ndarray:
        return np.flatnonzero(self.labels == 1)


def validate_grading(problem: SpectralProblem, grading: Grading, zeta: float, tol: Optional[float] = None) -> None:
    """Raise GradingValidationException naming the first violated inclusion"""
    tol = numeric_policy.solve_residual_tol if tol is None else tol
    if len(grading.labels) != problem.dim:
        raise ShapeMismatchException(f"Grading has {len(grading.labels)} labels, problem has {problem.dim} coordinates")
    zero, one = grading.zero_block, grading.one_block
    a0 = problem.operator(GreenKind.NON_DRIVEN, zeta)

    def block_norm(matrix, rows, cols) -> float:
        if len(rows) == 0 or len(cols) == 0:
            return 0.0
        return float(np.max(np.abs(matrix[np.ix_(rows, cols)])))

    a_scale = max(float(np.max(np.abs(a0))), 1.0)
    p_scale = max(float(np.max(np.abs(problem.p), initial=0.0)), 1.0)
    checks = (
        ("(F0 - zeta H1) L0 in L0", block_norm(a0, one, zero) / a_scale),
        ("(F0 - zeta H1) L1 in L1", block_norm(a0, zero, one) / a_scale),
        ("P L0 in L1", block_norm(problem.p, zero, zero) / p_scale),
        ("P L1 in L0", block_norm(problem.p, one, one) / p_scale),
        ("rho_th in L0", float(np.max(np.abs(problem.thermal[one]), initial=0.0))),
        ("trace functional on L0", float(np.max(np.abs(problem.trace[one]), initial=0.0))),
    )
    for inclusion, deviation in checks:
        if deviation > tol:
            raise GradingValidationException(inclusion, deviation)


def projected_steady_state(source: Source, zeta: float, grading: Grading) -> ProjectedSteadyState:
    problem = as_problem(source)
    validate_grading(problem, grading, zeta)
    zero = grading.zero_block
    x0 = transfer_matrix(problem, GreenKind.NON_DRIVEN, zeta)
    x0_squared = (x0 @ x0)[np.ix_(zero, zero)]
    rho0 = np.zeros(problem.dim, dtype=complex)
    rho0[zero] = la.solve(np.eye(len(zero)) - x0_squared, problem.thermal[zero])
    rho1 = x0 @ rho0
    return ProjectedSteadyState(rho0=rho0, rho1=rho1, zeta=zeta)


def adiabatic_generator(source: Source, zeta: float, grading: Grading) -> AdiabaticGenerator:
    """
    𝓐⁽⁰⁾ − 𝓟𝓖₀(ζ)𝓟 on Λ⁽⁰⁾, with 𝓐 = 𝓕₀ − ζ𝓗₁, plus the adiabaticity report.
    """
    problem = as_problem(source)
    validate_grading(problem, grading, zeta)
    zero, one = grading.zero_block, grading.one_block
    a = problem.operator(GreenKind.NON_DRIVEN, zeta)
    a00 = a[np.ix_(zero, zero)]
    a11 = a[np.ix_(one, one)]
    p01 = problem.p[np.ix_(zero, one)]
    p10 = problem.p[np.ix_(one, zero)]

    if len(one):
        generator = a00 - p01 @ la.solve(a11, p10)
        min_fast = float(np.min(np.abs(la.eigvals(a11))))
    else:
        generator = a00
        min_fast = float('inf')
    driving_norm = float(np.linalg.norm(problem.p, 2))
    eig_over_p = min_fast / driving_norm if driving_norm > 0 else float('inf')
    p_over_eig = driving_norm / min_fast if min_fast > 0 else float('inf')
    report = AdiabaticityReport(
        min_fast_eigenvalue=min_fast,
        driving_norm=driving_norm,
        eigenvalue_over_driving=eig_over_p,
        driving_over_eigenvalue=p_over_eig,
        adiabatic_regime=p_over_eig <= numeric_policy.adiabatic_ratio,
    )
    logger.info(f"Adiabatic elimination for {problem.name} at zeta={zeta}: {report.model_dump()}")
    return AdiabaticGenerator(generator=generator, zero_block=zero, report=report)
