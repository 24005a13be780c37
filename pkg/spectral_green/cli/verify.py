"""
Oracle-gated verification suites behind `verify`.

Each suite returns a VerificationReport of OracleReports; deviations that
have no natural oracle value are reported as fast_value = deviation against
oracle_value = 0.
"""

import math
from typing import Callable, Dict, List, Optional

import numpy as np
import scipy.linalg as la

from spectral_green.analytic.closed_form import discrete_moments, moments_continuous, poles_analytic, rho0_analytic
from spectral_green.cli.presets import ANALYTIC_CHECK_PARAMS, FIG1A_PARAMS
from spectral_green.custom_logging import logger
from spectral_green.dicke.builders import (
    active_coherence_grading,
    build_ensemble_model,
    ensemble_observables,
    ensemble_operators,
)
from spectral_green.dicke.reduced import (
    adiabatic_reduced_problem,
    observables,
    reduced_generator,
    reduced_steady_state,
    solve_rho0z,
)
from spectral_green.green.poles import compute_poles, rational_eval
from spectral_green.green.problem import SpectralProblem
from spectral_green.green.projection import projected_steady_state
from spectral_green.green.solvers import commutation_check, dyson_residual, green_matrix, steady_state, transfer_matrix
from spectral_green.models.methods import GreenKind, Representation, SteadyMethod
from spectral_green.models.results.oracle_results import OracleReport, VerificationReport
from spectral_green.models.run_config import VerifyTolerances
from spectral_green.oracle.reference import dense_generator, full_ensemble_crosscheck, nullspace_with_gap

SUITES = ('green', 'dicke', 'analytic', 'all')
DEFAULT_N = {'green': 2, 'dicke': 2, 'analytic': 100}
# largest N for the rational-expansion, projection and full-ensemble checks
RATIONAL_MAX_N = 4
PROJECTION_MAX_N = 3
CROSSCHECK_MAX_N = 4
PENCIL_CHECK_MAX_N = 10


def _deviation(quantity: str, value: float, tolerance: float, **extra) -> OracleReport:
    return OracleReport(quantity=quantity, fast_value=float(value), oracle_value=0.0, tolerance=tolerance, **extra)


def _sup(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0))


def _series_order(radius: float) -> int:
    return min(2000, max(1, math.ceil(math.log(1e-14) / math.log(radius))))


def green_suite(n: int, tolerances: VerifyTolerances) -> VerificationReport:
    params = FIG1A_PARAMS.updated(n_passive=n)
    model = build_ensemble_model(params, Representation.DICKE)
    problem = SpectralProblem.from_model(model)
    gamma = params.big_gamma
    reports: List[OracleReport] = []

    for zeta in (0.0, gamma, -gamma, 3 * gamma, -3 * gamma):
        oracle_rho, gap = nullspace_with_gap(dense_generator(model, zeta))
        oracle = problem.to_vector(oracle_rho)
        methods = [SteadyMethod.direct(), SteadyMethod.dyson(), SteadyMethod.polynomial()]
        radius = float(np.max(np.abs(la.eigvals(transfer_matrix(problem, GreenKind.NON_DRIVEN, zeta)))))
        if radius < 0.9:
            methods.append(SteadyMethod.series(_series_order(radius)))
        results = {method.variant.value: steady_state(problem, zeta, method) for method in methods}
        for name, result in results.items():
            reports.append(_deviation(f"steady_state[{name}] zeta={zeta:g}", _sup(result.vector, oracle),
                                      tolerances.steady_state, singular_value_gap=gap))
        reports.append(_deviation(f"polynomial_vs_dyson zeta={zeta:g}",
                                  _sup(results['polynomial'].vector, results['dyson'].vector),
                                  tolerances.polynomial))
        reports.append(_deviation(f"dyson_residual zeta={zeta:g}", dyson_residual(problem, zeta), tolerances.dyson))
        commutation = commutation_check(problem, zeta)
        reports.append(_deviation(f"commutation zeta={zeta:g}",
                                  max(commutation.inverse_residual, commutation.commutator_residual),
                                  tolerances.commutation))

    if n <= RATIONAL_MAX_N:
        reduced = reduced_generator(params).to_problem()
        poles = compute_poles(reduced, GreenKind.DRIVEN, with_residues=True)
        held_out = np.linspace(-2.7 * gamma, 2.9 * gamma, 10)
        worst = 0.0
        for zeta in held_out:
            direct = green_matrix(reduced, GreenKind.DRIVEN, zeta)
            expansion = rational_eval(poles, zeta).entries
            worst = max(worst, float(np.linalg.norm(expansion - direct) / np.linalg.norm(direct)))
        reports.append(_deviation("rational_expansion", worst, tolerances.rational))

    if n <= PROJECTION_MAX_N:
        grading = active_coherence_grading(model)
        for zeta in (0.0, gamma):
            projected = projected_steady_state(problem, zeta, grading)
            full = steady_state(problem, zeta).vector
            zero, one = grading.zero_block, grading.one_block
            deviation = max(_sup(projected.rho0[zero], full[zero]), _sup(projected.rho1[one], full[one]))
            reports.append(_deviation(f"projection zeta={zeta:g}", deviation, tolerances.projection))
    return VerificationReport(suite='green', n_passive=n, reports=reports)


def dicke_suite(n: int, tolerances: VerifyTolerances) -> VerificationReport:
    params = FIG1A_PARAMS.updated(n_passive=n)
    ops = ensemble_operators(params, Representation.DICKE)
    problem = SpectralProblem.from_model(build_ensemble_model(params, Representation.DICKE, ops=ops))
    generator = reduced_generator(params)
    gamma = params.big_gamma
    reports: List[OracleReport] = []
    labels = ('iz', 'iz2', 'sz')

    for zeta in np.linspace(-2 * gamma, 2 * gamma, 11):
        fast = observables(reduced_steady_state(params, zeta, generator)).as_tuple()
        oracle = ensemble_observables(steady_state(problem, zeta).rho, ops)
        for label, f, o in zip(labels, fast, oracle):
            reports.append(OracleReport(quantity=f"reduced_{label} zeta={zeta:g}", fast_value=f, oracle_value=o,
                                        tolerance=tolerances.reduced))

    chain = solve_rho0z(params)
    chain_observables = observables(chain)
    reports.append(_deviation("population_trace", abs(chain.u.sum() - 1), 1e-12))
    reports.append(OracleReport(quantity="active_passive_relation", fast_value=float(chain.v.sum()),
                                oracle_value=-chain_observables.iz / params.gamma_ratio, tolerance=1e-9))
    reports.append(_deviation("population_positivity", max(0.0, -float(chain.u.min())), 1e-12))

    if n <= CROSSCHECK_MAX_N:
        reports.extend(full_ensemble_crosscheck(params, 0.0, tolerance=tolerances.crosscheck))
        reports.extend(full_ensemble_crosscheck(params, gamma, tolerance=10 * tolerances.crosscheck))
        if n >= 2:
            couplings = [1.0] + [0.0] * (n - 1)
            reports.extend(full_ensemble_crosscheck(params.updated(couplings=couplings), 0.0,
                                                    tolerance=tolerances.crosscheck))
    return VerificationReport(suite='dicke', n_passive=n, reports=reports)


def analytic_suite(n: int, tolerances: VerifyTolerances) -> VerificationReport:
    reports: List[OracleReport] = []
    params = ANALYTIC_CHECK_PARAMS.updated(n_passive=n)
    chain = solve_rho0z(params)
    closed = rho0_analytic(params)
    reports.append(_deviation("rho0_vs_closed_form", _sup(chain.u, closed.u), tolerances.analytic_state))
    reports.append(_deviation("rho_z_norm", float(np.max(np.abs(chain.v))), tolerances.analytic_state))

    moment_params = FIG1A_PARAMS.updated(n_passive=n, zeta=0.5 * FIG1A_PARAMS.big_gamma)
    iz_sum, iz2_sum = discrete_moments(rho0_analytic(moment_params).u)
    iz_cont, iz2_cont = moments_continuous(moment_params, endpoint_correction=True)
    moment_tol = tolerances.moments if n >= 100 else 1e-2
    reports.append(OracleReport(quantity="iz_continuum", fast_value=iz_cont, oracle_value=iz_sum,
                                tolerance=moment_tol, relative=True))
    reports.append(OracleReport(quantity="iz2_continuum", fast_value=iz2_cont, oracle_value=iz2_sum,
                                tolerance=moment_tol, relative=True))
    if n == FIG1A_PARAMS.n_passive:
        iz_norm = 2 * moments_continuous(FIG1A_PARAMS)[0] / n
        reports.append(OracleReport(quantity="fig1a_iz_norm", fast_value=iz_norm, oracle_value=-0.994,
                                    tolerance=1e-3))

    pencil_n = min(n, PENCIL_CHECK_MAX_N)
    pole_params = FIG1A_PARAMS.updated(n_passive=pencil_n)
    pencil = compute_poles(adiabatic_reduced_problem(pole_params), GreenKind.DRIVEN)
    expected = poles_analytic(pole_params)
    reports.append(OracleReport(quantity="pole_count", fast_value=pencil.count, oracle_value=expected.count,
                                tolerance=0.0))
    worst = max(float(np.min(np.abs(pencil.poles - value)) / abs(value)) for value in expected.poles)
    reports.append(_deviation(f"poles_vs_closed_form N={pencil_n}", worst, tolerances.poles))
    conjugation = max(float(np.min(np.abs(pencil.poles - np.conj(value)))) for value in pencil.poles)
    reports.append(_deviation("pole_conjugation", conjugation, 0.0))
    return VerificationReport(suite='analytic', n_passive=n, reports=reports)


SUITE_RUNNERS: Dict[str, Callable[[int, VerifyTolerances], VerificationReport]] = {
    'green': green_suite,
    'dicke': dicke_suite,
    'analytic': analytic_suite,
}


def run_suites(suite: str, n: Optional[int], tolerances: VerifyTolerances) -> List[VerificationReport]:
    """Run one suite, or all of them; without `n` each suite uses its own default size"""
    names = tuple(SUITE_RUNNERS) if suite == 'all' else (suite,)
    reports = []
    for name in names:
        size = DEFAULT_N[name] if n is None else n
        logger.info(f"Running the {name} verification suite for N={size}")
        report = SUITE_RUNNERS[name](size, tolerances)
        if not report.passed:
            logger.warning(f"{name} suite failed: {report.failures}")
        reports.append(report)
    return reports
