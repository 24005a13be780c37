"""
Command implementations. Each renders its whole output before writing, so a
failing command leaves no partial file behind.
"""

import json
from typing import List

import numpy as np

from spectral_green.analytic.closed_form import poles_analytic
from spectral_green.analytic.sweeps import concentration_sweep, gamma_recurrence, spectral_sweep
from spectral_green.cli.csv_writer import render_csv, write_output
from spectral_green.cli.presets import FIGURE_PRESETS
from spectral_green.cli.verify import SUITES, run_suites
from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.dicke.reduced import adiabatic_reduced_problem
from spectral_green.green.poles import compute_poles
from spectral_green.models.exceptions.known_exceptions import InvalidRunConfigException, SizeGuardException
from spectral_green.models.methods import GreenKind, PoleMethod, SweepMethod
from spectral_green.models.params import ModelParams
from spectral_green.models.results.oracle_results import VerificationReport
from spectral_green.models.run_config import RunConfig

SWEEP_HEADER = ('zeta_rad_s', 'iz_norm', 'iz2_norm', 'sz')
POLES_HEADER = ('re_zeta_rad_s', 'im_zeta_rad_s', 'pair_index')
GAMMA_HEADER = ('gamma', 'sz', 'iz_norm')


def _provenance(config: RunConfig, method: str) -> str:
    return f"sha256={config.config_hash()} method={method}"


def _params(config: RunConfig) -> ModelParams:
    if config.params is None:
        raise InvalidRunConfigException(f"{config.command} needs model parameters (--model)")
    return config.params


def _choice(enum_type, value: str, command: str):
    try:
        return enum_type(value)
    except ValueError as e:
        choices = ', '.join(member.value for member in enum_type)
        raise InvalidRunConfigException(f"{command}: method must be one of {choices}, got '{value}'",
                                        original_exception=e)


def cmd_sweep(config: RunConfig) -> str:
    params = _params(config)
    method = _choice(SweepMethod, config.method or SweepMethod.ANALYTIC.value, 'sweep')
    if method == SweepMethod.FULL and params.n_passive > numeric_policy.full_representation_max_n:
        raise SizeGuardException(
            f"The full method is limited to N <= {numeric_policy.full_representation_max_n}, got {params.n_passive}")
    grid = config.grid.values() if config.grid is not None else np.array([params.zeta])
    result = spectral_sweep(params, grid, method)
    rows = zip(result.grid, *(result.column(name) for name in SWEEP_HEADER[1:]))
    text = render_csv(SWEEP_HEADER, rows, _provenance(config, method.value))
    write_output(text, config.output)
    return text


def cmd_poles(config: RunConfig) -> str:
    params = _params(config)
    method = _choice(PoleMethod, config.method or PoleMethod.ANALYTIC.value, 'poles')
    if method == PoleMethod.PENCIL:
        if params.n_passive > numeric_policy.pencil_max_n:
            raise SizeGuardException(
                f"The pencil method is limited to N <= {numeric_policy.pencil_max_n}, got {params.n_passive}")
        poles = compute_poles(adiabatic_reduced_problem(params), GreenKind.DRIVEN)
    else:
        poles = poles_analytic(params)
    rows = [(value.real, value.imag, int(index)) for value, index in zip(poles.poles, poles.pair_index)]
    text = render_csv(POLES_HEADER, rows, _provenance(config, method.value),
                      comments=[f"pairs={poles.pair_count}"])
    write_output(text, config.output)
    return text


def _figure_1c(config: RunConfig, params: ModelParams) -> str:
    preset = FIGURE_PRESETS['1c']
    xi = (config.grid or preset.grid).values()
    n_values = config.n_values or list(preset.n_values)
    header: List[str] = ['xi']
    columns = []
    comments = []
    for n in n_values:
        result = concentration_sweep(params.updated(n_passive=n), xi, preset.extras['Gamma2_ref'])
        header.append(f"xi_iz_n{n}")
        columns.append(result.column('xi_iz'))
        meta = result.metadata
        comments.append(f"n={n} argmax_xi={meta['argmax_xi']!r} max_abs_xi_iz={meta['max_abs_xi_iz']!r} "
                        f"gamma1_sensitivity={meta['gamma1_sensitivity']!r}")
    text = render_csv(header, zip(xi, *columns), _provenance(config, 'analytic'), comments=comments)
    write_output(text, config.output)
    return text


def cmd_figure(config: RunConfig) -> str:
    """Data of one figure panel; preset parameters and grids apply unless the config overrides them"""
    if config.figure_id not in FIGURE_PRESETS:
        raise InvalidRunConfigException(f"Unknown figure id '{config.figure_id}'")
    preset = FIGURE_PRESETS[config.figure_id]
    params = config.params or preset.params
    logger.info(f"Reproducing figure {config.figure_id} with N={params.n_passive}")

    if config.figure_id == '1a':
        return cmd_sweep(config.model_copy(update={
            'params': params, 'grid': config.grid or preset.grid, 'method': config.method or preset.method}))
    if config.figure_id == '1b':
        return cmd_poles(config.model_copy(update={'params': params, 'method': config.method or preset.method}))
    if config.figure_id == '1c':
        return _figure_1c(config, params)

    result = gamma_recurrence(params, (config.grid or preset.grid).values())
    rows = zip(result.grid, result.column('sz'), result.column('iz_norm'))
    text = render_csv(GAMMA_HEADER, rows, _provenance(config, preset.method),
                      comments=[f"n={params.n_passive}"])
    write_output(text, config.output)
    return text


def cmd_verify(config: RunConfig) -> List[VerificationReport]:
    suite = config.suite or 'all'
    if suite not in SUITES:
        raise InvalidRunConfigException(f"Unknown suite '{suite}', expected one of {', '.join(SUITES)}")
    n = config.n_values[0] if config.n_values else None
    reports = run_suites(suite, n, config.tolerances)
    document = {
        'provenance': _provenance(config, suite),
        'passed': all(report.passed for report in reports),
        'suites': [report.model_dump(mode='json') for report in reports],
    }
    write_output(json.dumps(document, indent=2, sort_keys=True) + '\n', config.output)
    return reports
