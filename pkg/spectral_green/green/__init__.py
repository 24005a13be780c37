from spectral_green.green.problem import SpectralProblem, as_problem
from spectral_green.green.solvers import (
    commutation_check,
    dyson_residual,
    green_apply,
    green_matrix,
    steady_state,
    transfer_matrix,
)
from spectral_green.green.poles import compute_poles, extra_pole_scan, pair_conjugates, rational_eval, sort_pairs
from spectral_green.green.projection import Grading, adiabatic_generator, projected_steady_state
