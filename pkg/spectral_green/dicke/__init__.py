from spectral_green.dicke.collective import collective_operators, lambda_table, occupation_numbers
from spectral_green.dicke.builders import (
    active_coherence_grading,
    build_ensemble_model,
    ensemble_observables,
    ensemble_operators,
    symmetric_isometry,
    thermal_state,
)
from spectral_green.dicke.reduced import (
    adiabatic_grading,
    adiabatic_reduced_problem,
    effective_coupling,
    observables,
    reduced_generator,
    reduced_steady_state,
    rho1_from_rho0,
    solve_rho0z,
)
