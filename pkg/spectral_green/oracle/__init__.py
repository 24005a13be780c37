from spectral_green.oracle.reference import (
    dense_generator,
    full_ensemble_crosscheck,
    nullspace_steady_state,
    pencil_poles_dense,
    propagate,
)
