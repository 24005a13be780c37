from spectral_green.liouops.vectorization import devec, trace_vector, vec, zero_quantum_support
from spectral_green.liouops.superoperators import CommutatorSign, hamiltonian_superop, lindblad_dissipator
from spectral_green.liouops.generator import (
    GeneratorBlocks,
    build_generator,
    check_split,
    driving_block,
    f0_block,
    generator_blocks,
    h1_block,
)
