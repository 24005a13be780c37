"""
Lindblad models of the driven two-level ensemble.

H0 = 0, H1 = S_z, P = Ω(V₊S₋ + V₋S₊) with V± = Σ a_k I±⁽ᵏ⁾, and
𝓓 = Γ₁𝓛(S₋) + 2Γ₂𝓛(S_z) + γ₁/2 [𝓛(V₊) + 𝓛(V₋)] + 2γ₂𝓛(I_z).

Hilbert ordering is passive ⊗ active in both representations; the dicke
representation replaces the N passive spins by the collective spin I = N/2.
"""

from dataclasses import dataclass
from functools import reduce
from typing import List, Optional

import numpy as np
import scipy.sparse as sp

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.dicke.collective import active_spin_operators, sparse_collective
from spectral_green.green.projection import Grading
from spectral_green.liouops.vectorization import zero_quantum_support
from spectral_green.models.exceptions.known_exceptions import UnsupportedRepresentationException
from spectral_green.models.lindblad_model import JumpTerm, LindbladModel
from spectral_green.models.methods import Representation
from spectral_green.models.operators import QOperator
from spectral_green.models.params import ModelParams


@dataclass(frozen=True)
class EnsembleOperators:
    """Sparse ensemble operators on the passive ⊗ active Hilbert space."""
    representation: Representation
    n_passive: int
    iz: sp.csr_matrix
    v_plus: sp.csr_matrix
    sz: sp.csr_matrix
    s_plus: sp.csr_matrix
    # single-spin I_z⁽ᵏ⁾, only in the full representation
    iz_each: List[sp.csr_matrix]

    @property
    def v_minus(self) -> sp.csr_matrix:
        return self.v_plus.conj().T.tocsr()

    @property
    def s_minus(self) -> sp.csr_matrix:
        return self.s_plus.conj().T.tocsr()

    @property
    def dim(self) -> int:
        return self.iz.shape[0]

    def conserved(self) -> np.ndarray:
        """Diagonal of I_z + S_z"""
        return np.real((self.iz + self.sz).diagonal())


def _kron_all(factors) -> sp.csr_matrix:
    return reduce(lambda left, right: sp.kron(left, right, format='csr'), factors)


def _on_passive_site(op: np.ndarray, site: int, n_passive: int) -> sp.csr_matrix:
    eye = sp.identity(2, format='csr')
    factors = [sp.csr_matrix(op) if k == site else eye for k in range(n_passive)] + [eye]
    return _kron_all(factors)


def ensemble_operators(params: ModelParams, representation: Representation) -> EnsembleOperators:
    n = params.n_passive
    couplings = params.coupling_vector()
    sz, s_plus, _ = active_spin_operators()
    if representation == Representation.DICKE:
        if not params.uniform_couplings:
            raise UnsupportedRepresentationException("The dicke representation requires equal couplings a_k")
        iz_passive, i_plus = sparse_collective(n)
        eye_active = sp.identity(2, format='csr')
        eye_passive = sp.identity(n + 1, format='csr')
        return EnsembleOperators(
            representation=representation,
            n_passive=n,
            iz=sp.kron(iz_passive, eye_active, format='csr'),
            v_plus=couplings[0] * sp.kron(i_plus, eye_active, format='csr'),
            sz=sp.kron(eye_passive, sp.csr_matrix(sz), format='csr'),
            s_plus=sp.kron(eye_passive, sp.csr_matrix(s_plus), format='csr'),
            iz_each=[],
        )

    if n > numeric_policy.full_representation_max_n:
        raise UnsupportedRepresentationException(
            f"The full representation is limited to N <= {numeric_policy.full_representation_max_n}, got {n}")
    iz_each = [_on_passive_site(sz, site, n) for site in range(n)]
    v_plus = sum(a * _on_passive_site(s_plus, site, n) for site, a in enumerate(couplings))
    eye_passive = sp.identity(2 ** n, format='csr')
    return EnsembleOperators(
        representation=representation,
        n_passive=n,
        iz=sum(iz_each).tocsr(),
        v_plus=sp.csr_matrix(v_plus),
        sz=sp.kron(eye_passive, sp.csr_matrix(sz), format='csr'),
        s_plus=sp.kron(eye_passive, sp.csr_matrix(s_plus), format='csr'),
        iz_each=iz_each,
    )


def thermal_state(ops: EnsembleOperators) -> np.ndarray:
    """Uniform passive populations ⊗ active ground state |↓⟩⟨↓|, trace 1"""
    passive_dim = ops.dim // 2
    return np.kron(np.eye(passive_dim), np.diag([0.0, 1.0])) / passive_dim


def build_ensemble_model(params: ModelParams, representation: Representation = Representation.DICKE,
                         zero_quantum: bool = True, ops: Optional[EnsembleOperators] = None) -> LindbladModel:
    """
    LindbladModel of the ensemble; with `zero_quantum` the model support is the
    subspace of operators commuting with I_z + S_z.
    """
    ops = ensemble_operators(params, representation) if ops is None else ops
    dense = lambda matrix: matrix.toarray().astype(complex)
    v_plus, s_plus = ops.v_plus, ops.s_plus
    p = params.omega * (v_plus @ ops.s_minus + ops.v_minus @ s_plus)
    jumps = [
        JumpTerm(operator=QOperator(entries=dense(ops.s_minus)), rate=params.big_gamma1, label='S-'),
        JumpTerm(operator=QOperator(entries=dense(ops.sz)), rate=2 * params.big_gamma2, label='Sz'),
        JumpTerm(operator=QOperator(entries=dense(v_plus)), rate=params.gamma1 / 2, label='V+'),
        JumpTerm(operator=QOperator(entries=dense(ops.v_minus)), rate=params.gamma1 / 2, label='V-'),
        JumpTerm(operator=QOperator(entries=dense(ops.iz)), rate=2 * params.gamma2, label='Iz'),
    ]
    support = zero_quantum_support(ops.conserved()) if zero_quantum else None
    model = LindbladModel(
        h0=QOperator(entries=np.zeros((ops.dim, ops.dim)), hermitian=True),
        h1=QOperator(entries=dense(ops.sz), hermitian=True),
        p=QOperator(entries=dense(p), hermitian=True),
        jumps=jumps,
        rho_th=QOperator(entries=thermal_state(ops), hermitian=True, density_trace=1.0),
        support=support,
        name=f"ensemble[{representation.value}, N={params.n_passive}]",
    )
    logger.debug(f"Built {model.name} with Liouville dimension {model.liouville_dim}")
    return model


def active_coherence_grading(model: LindbladModel) -> Grading:
    """
    Grading by active coherence order: Λ⁽⁰⁾ holds elements diagonal in the active
    spin, Λ⁽¹⁾ the single-quantum active coherences.
    """
    dim = model.hilbert_dim
    indices = np.arange(dim * dim) if model.support is None else model.support
    rows, cols = indices % dim, indices // dim
    return Grading(labels=(rows % 2 != cols % 2).astype(np.int64))


def ensemble_observables(rho: QOperator, ops: EnsembleOperators):
    """(⟨I_z⟩, ⟨I_z²⟩, ⟨S_z⟩) of a Hilbert-space density operator"""
    entries = rho.entries
    iz = ops.iz
    expectation = lambda op: float(np.real(np.sum(op.multiply(entries.T))))
    return expectation(iz), expectation((iz @ iz).tocsr()), expectation(ops.sz)


def symmetric_isometry(n_passive: int) -> sp.csr_matrix:
    """
    Columns are |D_k⟩ ⊗ |s⟩: the symmetric passive state with k spins up, embedded
    in the product basis; column order matches the dicke representation.
    """
    passive_dim = 2 ** n_passive
    # bit value 0 is ↑ in the product basis, leftmost site most significant
    ups = np.array([n_passive - bin(index).count('1') for index in range(passive_dim)])
    rows, cols, values = [], [], []
    for k in range(n_passive + 1):
        members = np.flatnonzero(ups == k)
        for s in range(2):
            rows.extend(members * 2 + s)
            cols.extend([k * 2 + s] * len(members))
            values.extend([1 / np.sqrt(len(members))] * len(members))
    return sp.csr_matrix((values, (rows, cols)), shape=(2 * passive_dim, 2 * (n_passive + 1)))
