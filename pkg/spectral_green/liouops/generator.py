"""
Assembly of the generator 𝓜 = 𝓕₀ − 𝓟 − ζ𝓗₁.

𝓕₀ = −i[H0, ·] + 𝓓, 𝓟 = i[P, ·], 𝓗₁ = i[H1, ·]. Blocks are assembled as sparse
Kronecker products and restricted to the model support before densifying.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.liouops.superoperators import CommutatorSign, sparse_commutator, sparse_dissipator
from spectral_green.liouops.vectorization import restrict, restrict_matrix, trace_vector, vec
from spectral_green.models.exceptions.known_exceptions import SizeGuardException
from spectral_green.models.lindblad_model import LindbladModel
from spectral_green.models.operators import SuperOperator
from spectral_green.models.results.green_results import SplitReport


@dataclass(frozen=True)
class SparseGeneratorBlocks:
    f0: sp.csr_matrix
    p: sp.csr_matrix
    h1: sp.csr_matrix
    hilbert_dim: int
    support: Optional[np.ndarray]


@dataclass(frozen=True)
class GeneratorBlocks:
    """Dense 𝓕₀, 𝓟, 𝓗₁ on the model's (possibly restricted) Liouville space."""
    f0: np.ndarray
    p: np.ndarray
    h1: np.ndarray
    hilbert_dim: int
    support: Optional[np.ndarray]

    def generator(self, zeta: float) -> np.ndarray:
        return self.f0 - self.p - zeta * self.h1

    def trace_vector(self) -> np.ndarray:
        return trace_vector(self.hilbert_dim, self.support)


def dissipator_matrix(model: LindbladModel) -> sp.csr_matrix:
    """Σ rate·𝓛(X) on the full Liouville space"""
    dim = model.hilbert_dim
    total = sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
    for jump in model.jumps:
        total = total + sparse_dissipator(jump.operator.entries, jump.rate)
    return total.tocsr()


def _full_blocks(model: LindbladModel) -> Tuple[sp.csr_matrix, sp.csr_matrix, sp.csr_matrix]:
    """𝓕₀, 𝓟, 𝓗₁ on the full Liouville space"""
    f0 = sparse_commutator(model.h0.entries, CommutatorSign.GENERATOR.factor) + dissipator_matrix(model)
    p = sparse_commutator(model.p.entries, CommutatorSign.SPECTRAL.factor)
    h1 = sparse_commutator(model.h1.entries, CommutatorSign.SPECTRAL.factor)
    return f0.tocsr(), p.tocsr(), h1.tocsr()


def sparse_generator_blocks(model: LindbladModel) -> SparseGeneratorBlocks:
    f0, p, h1 = _full_blocks(model)
    return SparseGeneratorBlocks(
        f0=restrict_matrix(f0, model.support),
        p=restrict_matrix(p, model.support),
        h1=restrict_matrix(h1, model.support),
        hilbert_dim=model.hilbert_dim,
        support=model.support,
    )


def generator_blocks(model: LindbladModel, dense_limit: Optional[int] = None) -> GeneratorBlocks:
    dense_limit = numeric_policy.dense_liouville_limit if dense_limit is None else dense_limit
    if model.liouville_dim > dense_limit:
        raise SizeGuardException(
            f"Liouville dimension {model.liouville_dim} of {model.name} exceeds the dense limit {dense_limit}")
    blocks = sparse_generator_blocks(model)
    return GeneratorBlocks(
        f0=blocks.f0.toarray(),
        p=blocks.p.toarray(),
        h1=blocks.h1.toarray(),
        hilbert_dim=blocks.hilbert_dim,
        support=blocks.support,
    )


def _wrap(matrix: np.ndarray, model: LindbladModel) -> SuperOperator:
    return SuperOperator(entries=matrix, hilbert_dim=model.hilbert_dim, support=model.support)


def f0_block(model: LindbladModel) -> SuperOperator:
    return _wrap(generator_blocks(model).f0, model)


def driving_block(model: LindbladModel) -> SuperOperator:
    return _wrap(generator_blocks(model).p, model)


def h1_block(model: LindbladModel) -> SuperOperator:
    return _wrap(generator_blocks(model).h1, model)


def build_generator(model: LindbladModel, zeta: float) -> SuperOperator:
    """𝓜 = −i[P + H0 + ζH1, ·] + 𝓓"""
    return _wrap(generator_blocks(model).generator(zeta), model)


def thermal_vector(model: LindbladModel) -> np.ndarray:
    return restrict(vec(model.rho_th.entries), model.support)


def _relative(residual: float, matrix) -> float:
    return residual / max(1.0, float(spla.norm(matrix)))


def trace_residual(matrix, dim: int) -> float:
    """‖t†𝓢‖/max(1, ‖𝓢‖) for a full-space superoperator 𝓢; zero when Tr 𝓢(X) = 0 for all X"""
    matrix = sp.csr_matrix(matrix)
    return _relative(float(np.linalg.norm(matrix.T @ trace_vector(dim).conj())), matrix)


def adjoint_permutation(dim: int) -> sp.csr_matrix:
    """T with vec(Xᵀ) = T·vec(X), so vec(X†) = T·conj(vec(X))"""
    k = np.arange(dim * dim)
    return sp.csr_matrix((np.ones(dim * dim), (k, (k // dim) + dim * (k % dim))), shape=(dim * dim, dim * dim))


def hermiticity_residual(matrix, dim: int) -> float:
    """‖𝓢T − T·conj(𝓢)‖/max(1, ‖𝓢‖); zero when 𝓢(X†) = 𝓢(X)† for all X"""
    matrix = sp.csr_matrix(matrix)
    swap = adjoint_permutation(dim)
    return _relative(float(spla.norm(matrix @ swap - swap @ matrix.conj())), matrix)


def check_split(model: LindbladModel) -> SplitReport:
    """
    Diagnostic for the generator split: every block is trace- and
    Hermiticity-preserving, 𝓓ρ_th = 0, H0 and H1 commute with ρ_th and the
    driving does not.
    """
    rho = model.rho_th.entries
    blocks = _full_blocks(model)
    trace = max(trace_residual(block, model.hilbert_dim) for block in blocks)
    hermiticity = max(hermiticity_residual(block, model.hilbert_dim) for block in blocks)

    def commutator_norm(h: np.ndarray) -> float:
        return float(np.linalg.norm(h @ rho - rho @ h))

    rate_scale = max([1.0] + [jump.rate for jump in model.jumps])
    dissipator_residual = float(np.linalg.norm(dissipator_matrix(model) @ vec(rho)))
    h0_commutator = commutator_norm(model.h0.entries)
    h1_commutator = commutator_norm(model.h1.entries)
    p_commutator = commutator_norm(model.p.entries)

    def h_scale(h: np.ndarray) -> float:
        return max(1.0, float(np.linalg.norm(h)))

    report = SplitReport(
        dissipator_residual=dissipator_residual,
        h0_commutator=h0_commutator,
        h1_commutator=h1_commutator,
        p_commutator=p_commutator,
        trace_residual=trace,
        hermiticity_residual=hermiticity,
        trace_ok=trace <= numeric_policy.dissipator_tol,
        hermiticity_ok=hermiticity <= numeric_policy.dissipator_tol,
        dissipator_ok=dissipator_residual <= numeric_policy.dissipator_tol * rate_scale,
        h0_ok=h0_commutator <= numeric_policy.hermitian_tol * h_scale(model.h0.entries),
        h1_ok=h1_commutator <= numeric_policy.hermitian_tol * h_scale(model.h1.entries),
        driving_ok=p_commutator > numeric_policy.hermitian_tol * h_scale(model.p.entries),
    )
    if not report.passed:
        logger.warning(f"Generator split check failed for {model.name}: {report.model_dump()}")
    return report
