from enum import Enum
from typing import Optional

import numpy as np
import scipy.sparse as sp

from spectral_green.config import numeric_policy
from spectral_green.liouops.vectorization import restrict_matrix, sparse_spost, sparse_spre, sparse_sprepost
from spectral_green.models.exceptions.known_exceptions import InvalidParameterException, NotHermitianException
from spectral_green.models.operators import QOperator, SuperOperator


class CommutatorSign(str, Enum):
    # −i[H,·] as it appears in the generator
    GENERATOR = "-i"
    # +i[H,·], the convention of the driving block 𝓟 and the spectral block 𝓗₁
    SPECTRAL = "+i"

    @property
    def factor(self) -> complex:
        return -1j if self is CommutatorSign.GENERATOR else 1j


def sparse_commutator(h, factor: complex = 1.0) -> sp.csr_matrix:
    """factor·[H, ·] in column-stacked form"""
    return (factor * (sparse_spre(h) - sparse_spost(h))).tocsr()


def sparse_dissipator(x, rate: float) -> sp.csr_matrix:
    """rate·(X̄ ⊗ X − ½ 1 ⊗ X†X − ½ (X†X)ᵀ ⊗ 1)"""
    x = sp.csr_matrix(x)
    dim = x.shape[0]
    if rate == 0.0:
        return sp.csr_matrix((dim * dim, dim * dim), dtype=complex)
    xdx = (x.conj().T @ x).tocsr()
    term = sparse_sprepost(x, x.conj().T) - 0.5 * sparse_spre(xdx) - 0.5 * sparse_spost(xdx)
    return (rate * term).tocsr()


def _require_hermitian(h: QOperator, label: str) -> None:
    scale = max(float(np.max(np.abs(h.entries), initial=0.0)), 1.0)
    if h.hermiticity_error() > numeric_policy.hermitian_tol * scale:
        raise NotHermitianException(f"{label} must be Hermitian (deviation {h.hermiticity_error():.3e})")


def lindblad_dissipator(x: QOperator, rate: float, support: Optional[np.ndarray] = None) -> SuperOperator:
    """
    rate·𝓛(X) with 𝓛(X)ρ = XρX† − ½{X†X, ρ}.

    A zero rate gives the zero superoperator.
    """
    if rate < 0:
        raise InvalidParameterException(f"Dissipator rate must be nonnegative, got {rate}")
    matrix = restrict_matrix(sparse_dissipator(x.entries, rate), support)
    return SuperOperator(entries=matrix.toarray(), hilbert_dim=x.dim, support=support)


def hamiltonian_superop(h: QOperator, sign: CommutatorSign = CommutatorSign.GENERATOR,
                        support: Optional[np.ndarray] = None) -> SuperOperator:
    """∓i[H, ·] selected by `sign`"""
    _require_hermitian(h, "Hamiltonian")
    matrix = restrict_matrix(sparse_commutator(h.entries, sign.factor), support)
    return SuperOperator(entries=matrix.toarray(), hilbert_dim=h.dim, support=support)
