"""
Column-stacking vectorization, fixed for the whole package.

vec(A·X·B) = (Bᵀ ⊗ A)·vec(X); the element X[i, j] sits at index i + j·dim.
"""

from typing import Optional

import numpy as np
import scipy.sparse as sp

from spectral_green.models.exceptions.known_exceptions import ShapeMismatchException


def vec(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeMismatchException(f"Only square matrices are vectorized, got shape {matrix.shape}")
    return matrix.reshape(-1, order='F')


def devec(vector: np.ndarray, dim: int) -> np.ndarray:
    vector = np.asarray(vector)
    if vector.shape != (dim * dim,):
        raise ShapeMismatchException(f"Vector of shape {vector.shape} is not a vectorized {dim}x{dim} matrix")
    return vector.reshape((dim, dim), order='F')


def element_index(row: int, col: int, dim: int) -> int:
    return row + col * dim


def trace_vector(dim: int, support: Optional[np.ndarray] = None) -> np.ndarray:
    """Vector t with Tr X = t†·vec(X), restricted to the support when given"""
    t = vec(np.eye(dim, dtype=complex))
    return t if support is None else t[support]


def embed(vector: np.ndarray, dim: int, support: Optional[np.ndarray]) -> np.ndarray:
    """Scatter a restricted vector back into the full Liouville space"""
    if support is None:
        return np.asarray(vector, dtype=complex)
    full = np.zeros(dim * dim, dtype=complex)
    full[support] = vector
    return full


def restrict(vector: np.ndarray, support: Optional[np.ndarray]) -> np.ndarray:
    vector = np.asarray(vector, dtype=complex)
    return vector if support is None else vector[support]


def restrict_matrix(matrix, support: Optional[np.ndarray]):
    """Restrict a Liouville-space matrix (dense or sparse) to an invariant subspace"""
    if support is None:
        return matrix
    if sp.issparse(matrix):
        matrix = matrix.tocsr()
        return matrix[support][:, support]
    return matrix[np.ix_(support, support)]


def zero_quantum_support(conserved: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """
    Column-stacked indices of the operators commuting with a diagonal conserved quantity.

    `conserved` is the diagonal of the conserved operator (for the ensemble model I_z + S_z).
    """
    conserved = np.asarray(conserved, dtype=float)
    dim = len(conserved)
    rows, cols = np.nonzero(np.abs(conserved[:, None] - conserved[None, :]) <= tol)
    indices = rows + cols * dim
    return np.sort(indices)


def sparse_spre(a) -> sp.csr_matrix:
    """Left multiplication X ↦ A·X"""
    a = sp.csr_matrix(a)
    return sp.kron(sp.identity(a.shape[0], format='csr'), a, format='csr')


def sparse_spost(b) -> sp.csr_matrix:
    """Right multiplication X ↦ X·B"""
    b = sp.csr_matrix(b)
    return sp.kron(b.T, sp.identity(b.shape[0], format='csr'), format='csr')


def sparse_sprepost(a, b) -> sp.csr_matrix:
    """X ↦ A·X·B"""
    a = sp.csr_matrix(a)
    b = sp.csr_matrix(b)
    return sp.kron(b.T, a, format='csr')
