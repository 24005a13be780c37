"""
Banded storage and pinned solves for the O(N) ensemble routes.
"""

from typing import Tuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from spectral_green.models.exceptions.known_exceptions import SolverFailedException


def to_banded(matrix) -> Tuple[int, int, np.ndarray]:
    """(lower, upper, ab) in the layout expected by scipy.linalg.solve_banded"""
    coo = sp.coo_matrix(matrix)
    offsets = coo.row - coo.col
    lower = int(max(offsets.max(initial=0), 0))
    upper = int(max(-offsets.min(initial=0), 0))
    ab = np.zeros((lower + upper + 1, coo.shape[1]), dtype=coo.dtype)
    np.add.at(ab, (upper + coo.row - coo.col, coo.col), coo.data)
    return lower, upper, ab


def from_banded(lower: int, upper: int, ab: np.ndarray) -> sp.csr_matrix:
    """Sparse matrix of LAPACK band storage, ab[upper + i − j, j] = A[i, j]"""
    size = ab.shape[1]
    return sp.dia_matrix((ab, np.arange(upper, -lower - 1, -1)), shape=(size, size)).tocsr()


def solve_pinned_banded(lower: int, upper: int, ab: np.ndarray, index: int, in_place: bool = False) -> np.ndarray:
    """
    Kernel vector of a banded matrix with one-dimensional kernel, scaled so
    that x[index] = 1. Row `index` is replaced by the pin; `ab` is only
    overwritten with `in_place`.
    """
    size = ab.shape[1]
    pinned = ab if in_place else ab.copy()
    columns = np.arange(max(0, index - lower), min(size, index + upper + 1))
    pinned[upper + index - columns, columns] = 0.0
    pinned[upper, index] = 1.0
    rhs = np.zeros(size, dtype=pinned.dtype)
    rhs[index] = 1.0
    try:
        return la.solve_banded((lower, upper), pinned, rhs, overwrite_ab=True, check_finite=False)
    except la.LinAlgError as e:
        raise SolverFailedException("singular banded factorization", original_exception=e)


def solve_pinned(matrix, index: int) -> np.ndarray:
    """
    Kernel vector of a sparse matrix with one-dimensional kernel, scaled so that x[index] = 1.

    The pinned coordinate should carry a large share of the kernel vector.
    """
    lower, upper, ab = to_banded(matrix)
    return solve_pinned_banded(lower, upper, ab, index)
