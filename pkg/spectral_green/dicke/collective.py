"""
Spin operators of the ensemble in the occupation basis.

Occupation index k = n + I runs over 0..N for n = −I..I with I = N/2. The
active spin uses index 0 for ↑ and 1 for ↓.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from spectral_green.models.exceptions.known_exceptions import InvalidParameterException
from spectral_green.models.operators import QOperator


@dataclass(frozen=True)
class CollectiveOperators:
    iz: QOperator
    i_plus: QOperator
    i_minus: QOperator


def occupation_numbers(n_passive: int) -> np.ndarray:
    """n = −I..I"""
    return np.arange(n_passive + 1) - n_passive / 2


def lambda_table(n_passive: int) -> np.ndarray:
    """λ_n = (I − n + 1)(I + n) for n = −I..I, i.e. k(N − k + 1) at occupation index k"""
    k = np.arange(n_passive + 1, dtype=float)
    return k * (n_passive - k + 1)


def sparse_collective(n_passive: int):
    """(I_z, I₊) as sparse matrices; I₊[k, k−1] = √λ_n with n = k − I"""
    if n_passive < 1:
        raise InvalidParameterException(f"N must be at least 1, got {n_passive}")
    iz = sp.diags(occupation_numbers(n_passive), format='csr')
    i_plus = sp.diags(np.sqrt(lambda_table(n_passive)[1:]), offsets=-1, format='csr')
    return iz, i_plus


def collective_operators(n_passive: int) -> CollectiveOperators:
    iz, i_plus = sparse_collective(n_passive)
    i_plus = i_plus.toarray()
    return CollectiveOperators(
        iz=QOperator(entries=iz.toarray(), hermitian=True),
        i_plus=QOperator(entries=i_plus),
        i_minus=QOperator(entries=i_plus.conj().T),
    )


def active_spin_operators():
    """(S_z, S₊, S₋) of the active spin-1/2 with |↑⟩ first"""
    sz = np.diag([0.5, -0.5])
    s_plus = np.array([[0.0, 1.0], [0.0, 0.0]])
    return sz, s_plus, s_plus.T.copy()
