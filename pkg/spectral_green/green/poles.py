"""
Poles and residues of the spectral Green functions.

The pencil (𝓕₀ − [𝓟])g = ζ𝓗₁g is linearized by shift-invert: with
G_μ = 𝓖(μ)Q from the bordered solve and K = G_μ𝓗₁, every finite pole is
ζ = μ + 1/θ for an eigenvalue θ of K. Residues follow from the spectral
decomposition of K and are normalized by a least-squares match against
direct solves.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from scipy.optimize import linear_sum_assignment

from spectral_green.config import numeric_policy
from spectral_green.custom_logging import logger
from spectral_green.green.problem import SpectralProblem, as_problem
from spectral_green.green.solvers import Source, bordered_solve, transfer_matrix
from spectral_green.models.exceptions.known_exceptions import (
    MissingResiduesException,
    PoleProximityException,
    PoleShiftFailedException,
    SingularSystemException,
)
from spectral_green.models.methods import GreenKind
from spectral_green.models.operators import SuperOperator
from spectral_green.models.results.green_results import ExtraPoleScan, PoleOrigin, PoleSet

GOLDEN_RATIO = (1 + 5 ** 0.5) / 2


@dataclass(frozen=True)
class PairedPoles:
    poles: np.ndarray
    pair_index: np.ndarray
    # indices of the raw eigenvalues merged into each returned pole
    members: List[List[int]]


@dataclass(frozen=True)
class ShiftInvertSpectrum:
    shift: float
    theta: np.ndarray
    right: np.ndarray
    left: np.ndarray
    green_at_shift: np.ndarray

    def poles(self) -> np.ndarray:
        return self.shift + 1 / self.theta


def shift_invert_spectrum(problem: SpectralProblem, kind: GreenKind, shift: Optional[float] = None,
                          attempts: Optional[int] = None) -> ShiftInvertSpectrum:
    """Eigen-decomposition of K = 𝓖(μ)Q𝓗₁ for a non-resonant real shift μ"""
    attempts = numeric_policy.pole_shift_attempts if attempts is None else attempts
    mu = numeric_policy.pole_shift_factor * problem.scale if shift is None else shift
    base = problem.operator(kind, 0.0)
    identity = np.eye(problem.dim, dtype=complex)
    for attempt in range(1, attempts + 1):
        try:
            g_mu = bordered_solve(base - mu * problem.h1, problem.trace, identity)
        except SingularSystemException as e:
            logger.warning(f"Shift {mu:.6g} is too close to a pole of {problem.name} (attempt {attempt}): {e}")
            mu *= GOLDEN_RATIO
            continue
        k = g_mu @ problem.h1
        norm_k = float(np.linalg.norm(k, 2))
        theta, left, right = la.eig(k, left=True, right=True)
        keep = np.abs(theta) > numeric_policy.pole_rank_cutoff * max(norm_k, np.finfo(float).tiny)
        poles = mu + 1 / theta[keep]
        if np.any(np.abs(poles - mu) < numeric_policy.pole_proximity_tol * problem.scale):
            logger.warning(f"Shift {mu:.6g} collides with a pole of {problem.name} (attempt {attempt})")
            mu *= GOLDEN_RATIO
            continue
        return ShiftInvertSpectrum(shift=mu, theta=theta[keep], right=right[:, keep], left=left[:, keep],
                                   green_at_shift=g_mu)
    raise PoleShiftFailedException(f"No admissible shift found for {problem.name} after {attempts} attempts")


def _cluster(values: np.ndarray, scale: float, tol: float) -> List[List[int]]:
    clusters: List[List[int]] = []
    centers: List[complex] = []
    for index in np.lexsort((values.imag, values.real)):
        value = values[index]
        for position, center in enumerate(centers):
            if abs(value - center) <= tol * max(abs(center), scale):
                clusters[position].append(int(index))
                break
        else:
            clusters.append([int(index)])
            centers.append(value)
    return clusters


def pair_conjugates(values: Sequence[complex], scale: float, merge_tol: Optional[float] = None,
                    imag_tol: Optional[float] = None) -> PairedPoles:
    """
    Merge coincident eigenvalues and symmetrize them into exact conjugate pairs.

    Pairs are sorted by |Re ζ|; within a pair the upper half-plane pole comes first.
    """
    merge_tol = numeric_policy.pole_match_tol if merge_tol is None else merge_tol
    imag_tol = numeric_policy.pole_imag_tol if imag_tol is None else imag_tol
    values = np.asarray(values, dtype=complex)
    clusters = _cluster(values, scale, merge_tol)
    centers = np.array([values[c].mean() for c in clusters], dtype=complex)

    real_axis = np.abs(centers.imag) <= imag_tol * scale
    if np.any(real_axis):
        logger.warning(f"Dropping {int(real_axis.sum())} poles on the real axis: {centers[real_axis]}")
    upper = [i for i in range(len(centers)) if not real_axis[i] and centers[i].imag > 0]
    lower = [i for i in range(len(centers)) if not real_axis[i] and centers[i].imag < 0]

    pairs: List[Tuple[complex, List[int], List[int]]] = []
    matched_upper, matched_lower = set(), set()
    if upper and lower:
        cost = np.abs(centers[upper][:, None] - centers[lower][None, :].conj())
        rows, cols = linear_sum_assignment(cost)
        for row, col in zip(rows, cols):
            u, l = upper[row], lower[col]
            if cost[row, col] > merge_tol * max(abs(centers[u]), scale) * 1e3:
                continue
            matched_upper.add(u)
            matched_lower.add(l)
            pairs.append(((centers[u] + centers[l].conj()) / 2, clusters[u], clusters[l]))
    for u in upper:
        if u not in matched_upper:
            logger.warning(f"Pole {centers[u]} has no conjugate partner, adding it")
            pairs.append((centers[u], clusters[u], []))
    for l in lower:
        if l not in matched_lower:
            logger.warning(f"Pole {centers[l]} has no conjugate partner, adding it")
            pairs.append((centers[l].conj(), [], clusters[l]))

    pairs.sort(key=lambda pair: (abs(pair[0].real), pair[0].imag, pair[0].real))
    poles, pair_index, members = [], [], []
    for index, (value, up_members, down_members) in enumerate(pairs):
        poles.extend([value, value.conjugate()])
        pair_index.extend([index, index])
        members.extend([up_members, down_members])
    return PairedPoles(poles=np.array(poles, dtype=complex), pair_index=np.array(pair_index, dtype=np.int64),
                       members=members)


def _pair_key(value: complex) -> Tuple[float, float, float]:
    upper = value if value.imag >= 0 else value.conjugate()
    return abs(upper.real), upper.imag, upper.real


def sort_pairs(poles: Sequence[complex], pair_index: Sequence[int], *aligned: Optional[list]) -> Tuple[list, ...]:
    """
    Reorder a pole list by |Re ζ| of each pair, keeping the members of a pair
    adjacent and renumbering pair_index from 0. Lists in `aligned` (origins,
    residue shapes) follow the same permutation; None passes through.
    """
    pair_index = np.asarray(pair_index)
    first = {}
    for position, index in enumerate(pair_index):
        first.setdefault(int(index), position)
    order = sorted(first, key=lambda index: _pair_key(complex(poles[first[index]])))
    permutation = [position for index in order for position in np.flatnonzero(pair_index == index)]
    renumbered = [rank for rank, index in enumerate(order) for _ in np.flatnonzero(pair_index == index)]
    reordered = [None if values is None else [values[position] for position in permutation] for values in aligned]
    return ([poles[position] for position in permutation], renumbered, *reordered)


def _residue_shapes(spectrum: ShiftInvertSpectrum) -> List[np.ndarray]:
    """Exact rank-one residues −θ⁻¹·v ŵ† G_μ /(ŵ†v) of the resolvent"""
    shapes = []
    for index, theta in enumerate(spectrum.theta):
        v = spectrum.right[:, index]
        w = spectrum.left[:, index]
        shapes.append(-np.outer(v, w.conj() @ spectrum.green_at_shift) / (theta * np.vdot(w, v)))
    return shapes


def _probe_points(poles: np.ndarray, scale: float, count: int) -> np.ndarray:
    reach = 2 * max(float(np.max(np.abs(poles), initial=0.0)), scale)
    offset = (GOLDEN_RATIO - 1) * reach / count
    return np.linspace(-reach, reach, count) + offset


def fit_residues(problem: SpectralProblem, kind: GreenKind, poles: np.ndarray,
                 shapes: List[np.ndarray], seed: int = 0) -> Tuple[List[np.ndarray], np.ndarray]:
    """
    Scale the residue shapes and find 𝓖⁽⁰⁾ by least squares against direct solves
    at 2·(#poles) real probe points.
    """
    active = [i for i, shape in enumerate(shapes) if np.any(shape)]
    count = max(2 * len(poles), 4)
    probes = _probe_points(poles, problem.scale, count)
    sketch_width = min(problem.dim, 8)
    rng = np.random.default_rng(seed)
    sketch = rng.standard_normal((problem.dim, sketch_width)) + 1j * rng.standard_normal((problem.dim, sketch_width))
    identity = np.eye(problem.dim, dtype=complex)

    greens = [bordered_solve(problem.operator(kind, z), problem.trace, identity) for z in probes]
    weights = 1 / (probes[:, None] - poles[None, :])
    centred_weights = weights - weights.mean(axis=0)

    scales = np.ones(len(poles), dtype=complex)
    if active:
        sketched_greens = np.array([g @ sketch for g in greens])
        target = (sketched_greens - sketched_greens.mean(axis=0)).reshape(-1)
        design = np.column_stack([
            (centred_weights[:, r][:, None, None] * (shapes[r] @ sketch)[None, :, :]).reshape(-1) for r in active
        ])
        solution, *_ = la.lstsq(design, target)
        scales[active] = solution

    residues = [scales[r] * shapes[r] for r in range(len(poles))]
    constant = np.mean([
        g - sum(weights[k, r] * residues[r] for r in active) for k, g in enumerate(greens)
    ], axis=0) if active else np.mean(greens, axis=0)
    return residues, constant


def compute_poles(source: Source, kind: GreenKind, shift: Optional[float] = None, with_residues: bool = False,
                  include_inherited: bool = True) -> PoleSet:
    """
    Finite poles of 𝓖 (driven) or 𝓖₀ (non-driven).

    Poles of the non-driven Green function are also poles of the driven one; those
    the driven pencil does not reproduce are merged in with origin INHERITED and a
    zero residue, and the merged list is again sorted by |Re ζ| of each pair.
    """
    problem = as_problem(source)
    logger.info(f"Computing {kind.value} poles of {problem.name} (dimension {problem.dim})")
    spectrum = shift_invert_spectrum(problem, kind, shift)
    paired = pair_conjugates(spectrum.poles(), problem.scale)
    poles = list(paired.poles)
    pair_index = list(paired.pair_index)
    origins = [PoleOrigin.PENCIL] * len(poles)

    shapes = None
    if with_residues:
        raw = _residue_shapes(spectrum)
        zero = np.zeros((problem.dim, problem.dim), dtype=complex)
        shapes = [sum((raw[i] for i in members), zero.copy()) for members in paired.members]

    if kind == GreenKind.DRIVEN and include_inherited:
        inherited = compute_poles(problem, GreenKind.NON_DRIVEN, shift, include_inherited=False)
        next_pair = max(pair_index, default=-1) + 1
        for index in np.unique(inherited.pair_index):
            candidates = inherited.poles[inherited.pair_index == index]
            value = candidates[0]
            known = np.array(poles, dtype=complex)
            if known.size and np.min(np.abs(known - value)) <= numeric_policy.pole_match_tol * max(abs(value), problem.scale):
                continue
            poles.extend(candidates)
            pair_index.extend([next_pair] * len(candidates))
            origins.extend([PoleOrigin.INHERITED] * len(candidates))
            if shapes is not None:
                shapes.extend(np.zeros((problem.dim, problem.dim), dtype=complex) for _ in candidates)
            next_pair += 1
        poles, pair_index, origins, shapes = sort_pairs(poles, pair_index, origins, shapes)

    poles = np.array(poles, dtype=complex)
    residues, constant = None, None
    if shapes is not None:
        residues, constant = fit_residues(problem, kind, poles, shapes)
    logger.info(f"Found {len(poles)} {kind.value} poles of {problem.name}")
    return PoleSet(poles=poles, kind=kind, pair_index=np.array(pair_index), origins=origins,
                   residues=residues, constant=constant)


def rational_eval(poles: PoleSet, zeta: float) -> SuperOperator:
    """𝓖⁽⁰⁾ + Σ_r 𝓖⁽ʳ⁾/(ζ − ζ_r)"""
    if not poles.has_residues:
        raise MissingResiduesException("rational_eval needs a pole set computed with residues")
    distance = np.abs(zeta - poles.poles)
    close = distance <= numeric_policy.pole_proximity_tol * np.abs(poles.poles)
    if np.any(close):
        raise PoleProximityException(f"zeta={zeta} is within tolerance of pole {poles.poles[close][0]}")
    total = poles.constant.copy()
    for value, residue in zip(poles.poles, poles.residues):
        total = total + residue / (zeta - value)
    return SuperOperator(entries=total)


def extra_pole_scan(source: Source, zeta_grid: Sequence[float]) -> ExtraPoleScan:
    """|det[1 − 𝓧₀(ζ)]| on a real grid, a diagnostic for poles beyond the pencil"""
    problem = as_problem(source)
    values = []
    identity = np.eye(problem.dim)
    for zeta in zeta_grid:
        sign, logdet = np.linalg.slogdet(identity - transfer_matrix(problem, GreenKind.NON_DRIVEN, zeta))
        values.append(0.0 if sign == 0 else float(np.exp(logdet)))
    return ExtraPoleScan(zeta=np.asarray(zeta_grid, dtype=float), abs_determinant=np.array(values))
