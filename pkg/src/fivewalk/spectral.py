"""Quasi-momentum analysis of the walk's one-step operator.

Fourier transforming the lattice update turns it into a 5x5 unitary at each
quasi-momentum k = (k1, k2) in (-pi, pi]^2: a diagonal matrix of shift phases
times the Grover coin.  This module diagonalizes that operator, exposes the
band structure, and verifies the flat band at eigenvalue 1 that the walk's
localization rests on.  A 3x3 one-dimensional analogue with known closed-form
eigenphases is included as a quantitative validation fixture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DecompositionError, DegeneracyError, RankError
from .walk import grover_coin

#: eigenphases closer than this are treated as one degenerate cluster
PHASE_CLUSTER_TOL = 1e-8
#: hard failure threshold on the spectral reconstruction residual
RESIDUAL_TOL = 1e-8
#: the eigenvalue-1 band counts as simple when the second-closest phase is
#: farther than this from 1 on the unit circle
FLAT_SIMPLE_TOL = 1e-6

# internal quality bar above which a batched node is recomputed one-by-one
_BATCH_QUALITY_TOL = 1e-12


@dataclass(frozen=True)
class MomentumPoint:
    """Quasi-momentum with both components in (-pi, pi]."""

    k1: float
    k2: float

    def __post_init__(self):
        for name, value in (("k1", self.k1), ("k2", self.k2)):
            if not (-math.pi < value <= math.pi):
                raise ValueError(f"{name}={value!r} outside (-pi, pi]")


def _as_point(k) -> MomentumPoint:
    if isinstance(k, MomentumPoint):
        return k
    k1, k2 = k
    return MomentumPoint(float(k1), float(k2))


@dataclass(frozen=True, eq=False)
class MomentumOperator:
    """The 5x5 one-step operator at a fixed quasi-momentum."""

    k: MomentumPoint
    entries: np.ndarray


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenphases and orthonormal eigenvectors of a momentum operator.

    ``phases`` are sorted ascending in (-pi, pi] (ties at the branch cut
    reported as +pi); column j of ``vectors`` belongs to phases[j].  The
    ``normalization`` constants are identically 1 after orthonormalization.
    """

    k: MomentumPoint
    phases: np.ndarray
    vectors: np.ndarray
    normalization: np.ndarray = field(default_factory=lambda: np.ones(5))


@dataclass(frozen=True)
class BandFunctions:
    """The four trigonometric aggregates entering the band structure."""

    a: float
    b: float
    c: float
    d: float


def shift_phases(k1: float, k2: float) -> np.ndarray:
    """Diagonal of the momentum-space shift: (e^{ik1}, e^{-ik1}, 1, e^{ik2}, e^{-ik2})."""
    return np.array(
        [
            np.exp(1j * k1),
            np.exp(-1j * k1),
            1.0,
            np.exp(1j * k2),
            np.exp(-1j * k2),
        ],
        dtype=np.complex128,
    )


def fourier_step_operator(k) -> MomentumOperator:
    """Momentum-space step operator: diag(shift phases) times the Grover coin."""
    point = _as_point(k)
    entries = shift_phases(point.k1, point.k2)[:, None] * grover_coin()
    return MomentumOperator(k=point, entries=entries)


def gram_schmidt(vectors, tol: float = 1e-12) -> list[np.ndarray]:
    """Orthonormalize ``vectors`` by classical Gram-Schmidt, reorthogonalized once.

    Raises RankError if any post-projection norm falls below ``tol``.
    """
    basis: list[np.ndarray] = []
    for index, vec in enumerate(vectors):
        w = np.array(vec, dtype=np.complex128)
        for _ in range(2):
            coeffs = [q.conj() @ w for q in basis]
            for coeff, q in zip(coeffs, basis):
                w = w - coeff * q
        norm = np.linalg.norm(w)
        if norm < tol:
            raise RankError(
                f"vector {index} is dependent on its predecessors "
                f"(post-projection norm {norm:.3e} < {tol})"
            )
        basis.append(w / norm)
    return basis


def _wrap_phases(phases: np.ndarray) -> np.ndarray:
    """Map phases into (-pi, pi], reporting the branch point as +pi."""
    return np.where(phases <= -np.pi, phases + 2.0 * np.pi, phases)


def _cluster_groups(phases: np.ndarray, tol: float) -> list[list[int]]:
    """Group indices of sorted phases whose circular separation is below tol."""
    groups: list[list[int]] = [[0]]
    for i in range(1, phases.size):
        if phases[i] - phases[i - 1] < tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    # the phase circle wraps at +/-pi, so the first and last runs may be one cluster
    if len(groups) > 1 and (phases[0] + 2.0 * np.pi) - phases[-1] < tol:
        groups[0] = groups.pop() + groups[0]
    return groups


def _fix_column_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first entry of largest modulus is real >= 0.

    Moduli within one part in 1e12 of the maximum count as ties and the first
    such entry wins; several eigenvectors here have exactly tied moduli, and
    without the tolerance the pivot would follow roundoff noise.
    """
    moduli = np.abs(vectors)
    top = moduli.max(axis=-2, keepdims=True)
    pivot = np.argmax(moduli >= top * (1.0 - 1e-12), axis=-2)
    anchor = np.take_along_axis(vectors, pivot[..., None, :], axis=-2)
    rot = anchor.conj() / np.abs(anchor)
    return vectors * rot


def _orthonormal_eigensystem(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sorted eigenphases and orthonormal eigenvectors of a unitary matrix.

    The complex Schur form of a normal matrix has a diagonal triangular
    factor up to roundoff, so the Schur basis is an orthonormal eigenbasis.
    Clustered phases are re-orthonormalized by Gram-Schmidt regardless.
    """
    t, q = scipy.linalg.schur(matrix, output="complex")
    phases = _wrap_phases(np.angle(np.diagonal(t)))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    vectors = np.ascontiguousarray(q[:, order])
    for group in _cluster_groups(phases, PHASE_CLUSTER_TOL):
        if len(group) > 1:
            ortho = gram_schmidt([vectors[:, i] for i in group], tol=1e-8)
            for i, vec in zip(group, ortho):
                vectors[:, i] = vec
    return phases, _fix_column_phases(vectors)


def _reconstruction_residual(matrix, phases, vectors) -> float:
    rebuilt = (vectors * np.exp(1j * phases)) @ vectors.conj().T
    return float(np.abs(rebuilt - matrix).max())


def eigendecompose(op: MomentumOperator) -> SpectralDecomposition:
    """Diagonalize a momentum operator into phases and orthonormal eigenvectors.

    Raises DecompositionError if the input is not unitary within 1e-10 or if
    the spectral reconstruction residual exceeds 1e-8.
    """
    entries = np.asarray(op.entries, dtype=np.complex128)
    unitary_defect = np.abs(entries.conj().T @ entries - np.eye(5)).max()
    if unitary_defect > 1e-10:
        raise DecompositionError(
            f"operator at k={op.k} is not unitary (defect {unitary_defect:.3e})"
        )
    phases, vectors = _orthonormal_eigensystem(entries)
    residual = _reconstruction_residual(entries, phases, vectors)
    if residual > RESIDUAL_TOL:
        raise DecompositionError(
            f"spectral reconstruction residual {residual:.3e} exceeds {RESIDUAL_TOL}"
        )
    return SpectralDecomposition(k=op.k, phases=phases, vectors=vectors)


def band_functions(k) -> BandFunctions:
    """Evaluate the four band aggregates at ``k`` exactly as printed.

    The c and d expressions negate each other term by term, so c + d = 0
    identically.
    """
    point = _as_point(k)
    k1, k2 = point.k1, point.k2
    a = 3.0 * np.cos(k1) + 3.0 * np.cos(k2) + 4.0
    b = np.cos(k1 - k2) + np.cos(k1 + k2) + 4.0 * np.cos(k1) + 4.0 * np.cos(k2) + 5.0
    c = (
        2.0 * np.cos(k1 - k2)
        + 2.0 * np.cos(k1 + k2)
        + 32.0 * np.cos(k1)
        - 9.0 * np.cos(2.0 * k1)
        + 32.0 * np.cos(k2)
        - 9.0 * np.cos(2.0 * k2)
        - 50.0
    )
    d = (
        -2.0 * np.cos(k1 - k2)
        - 2.0 * np.cos(k1 + k2)
        - 32.0 * np.cos(k1)
        + 9.0 * np.cos(2.0 * k1)
        - 32.0 * np.cos(k2)
        + 9.0 * np.cos(2.0 * k2)
        + 50.0
    )
    return BandFunctions(a=float(a), b=float(b), c=float(c), d=float(d))


def flat_band_residual(k) -> float:
    """Distance of the closest eigenvalue to 1: min_j |e^{i theta_j} - 1|."""
    dec = eigendecompose(fourier_step_operator(k))
    return float(np.abs(np.exp(1j * dec.phases) - 1.0).min())


def flat_band_projector(k) -> np.ndarray:
    """Rank-one projector onto the eigenphase-0 eigenvector at ``k``.

    Raises DegeneracyError when the eigenvalue-1 eigenspace is not
    one-dimensional (second-closest phase within FLAT_SIMPLE_TOL of 1).
    """
    dec = eigendecompose(fourier_step_operator(k))
    residuals = np.abs(np.exp(1j * dec.phases) - 1.0)
    order = np.argsort(residuals, kind="stable")
    if residuals[order[1]] <= FLAT_SIMPLE_TOL:
        raise DegeneracyError(
            f"eigenvalue 1 is not simple at k={_as_point(k)}: "
            f"second residual {residuals[order[1]]:.3e}"
        )
    vec = dec.vectors[:, order[0]]
    return np.outer(vec, vec.conj())


def _operators_many(kpoints: np.ndarray) -> np.ndarray:
    """Stack of momentum operators for an (N, 2) array of k-points."""
    k1 = kpoints[:, 0]
    k2 = kpoints[:, 1]
    diag = np.stack(
        [
            np.exp(1j * k1),
            np.exp(-1j * k1),
            np.ones_like(k1, dtype=np.complex128),
            np.exp(1j * k2),
            np.exp(-1j * k2),
        ],
        axis=-1,
    )
    return diag[:, :, None] * grover_coin()


def eigenphases_many(kpoints: np.ndarray) -> np.ndarray:
    """Sorted eigenphases at each of an (N, 2) array of k-points."""
    ops = _operators_many(np.asarray(kpoints, dtype=np.float64))
    phases = _wrap_phases(np.angle(np.linalg.eigvals(ops)))
    phases.sort(axis=1)
    return phases


def decompose_many(kpoints: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batched orthonormal eigensystems at many k-points.

    Returns (phases, vectors) of shapes (N, 5) and (N, 5, 5); column j of
    vectors[i] belongs to phases[i, j].  Nodes where the batched solver
    leaves degenerate clusters or fails the orthonormality/reconstruction
    quality bar are recomputed one at a time.
    """
    kpoints = np.asarray(kpoints, dtype=np.float64)
    ops = _operators_many(kpoints)
    w, v = np.linalg.eig(ops)
    phases = _wrap_phases(np.angle(w))
    order = np.argsort(phases, axis=1, kind="stable")
    phases = np.take_along_axis(phases, order, axis=1)
    vectors = np.take_along_axis(v, order[:, None, :], axis=2)
    vectors = _fix_column_phases(vectors)

    gaps = np.diff(phases, axis=1)
    circular = (phases[:, 0] + 2.0 * np.pi) - phases[:, -1]
    clustered = (gaps < PHASE_CLUSTER_TOL).any(axis=1) | (circular < PHASE_CLUSTER_TOL)

    adjoint = vectors.conj().transpose(0, 2, 1)
    gram_defect = np.abs(adjoint @ vectors - np.eye(5)).max(axis=(1, 2))
    rebuilt = (vectors * np.exp(1j * phases)[:, None, :]) @ adjoint
    residual = np.abs(rebuilt - ops).max(axis=(1, 2))

    redo = np.flatnonzero(
        clustered | (gram_defect > _BATCH_QUALITY_TOL) | (residual > _BATCH_QUALITY_TOL)
    )
    for i in redo:
        phases[i], vectors[i] = _orthonormal_eigensystem(ops[i])
        if _reconstruction_residual(ops[i], phases[i], vectors[i]) > RESIDUAL_TOL:
            raise DecompositionError(
                f"decomposition failed at k={tuple(kpoints[i])}"
            )
    return phases, vectors


def band_surface(grid_size: int) -> np.ndarray:
    """Tabulate the five eigenphases on a uniform grid over (-pi, pi]^2.

    Returns a (grid_size^2, 7) array with rows (k1, k2, theta_1..theta_5),
    phases ascending within each row, rows ordered lexicographically by
    (k1, k2).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    axis = -np.pi + 2.0 * np.pi * np.arange(1, grid_size + 1) / grid_size
    kk1, kk2 = np.meshgrid(axis, axis, indexing="ij")
    kpoints = np.column_stack([kk1.ravel(), kk2.ravel()])
    phases = eigenphases_many(kpoints)
    return np.column_stack([kpoints, phases])


def three_state_operator(k: float) -> np.ndarray:
    """One-dimensional three-state analogue: diag(e^{ik}, 1, e^{-ik}) x 3x3 Grover."""
    if not (-math.pi < k <= math.pi):
        raise ValueError(f"k={k!r} outside (-pi, pi]")
    coin3 = np.full((3, 3), 2.0 / 3.0, dtype=np.complex128)
    np.fill_diagonal(coin3, -1.0 / 3.0)
    diag = np.array([np.exp(1j * k), 1.0, np.exp(-1j * k)], dtype=np.complex128)
    return diag[:, None] * coin3


def three_state_closed_forms(k: float) -> tuple[float, float]:
    """Literature closed forms for the non-flat eigenphases of the 3-state walk.

    Returns (cos theta_k, |sin theta_k|) with
    cos theta_k = -(2 + cos k) / 3 and
    sin theta_k = sqrt((5 + cos k)(1 - cos k)) / 3.
    """
    c = math.cos(k)
    return (-(2.0 + c) / 3.0, math.sqrt((5.0 + c) * (1.0 - c)) / 3.0)


def three_state_phase_check(samples: int) -> float:
    """Worst cosine residual of the 3-state closed form over uniform k samples.

    Samples are midpoints of (-pi, pi]; at each, the two non-flat eigenphases
    are compared against cos theta = -(2 + cos k) / 3 and the largest
    absolute deviation over all samples is returned.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    worst = 0.0
    for i in range(samples):
        k = -np.pi + 2.0 * np.pi * (i + 0.5) / samples
        eigvals = np.linalg.eigvals(three_state_operator(k))
        flat = np.argmin(np.abs(eigvals - 1.0))
        rest = np.delete(eigvals, flat)
        target, _ = three_state_closed_forms(k)
        worst = max(worst, float(np.abs(rest.real - target).max()))
    return worst
