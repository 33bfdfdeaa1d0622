"""Brillouin-zone quadrature reconstruction of the position-space state.

The lattice state at time t is the normalized double integral over
(-pi, pi]^2 of the momentum-space propagator applied to the initial spinor,
times the plane-wave factor e^{i(k1 n1 + k2 n2)}.  The integral is evaluated
by the midpoint rule on a uniform n x n grid; because the integrand is a
trigonometric polynomial of degree bounded by t plus the site offset, the
rule is exact once n exceeds that degree, and converges rapidly before that.
Band-restricted versions of the same sum isolate the flat band from the
dispersive rest of the spectrum.

The per-node eigensystems are the dominant cost, so they are computed once
per grid size and cached; every site and time then reuses them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DegeneracyError, NormError
from .spectral import FLAT_SIMPLE_TOL, decompose_many
from .walk import as_spinor, evolve, initial_state

#: band labels: 1 is the flat band, 2..5 the rest ordered by |theta| then sign
ALL_BANDS = frozenset({1, 2, 3, 4, 5})
FLAT_BAND = frozenset({1})
NONFLAT_BANDS = frozenset({2, 3, 4, 5})

#: nodes flagged degenerate may be excluded only below this fraction
_MAX_EXCLUDED_FRACTION = 1e-3


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint rule on a uniform n x n grid over (-pi, pi]^2.

    ``n`` must be even: odd grids would place the central node exactly on
    k = (0, 0), the one symmetry point the rule is meant to avoid.
    """

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("quadrature grid needs at least 2 points per axis")
        if self.n % 2:
            raise ValueError(
                "quadrature grid size must be even so midpoint nodes avoid k = (0, 0)"
            )

    @property
    def axis_nodes(self) -> np.ndarray:
        """Midpoints of the n uniform cells of (-pi, pi]."""
        return -np.pi + (2.0 * np.pi / self.n) * (np.arange(self.n) + 0.5)

    @property
    def node_count(self) -> int:
        return self.n * self.n

    @property
    def weight(self) -> float:
        """Quadrature weight per node; all weights sum to 4 pi^2."""
        return (2.0 * np.pi / self.n) ** 2

    @property
    def nodes(self) -> np.ndarray:
        """All n^2 nodes as an (N, 2) array, ordered lexicographically."""
        kk1, kk2 = np.meshgrid(self.axis_nodes, self.axis_nodes, indexing="ij")
        return np.column_stack([kk1.ravel(), kk2.ravel()])


class _GridSpectra(NamedTuple):
    k1: np.ndarray          # (N,)
    k2: np.ndarray          # (N,)
    phases: np.ndarray      # (N, 5)
    vectors: np.ndarray     # (N, 5, 5), column j belongs to phases[:, j]
    band_order: np.ndarray  # (N, 5), band label l maps to column band_order[:, l-1]
    flat_gap: np.ndarray    # (N,), |e^{i theta} - 1| of the second-closest phase


@lru_cache(maxsize=3)
def _grid_spectra(n: int) -> _GridSpectra:
    grid = QuadratureGrid(n)
    nodes = grid.nodes
    phases, vectors = decompose_many(nodes)
    # primary key |theta| puts the flat band first; ties break toward -theta
    band_order = np.lexsort((phases, np.abs(phases)), axis=1)
    second = np.take_along_axis(phases, band_order[:, 1:2], axis=1)[:, 0]
    flat_gap = np.abs(np.exp(1j * second) - 1.0)
    return _GridSpectra(
        k1=nodes[:, 0],
        k2=nodes[:, 1],
        phases=phases,
        vectors=vectors,
        band_order=band_order,
        flat_gap=flat_gap,
    )


def _validate_bands(bands) -> frozenset[int]:
    sel = frozenset(int(b) for b in bands)
    if not sel:
        raise ValueError("band selection must be non-empty")
    if not sel <= ALL_BANDS:
        raise ValueError(f"band labels must be within 1..5, got {sorted(sel)}")
    return sel


def _checked_spinor(initial) -> np.ndarray:
    spin = as_spinor(initial)
    norm_sq = float(np.vdot(spin, spin).real)
    if abs(norm_sq - 1.0) > 1e-9:
        raise NormError(f"initial squared norm is {norm_sq!r}, expected 1")
    return spin


def _node_amplitudes(initial, bands, t: int, grid: QuadratureGrid):
    """Per-node propagated spinors restricted to the selected bands.

    Returns (amps, factor): an (N, 5) array of integrand spinors (before the
    plane-wave factor) and the weight rescaling that redistributes the mass
    of any excluded degenerate nodes.  Exclusion applies only to proper band
    subsets, where telling the flat band apart matters; full-spectrum sums
    are band-agnostic.  More than 0.1% degenerate nodes fails loudly.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    spin = _checked_spinor(initial)
    sel = _validate_bands(bands)
    spectra = _grid_spectra(grid.n)
    count = spectra.phases.shape[0]

    mask = np.zeros((count, 5), dtype=bool)
    rows = np.arange(count)
    for label in sel:
        mask[rows, spectra.band_order[:, label - 1]] = True

    factor = 1.0
    if sel != ALL_BANDS:
        bad = spectra.flat_gap <= FLAT_SIMPLE_TOL
        n_bad = int(bad.sum())
        if n_bad:
            if n_bad >= _MAX_EXCLUDED_FRACTION * count:
                raise DegeneracyError(
                    f"{n_bad} of {count} quadrature nodes have a degenerate "
                    "flat band; refusing to redistribute that much weight"
                )
            mask[bad] = False
            factor = count / (count - n_bad)

    coeff = np.einsum("nlj,l->nj", spectra.vectors.conj(), spin)
    weight = np.exp(1j * spectra.phases * t) * coeff
    weight[~mask] = 0.0
    amps = np.einsum("nj,nlj->nl", weight, spectra.vectors)
    return amps, factor


def _site_value(amps: np.ndarray, spectra: _GridSpectra, site, factor: float) -> np.ndarray:
    n1, n2 = site
    phase = np.exp(1j * (spectra.k1 * n1 + spectra.k2 * n2))
    return (phase @ amps) * (factor / amps.shape[0])


def _position_field(
    amps: np.ndarray, grid: QuadratureGrid, radius: int, factor: float
) -> np.ndarray:
    """Quadrature sum at every site of the square |n1|, |n2| <= radius.

    The plane-wave factor separates over the two axes, so the node sum is two
    successive tensor contractions instead of a per-site loop.
    """
    per_axis = amps.reshape(grid.n, grid.n, 5)
    offsets = np.arange(-radius, radius + 1)
    waves = np.exp(1j * np.outer(offsets, grid.axis_nodes))
    partial = np.einsum("ma,abl->mbl", waves, per_axis)
    field = np.einsum("nb,mbl->mnl", waves, partial)
    return field * (factor / grid.node_count)


def spectral_wavefunction(initial, site, t: int, grid: QuadratureGrid) -> np.ndarray:
    """Reconstruct the full five-component amplitude at one site and time."""
    amps, factor = _node_amplitudes(initial, ALL_BANDS, t, grid)
    return _site_value(amps, _grid_spectra(grid.n), site, factor)


def component_wavefunction(
    bands, initial, site, t: int, grid: QuadratureGrid
) -> np.ndarray:
    """Same reconstruction restricted to the selected band labels (1 = flat)."""
    amps, factor = _node_amplitudes(initial, bands, t, grid)
    return _site_value(amps, _grid_spectra(grid.n), site, factor)


def wavefunction_field(
    bands, initial, t: int, grid: QuadratureGrid, radius: int
) -> np.ndarray:
    """Band-restricted reconstruction on the whole square |n1|, |n2| <= radius.

    Returns a (2 radius + 1, 2 radius + 1, 5) array indexed like
    LatticeState.field.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    amps, factor = _node_amplitudes(initial, bands, t, grid)
    return _position_field(amps, grid, radius, factor)


def reconstruction_error(initial, t: int, radius: int, grid: QuadratureGrid) -> float:
    """Worst componentwise gap between quadrature and direct evolution.

    The maximum runs over every site of the light-cone diamond |n1|+|n2| <= t
    and all five components.  ``radius`` must cover the diamond (radius >= t).
    """
    if radius < t:
        raise ValueError("radius must be at least t to contain the light cone")
    direct = evolve(initial_state(initial), t)
    spectral = wavefunction_field(ALL_BANDS, initial, t, grid, direct.radius)
    offsets = np.arange(-direct.radius, direct.radius + 1)
    inside = np.add.outer(np.abs(offsets), np.abs(offsets)) <= t
    return float(np.abs(spectral - direct.field)[inside].max())
