"""Position-space dynamics of the two-dimensional five-state coined walk.

A walker on the square lattice carries five internal amplitudes, one per
direction of motion (left, right, stay, down, up).  Each step applies the
5x5 Grover coin to the internal space and then shifts every component to the
neighbor it selects.  States are stored on an origin-centered square that
grows with time, so the diamond |n1| + |n2| <= t always fits and no boundary
condition is ever exercised.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _engine
from .errors import NormError

#: tolerance on the squared norm of user-supplied initial amplitudes
INITIAL_NORM_TOL = 1e-9


class Chirality(IntEnum):
    """Internal coin directions, in the fixed component order (L, R, O, D, U)."""

    L = 0
    R = 1
    O = 2
    D = 3
    U = 4


def grover_coin() -> np.ndarray:
    """Return the 5x5 Grover coin: diagonal -3/5, off-diagonal 2/5.

    The matrix is real symmetric and an involution, so it is unitary.
    """
    coin = np.full((5, 5), 2.0 / 5.0, dtype=np.complex128)
    np.fill_diagonal(coin, -3.0 / 5.0)
    return coin


def shift_partition(coin: np.ndarray) -> tuple[np.ndarray, ...]:
    """Split a coin into its five single-row partial step matrices.

    Matrix X of the result keeps row X of ``coin`` and zeroes the others, so
    applying it selects the X component after the coin superposition.  The
    five matrices sum to ``coin``.
    """
    coin = np.asarray(coin, dtype=np.complex128)
    if coin.shape != (5, 5):
        raise ValueError(f"coin must be 5x5, got {coin.shape}")
    parts = []
    for row in range(5):
        part = np.zeros((5, 5), dtype=np.complex128)
        part[row] = coin[row]
        parts.append(part)
    return tuple(parts)


def as_spinor(amplitudes) -> np.ndarray:
    """Coerce to a length-5 complex vector of finite amplitudes."""
    spin = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if spin.shape != (5,):
        raise ValueError(f"expected 5 amplitudes, got shape {spin.shape}")
    if not np.isfinite(spin.view(np.float64)).all():
        raise ValueError("amplitudes must be finite")
    return spin


@dataclass(frozen=True, eq=False)
class LatticeState:
    """Wave function on the square n1, n2 in [-radius, radius] at time ``time``.

    ``field[n1 + radius, n2 + radius, c]`` is the amplitude of chirality c.
    States built by this module satisfy radius >= time and vanish identically
    outside the diamond |n1| + |n2| <= time.
    """

    radius: int
    time: int
    field: np.ndarray

    def __post_init__(self):
        size = 2 * self.radius + 1
        if self.field.shape != (size, size, 5):
            raise ValueError(
                f"field shape {self.field.shape} does not match radius {self.radius}"
            )
        if self.radius < self.time:
            raise ValueError("radius must be at least the elapsed time")
        self.field.setflags(write=False)

    def spinor(self, n1: int, n2: int) -> np.ndarray:
        """Amplitudes at site (n1, n2)."""
        return self.field[n1 + self.radius, n2 + self.radius]

    @property
    def mass(self) -> float:
        """Total probability."""
        return float(np.vdot(self.field, self.field).real)


@dataclass(frozen=True, eq=False)
class ProbabilityGrid:
    """Per-site probabilities on the square |n1|, |n2| <= radius."""

    radius: int
    values: np.ndarray

    def __post_init__(self):
        size = 2 * self.radius + 1
        if self.values.shape != (size, size):
            raise ValueError(
                f"values shape {self.values.shape} does not match radius {self.radius}"
            )
        self.values.setflags(write=False)

    def value(self, n1: int, n2: int) -> float:
        return float(self.values[n1 + self.radius, n2 + self.radius])

    @property
    def mass(self) -> float:
        return float(self.values.sum())


def initial_state(amplitudes, radius: int = 0) -> LatticeState:
    """Place a normalized spinor at the origin of an otherwise empty lattice.

    Raises NormError if the squared norm of ``amplitudes`` deviates from 1 by
    more than 1e-9.
    """
    spin = as_spinor(amplitudes)
    norm_sq = float(np.vdot(spin, spin).real)
    if abs(norm_sq - 1.0) > INITIAL_NORM_TOL:
        raise NormError(
            f"initial squared norm is {norm_sq!r}, expected 1 within {INITIAL_NORM_TOL}"
        )
    if radius < 0:
        raise ValueError("radius must be non-negative")
    size = 2 * radius + 1
    field = np.zeros((size, size, 5), dtype=np.complex128)
    field[radius, radius] = spin
    return LatticeState(radius=radius, time=0, field=field)


def _coin_mix(field: np.ndarray, coin: np.ndarray | None) -> np.ndarray:
    if coin is None:
        return _engine._grover_mix(field)
    coin = np.asarray(coin, dtype=np.complex128)
    size = field.shape[0]
    return (field.reshape(-1, 5) @ coin.T).reshape(size, size, 5)


def evolve_step(state: LatticeState, coin: np.ndarray | None = None) -> LatticeState:
    """Advance one time step, growing the stored square by one in radius.

    With ``coin`` omitted the Grover coin is used.  Total probability is
    preserved and no amplitude is written outside the light cone.
    """
    if coin is None:
        field, _ = _engine.grover_step(state.field, state.time)
    else:
        field = _engine.scatter_components(_coin_mix(state.field, coin))
    return LatticeState(radius=state.radius + 1, time=state.time + 1, field=field)


def evolve(state: LatticeState, steps: int, coin: np.ndarray | None = None) -> LatticeState:
    """Advance ``steps`` time steps (0 returns the state unchanged)."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    if coin is None:
        field = state.field
        for s in range(steps):
            field, _ = _engine.grover_step(field, state.time + s)
        if steps == 0:
            return state
        return LatticeState(
            radius=state.radius + steps, time=state.time + steps, field=field
        )
    for _ in range(steps):
        state = evolve_step(state, coin)
    return state


def mass_trajectory(
    state: LatticeState, steps: int, coin: np.ndarray | None = None
) -> np.ndarray:
    """Total probability after each of ``steps`` successive steps.

    Useful for norm-conservation checks on long runs without retaining the
    intermediate states.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    masses = np.empty(steps, dtype=np.float64)
    if coin is None:
        field = state.field
        for s in range(steps):
            field, masses[s] = _engine.grover_step(field, state.time + s)
    else:
        for s in range(steps):
            state = evolve_step(state, coin)
            masses[s] = state.mass
    return masses


def probability_grid(state: LatticeState) -> ProbabilityGrid:
    """Per-site probability P(n1, n2) = sum over chiralities of |amplitude|^2."""
    values = np.einsum("ijc,ijc->ij", state.field, state.field.conj()).real
    return ProbabilityGrid(radius=state.radius, values=values)
