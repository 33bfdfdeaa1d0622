"""Tests for the position-space walk: coin, shifts, evolution, probabilities."""

import itertools

import numpy as np
import pytest

from fivewalk import (
    Chirality,
    NormError,
    evolve,
    evolve_step,
    grover_coin,
    initial_state,
    mass_trajectory,
    probability_grid,
    shift_partition,
)

E_L = np.array([1, 0, 0, 0, 0], dtype=complex)
UNIFORM = np.full(5, 1 / np.sqrt(5), dtype=complex)

# One step from a delta at the origin with amplitude only in L: each partial
# matrix selects one coin row, so the five occupied sites carry the squared
# entries of column L of the coin:
#   (-1, 0) <- row L : (-3/5)^2 = 9/25      (1, 0) <- row R : (2/5)^2 = 4/25
#   (0, 0)  <- row O : 4/25   (0, -1) <- row D : 4/25   (0, 1) <- row U : 4/25
ONE_STEP_FROM_L = {
    (-1, 0): 9 / 25,
    (1, 0): 4 / 25,
    (0, 0): 4 / 25,
    (0, -1): 4 / 25,
    (0, 1): 4 / 25,
}


def test_chirality_order_is_l_r_o_d_u():
    assert [c.name for c in Chirality] == ["L", "R", "O", "D", "U"]
    assert sorted(int(c) for c in Chirality) == [0, 1, 2, 3, 4]


def test_grover_coin_entries():
    coin = grover_coin()
    assert coin[0, 0] == pytest.approx(-3 / 5, abs=0)
    assert coin[0, 1] == pytest.approx(2 / 5, abs=0)
    off_diag = coin[~np.eye(5, dtype=bool)]
    assert np.all(off_diag == 2 / 5)
    assert np.all(np.diag(coin) == -3 / 5)


def test_grover_coin_is_involution():
    coin = grover_coin()
    assert np.abs(coin @ coin - np.eye(5)).max() < 1e-15


def test_grover_coin_unitary():
    coin = grover_coin()
    assert np.abs(coin.conj().T @ coin - np.eye(5)).max() < 1e-12


def test_grover_coin_fixes_uniform_vector():
    coin = grover_coin()
    assert np.abs(coin @ UNIFORM - UNIFORM).max() < 1e-15


def test_grover_coin_permutation_symmetry():
    coin = grover_coin()
    for perm in itertools.permutations(range(5)):
        p = np.eye(5)[list(perm)]
        assert np.array_equal(p @ coin @ p.T, coin)


def test_shift_partition_rows():
    parts = shift_partition(grover_coin())
    u_r = parts[Chirality.R]
    expected_row = np.array([2 / 5, -3 / 5, 2 / 5, 2 / 5, 2 / 5])
    assert np.array_equal(u_r[1], expected_row.astype(complex))
    zeroed = np.delete(u_r, 1, axis=0)
    assert np.all(zeroed == 0)


def test_shift_partition_sums_to_coin():
    parts = shift_partition(grover_coin())
    assert np.array_equal(sum(parts), grover_coin())


def test_shift_partition_disjoint_rows():
    # the partial matrices occupy disjoint rows, so they vanish entrywise
    # against each other under direct (elementwise) multiplication
    parts = shift_partition(grover_coin())
    assert np.all(parts[Chirality.L] * parts[Chirality.R] == 0)
    for a, b in itertools.combinations(range(5), 2):
        assert np.all(parts[a] * parts[b] == 0)


def test_shift_partition_rejects_wrong_shape():
    with pytest.raises(ValueError):
        shift_partition(np.eye(3))


def test_initial_state_delta():
    state = initial_state(E_L)
    assert state.time == 0
    assert state.radius == 0
    grid = probability_grid(state)
    assert grid.value(0, 0) == 1.0
    assert grid.mass == 1.0


def test_initial_state_uniform_mass_one():
    state = initial_state(UNIFORM)
    assert abs(probability_grid(state).mass - 1.0) < 1e-12


def test_initial_state_rejects_unnormalized():
    with pytest.raises(NormError):
        initial_state([1, 1, 0, 0, 0])


def test_initial_state_caller_radius():
    state = initial_state(E_L, radius=3)
    assert state.radius == 3
    assert np.abs(state.spinor(0, 0) - E_L).max() == 0
    assert state.field.shape == (7, 7, 5)


def test_one_step_hand_distribution():
    grid = probability_grid(evolve_step(initial_state(E_L)))
    for (n1, n2), p in ONE_STEP_FROM_L.items():
        assert abs(grid.value(n1, n2) - p) < 1e-15
    # nothing outside the diamond
    for site in [(1, 1), (-1, -1), (1, -1), (-1, 1)]:
        assert grid.value(*site) == 0.0
    assert abs(grid.mass - 1.0) < 1e-15


def test_one_step_uniform_initial():
    # every coin row sums to 1, so each selected component is 1/sqrt(5)
    grid = probability_grid(evolve_step(initial_state(UNIFORM)))
    for site in [(-1, 0), (1, 0), (0, 0), (0, -1), (0, 1)]:
        assert abs(grid.value(*site) - 1 / 5) < 1e-15


def test_step_preserves_norm():
    state = initial_state(UNIFORM)
    for _ in range(5):
        state = evolve_step(state)
        assert abs(state.mass - 1.0) < 1e-12


def test_evolve_zero_steps_is_identity():
    state = initial_state(E_L)
    assert evolve(state, 0) is state


def test_evolve_two_steps_light_cone():
    state = evolve(initial_state(E_L), 2)
    grid = probability_grid(state)
    r = grid.radius
    for n1 in range(-r, r + 1):
        for n2 in range(-r, r + 1):
            if abs(n1) + abs(n2) > 2:
                assert grid.value(n1, n2) == 0.0


def test_evolve_ten_steps_mass():
    state = evolve(initial_state(E_L), 10)
    assert abs(state.mass - 1.0) < 1e-11


def test_evolve_matches_step_loop():
    rng = np.random.default_rng(11)
    spin = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    spin /= np.linalg.norm(spin)
    fast = evolve(initial_state(spin), 6)
    slow = initial_state(spin)
    for _ in range(6):
        slow = evolve_step(slow)
    assert fast.time == slow.time == 6
    assert np.abs(fast.field - slow.field).max() < 1e-14


def test_mass_trajectory_unitarity():
    masses = mass_trajectory(initial_state(UNIFORM), 100)
    assert masses.shape == (100,)
    assert np.abs(masses - 1.0).max() < 1e-12
    assert np.abs(np.diff(masses)).max() < 1e-12


def test_light_cone_exact_zeros_long_run():
    rng = np.random.default_rng(7)
    spin = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    spin /= np.linalg.norm(spin)
    steps = 200
    state = evolve(initial_state(spin), steps)
    r = state.radius
    offsets = np.arange(-r, r + 1)
    outside = np.add.outer(np.abs(offsets), np.abs(offsets)) > steps
    assert np.all(state.field[outside] == 0)


def test_probability_grid_nonnegative():
    state = evolve(initial_state(UNIFORM), 7)
    grid = probability_grid(state)
    assert np.all(grid.values >= 0)
    assert grid.mass <= 1 + 1e-10


def test_custom_coin_matches_default():
    # passing the Grover matrix explicitly exercises the generic path
    base = initial_state(E_L)
    default = evolve(base, 5)
    explicit = evolve(base, 5, coin=grover_coin())
    assert np.abs(default.field - explicit.field).max() < 1e-14


def test_custom_unitary_coin_preserves_mass():
    rng = np.random.default_rng(5)
    raw = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    q, _ = np.linalg.qr(raw)
    state = evolve(initial_state(E_L), 8, coin=q)
    assert abs(state.mass - 1.0) < 1e-11


def test_state_field_is_read_only():
    state = initial_state(E_L)
    with pytest.raises(ValueError):
        state.field[0, 0, 0] = 1.0
