"""Shared helpers: seeded random instances used across the test modules.

Tests import these directly (``from conftest import ...``); everything is
deterministic given the seed so the suite is reproducible run to run.
"""

from __future__ import annotations

import math

import hypothesis
import numpy as np

from clickstats import (
    FockExperiment,
    apply_channel,
    displace,
    haar_random_unitary,
    single_mode_squeezed,
    two_mode_squeezed,
    vacuum_state,
)

hypothesis.settings.register_profile(
    "ci", deadline=None, max_examples=25, derandomize=True
)
hypothesis.settings.load_profile("ci")


def complex_normal(rng, shape=()):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_matrix(n_rows: int, n_cols: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return complex_normal(rng, (n_rows, n_cols))


def random_symmetric(n: int, seed: int) -> np.ndarray:
    A = random_matrix(n, n, seed)
    return A + A.T


def random_hermitian(n: int, seed: int) -> np.ndarray:
    A = random_matrix(n, n, seed)
    return A + A.conj().T


def lossy_channel(M: int, eta: float, seed: int) -> np.ndarray:
    """Uniform loss eta composed with a Haar-random interferometer."""
    return np.sqrt(eta) * haar_random_unitary(M, seed)


def random_occupation(M: int, N: int, rng) -> tuple[int, ...]:
    """N photons dropped uniformly over M modes."""
    n = [0] * M
    for _ in range(N):
        n[int(rng.integers(M))] += 1
    return tuple(n)


def random_fock_experiment(M: int, N: int, seed: int, eta: float | None = None):
    """Random occupation of N photons through a Haar channel, lossy if eta set."""
    rng = np.random.default_rng(seed)
    T = haar_random_unitary(M, seed) if eta is None else lossy_channel(M, eta, seed)
    return FockExperiment(T, random_occupation(M, N, rng))


def random_gaussian_state(
    M: int,
    seed: int,
    strength: float = 0.3,
    displacement: float | None = None,
    eta: float | None = None,
):
    """Squeezer chain plus displacements; optionally a lossy channel after.

    strength scales every squeezing parameter, so small values give weakly
    excited states.  Displacements default to the sqrt(strength) scale so
    gamma-squared terms shrink at the same rate as O, which keeps series
    expansions in the excitation strength uniformly convergent.
    """
    if displacement is None:
        displacement = 0.4 * math.sqrt(strength)
    rng = np.random.default_rng(seed)
    state = vacuum_state(M)
    for i in range(M - 1):
        state = two_mode_squeezed(state, i, i + 1, strength * rng.uniform(0.5, 1.0))
    for i in range(M):
        state = single_mode_squeezed(state, i, strength * rng.uniform(0.3, 0.8))
        beta = displacement * (rng.normal() + 1j * rng.normal())
        state = displace(state, i, beta)
    if eta is not None:
        state = apply_channel(state, lossy_channel(M, eta, seed + 7))
    return state


def random_physical_O(M: int, seed: int, strength: float = 0.3):
    """(O, gamma, p0) of a random physical state, for matrix-function tests."""
    from clickstats import reduce as reduce_state

    rf = reduce_state(random_gaussian_state(M, seed, strength=strength, eta=0.85))
    return rf.O, rf.gamma, rf.p0
