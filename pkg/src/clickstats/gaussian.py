"""Gaussian states: construction, evolution, and detection probabilities.

States live in the ladder-operator ordering ``(a_1 .. a_M, a_1^dag ..
a_M^dag)`` with the Husimi covariance convention in which the vacuum has
``Sigma = I``.  Threshold probabilities reduce to ``ltor`` on ``O = I -
Sigma^-1`` and photon-number probabilities to the loop Hafnian of ``X O``
with loop weights ``gamma = (Sigma^-1 alpha)*``.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg, matfunc
from .errors import CapExceeded, DimensionMismatch, InvalidInput, NotPositiveDefinite
from .fock import factorial_product
from .matfunc import ProbabilityResult, clamp_probability, real_part_checked

logger = logging.getLogger(__name__)

DISTRIBUTION_MODE_CAP = 16
PHOTON_NUMBER_CAP = 12
# Vacuum-noise floor of the Husimi covariance in this convention; squeezed
# states approach it from above, so violations are logged rather than fatal.
UNCERTAINTY_BOUND = 0.5


@dataclass(frozen=True)
class GaussianState:
    """Husimi covariance ``sigma`` (2M x 2M) and means ``alpha`` (length 2M).

    Validated invariants: ``sigma`` Hermitian positive definite with the
    block-conjugation symmetry ``X sigma* X = sigma``, and ``alpha* = X
    alpha``, where ``X`` swaps the annihilation and creation blocks.
    """

    sigma: np.ndarray
    alpha: np.ndarray
    M: int = field(init=False)

    def __post_init__(self) -> None:
        sigma = linalg.as_complex_matrix(self.sigma, "sigma").copy()
        n = linalg.require_square(sigma, "sigma")
        if n == 0 or n % 2:
            raise DimensionMismatch(f"sigma must be 2M x 2M with M >= 1, got {sigma.shape}")
        M = n // 2
        linalg.check_hermitian(sigma, linalg.TAU_HERM, "sigma")
        eigs = np.linalg.eigvalsh(sigma)
        if eigs[0] <= 0.0:
            raise NotPositiveDefinite(f"sigma has non-positive eigenvalue {eigs[0]:.6e}")
        if eigs[0] < UNCERTAINTY_BOUND - 1e-9:
            logger.warning(
                "sigma eigenvalue %.6f is below the vacuum-noise bound %.1f; "
                "the state may be unphysical",
                eigs[0],
                UNCERTAINTY_BOUND,
            )
        swapped = np.block([[sigma[M:, M:], sigma[M:, :M]], [sigma[:M, M:], sigma[:M, :M]]])
        defect = float(np.max(np.abs(swapped.conj() - sigma)))
        if defect > linalg.TAU_HERM:
            raise InvalidInput(
                f"sigma violates the block-conjugation symmetry X sigma* X = sigma by {defect:.3e}"
            )
        alpha = linalg.as_complex_vector(self.alpha, "alpha").copy()
        if alpha.shape != (n,):
            raise DimensionMismatch(f"alpha must have length {n}, got {alpha.shape}")
        defect = float(np.max(np.abs(alpha.conj() - np.concatenate([alpha[M:], alpha[:M]]))))
        if defect > linalg.TAU_HERM:
            raise InvalidInput(f"alpha violates alpha* = X alpha by {defect:.3e}")
        sigma.flags.writeable = False
        alpha.flags.writeable = False
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "M", M)


@dataclass(frozen=True)
class ReducedForm:
    """The (O, gamma) reduction of a state plus its all-vacuum probability."""

    O: np.ndarray
    gamma: np.ndarray
    p0: float


def vacuum_state(M: int) -> GaussianState:
    if M < 1:
        raise InvalidInput("M must be at least 1")
    return GaussianState(np.eye(2 * M, dtype=np.complex128), np.zeros(2 * M, dtype=np.complex128))


def displace(state: GaussianState, mode: int, beta: complex) -> GaussianState:
    """Shift the means of one mode by (beta, beta*); covariance is untouched."""
    linalg.check_mode_set([mode], state.M, "mode")
    alpha = state.alpha.copy()
    alpha[mode] += beta
    alpha[mode + state.M] += np.conj(beta)
    return GaussianState(state.sigma, alpha)


def _apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    # Husimi covariances carry a +I/2 offset over the symmetrized moments,
    # hence the (I - S S^dag)/2 correction alongside the congruence.
    n = 2 * state.M
    sigma = S @ state.sigma @ S.conj().T + 0.5 * (np.eye(n) - S @ S.conj().T)
    return GaussianState(sigma, S @ state.alpha)


def two_mode_squeezed(state: GaussianState, i: int, j: int, t: float) -> GaussianState:
    """Apply the two-mode squeezer between modes i and j with parameter t.

    Acting on vacuum this puts mean photon number sinh(t)^2 in each of the
    two modes, with perfectly correlated photon numbers.
    """
    if i == j:
        raise InvalidInput("two-mode squeezing needs two distinct modes")
    linalg.check_mode_set([i, j], state.M, "modes")
    M = state.M
    c, s = math.cosh(t), math.sinh(t)
    S = np.eye(2 * M, dtype=np.complex128)
    S[i, i] = S[j, j] = S[i + M, i + M] = S[j + M, j + M] = c
    S[i, j + M] = S[j, i + M] = S[i + M, j] = S[j + M, i] = s
    return _apply_symplectic(state, S)


def single_mode_squeezed(state: GaussianState, mode: int, r: float) -> GaussianState:
    """Apply a single-mode squeezer; on vacuum, p(vacuum) becomes 1/cosh r."""
    linalg.check_mode_set([mode], state.M, "mode")
    M = state.M
    c, s = math.cosh(r), math.sinh(r)
    S = np.eye(2 * M, dtype=np.complex128)
    S[mode, mode] = S[mode + M, mode + M] = c
    S[mode, mode + M] = S[mode + M, mode] = -s
    return _apply_symplectic(state, S)


def apply_channel(state: GaussianState, T) -> GaussianState:
    """Send the state through a transmission matrix (rows = output modes).

    With W = blockdiag(T, T*), the covariance maps to W Sigma W^dag +
    (I - W W^dag): lost amplitude is replaced by vacuum noise, making the
    vacuum a fixed point of every valid channel.
    """
    T = linalg.check_channel(T)
    m_out, m_in = T.shape
    if m_in != state.M:
        raise DimensionMismatch(f"channel expects {m_in} input modes, state has {state.M}")
    if m_out < 1:
        raise DimensionMismatch("channel must keep at least one mode")
    W = np.zeros((2 * m_out, 2 * m_in), dtype=np.complex128)
    W[:m_out, :m_in] = T
    W[m_out:, m_in:] = T.conj()
    sigma = W @ state.sigma @ W.conj().T + (np.eye(2 * m_out) - W @ W.conj().T)
    return GaussianState(sigma, W @ state.alpha)


def reduce(state: GaussianState) -> ReducedForm:
    """O = I - Sigma^-1, gamma = (Sigma^-1 alpha)*, and the vacuum probability.

    p0 = exp(-alpha^dag Sigma^-1 alpha / 2) / sqrt(det Sigma).
    """
    inv, det = linalg.hermitian_inverse_det(state.sigma)
    O = np.eye(2 * state.M, dtype=np.complex128) - inv
    gamma = (inv @ state.alpha).conj()
    quad = float(np.real(state.alpha.conj() @ inv @ state.alpha))
    p0 = math.exp(-0.5 * quad) / math.sqrt(det)
    return ReducedForm(O, gamma, clamp_probability(p0, what="vacuum probability"))


def vacuum_prob_marginal(state: GaussianState, V: Sequence[int]) -> float:
    """Probability that every mode in ``V`` is vacuum, the rest marginalized.

    Marginalizing is just deleting mode pairs from Sigma and alpha before
    evaluating the vacuum formula.
    """
    V = linalg.check_mode_set(V, state.M, "V")
    if not V:
        return 1.0
    idx = linalg.mode_pair_indices(V, state.M)
    sub = state.sigma[np.ix_(idx, idx)]
    a = state.alpha[idx]
    inv, det = linalg.hermitian_inverse_det(sub)
    quad = float(np.real(a.conj() @ inv @ a))
    p = math.exp(-0.5 * quad) / math.sqrt(det)
    return clamp_probability(p, what="marginal vacuum probability")


def threshold_prob_gaussian_detailed(
    state: GaussianState, d: Sequence[int], *, thread_hint: int = 1
) -> ProbabilityResult:
    d = linalg.check_click_pattern(d, state.M)
    return _threshold_from_reduced(reduce(state), d, state.M, thread_hint)


def _threshold_from_reduced(
    rf: ReducedForm, d: Sequence[int], M: int, thread_hint: int = 1
) -> ProbabilityResult:
    C = [j for j, bit in enumerate(d) if bit]
    O_CC = linalg.select_mode_pairs(rf.O, C, M)
    gamma_C = linalg.select_mode_pairs_vec(rf.gamma, C, M)
    if thread_hint > 1:
        res = matfunc.ltor_parallel_detailed(O_CC, gamma_C, thread_hint)
    else:
        res = matfunc.ltor_detailed(O_CC, gamma_C)
    p = rf.p0 * real_part_checked(res.value, res.max_term, "ltor")
    p = clamp_probability(p, what="threshold probability")
    return ProbabilityResult(p, rf.p0 * res.max_term, res.terms)


def threshold_prob_gaussian(
    state: GaussianState, d: Sequence[int], *, thread_hint: int = 1
) -> float:
    """Probability of the click pattern ``d``: p0 times ltor(O_CC, gamma_C)."""
    return threshold_prob_gaussian_detailed(state, d, thread_hint=thread_hint).value


def photon_number_prob(
    state: GaussianState, n: Sequence[int], *, max_photons: int = PHOTON_NUMBER_CAP
) -> float:
    """Probability of the exact photon-number outcome ``n``.

    p0 * lhaf(X O_{n,n}, gamma_n) / prod n_j!, where the subscripts repeat
    each mode pair by its occupation.
    """
    n = linalg.check_occupation(n, state.M)
    N = sum(n)
    if N > max_photons:
        raise CapExceeded(f"total photon number {N} exceeds the cap of {max_photons}")
    rf = reduce(state)
    O_nn = linalg.repeat_mode_pairs(rf.O, n, state.M)
    gamma_n = rf.gamma[linalg.repeat_mode_pair_indices(n, state.M)]
    A = np.vstack([O_nn[N:, :], O_nn[:N, :]])  # X O_nn
    value = matfunc.lhaf(A, gamma_n)
    p = rf.p0 * real_part_checked(value, max(1.0, abs(value)), "loop Hafnian")
    p /= factorial_product(n)
    return clamp_probability(p, what="photon-number probability")


def gaussian_distribution(
    state: GaussianState, *, max_modes: int = DISTRIBUTION_MODE_CAP
) -> dict[tuple[int, ...], float]:
    """Threshold probability of every click pattern, in lexicographic order."""
    if state.M > max_modes:
        raise CapExceeded(f"distribution over {state.M} modes exceeds the cap of {max_modes}")
    rf = reduce(state)
    return {
        d: _threshold_from_reduced(rf, d, state.M).value
        for d in itertools.product((0, 1), repeat=state.M)
    }


def scattershot_O(T, eps: float) -> np.ndarray:
    """The O matrix of a weakly squeezed scattershot circuit around channel T.

    Modes are ordered system first, heralds second.  As eps -> 0 the
    heralded threshold statistics scaled by (eps^-2 - 1)^N converge to the
    Fock-input Bristolian probabilities of T.
    """
    T = linalg.check_channel(T)
    if not 0.0 < eps < 1.0:
        raise InvalidInput("eps must lie strictly between 0 and 1")
    m_out, m_in = T.shape
    E = linalg.environment_matrix(T)
    n = m_out + m_in
    sys_a = slice(0, m_out)
    her_a = slice(m_out, n)
    sys_c = slice(n, n + m_out)
    her_c = slice(n + m_out, 2 * n)
    O = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    O[sys_a, her_c] = T
    O[her_a, her_a] = eps * E.conj()
    O[her_a, sys_c] = T.T
    O[sys_c, her_a] = T.conj()
    O[her_c, sys_a] = T.conj().T
    O[her_c, her_c] = eps * E
    return eps * O
