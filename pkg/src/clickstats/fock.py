"""Fock-state pipeline: amplitudes, generating functions, click probabilities.

An experiment is a transmission matrix ``T`` (rows index output modes,
columns input modes, singular values at most 1) fed with a definite photon
occupation ``n``.  Threshold-detection probabilities come from ``brs`` on
the click-selected rows of ``T`` with the environment matrix ``I - T^dag T``
capturing loss; unitary channels take the cheaper ``ubrs`` path.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg, matfunc
from .errors import CapExceeded, DimensionMismatch, InvalidChannel, InvalidInput
from .matfunc import ProbabilityResult, clamp_probability, real_part_checked

UNITARY_TOL = 1e-10
DISTRIBUTION_MODE_CAP = 16


def factorial_product(n: Sequence[int]) -> float:
    """prod n_j!, the state-normalization denominator for an occupation."""
    return float(math.prod(math.factorial(v) for v in n))


def clicked_modes(d: Sequence[int]) -> list[int]:
    return [j for j, bit in enumerate(d) if bit]


@dataclass(frozen=True)
class FockExperiment:
    """A Fock input ``n`` sent through the transmission matrix ``T``.

    ``T`` has shape M_out x M_in and every singular value at most 1; ``n``
    holds one non-negative photon count per input mode.  Whether ``T`` is
    unitary is decided once here and cached, since it selects the evaluation
    path for every probability.
    """

    T: np.ndarray
    n: tuple[int, ...]
    unitary: bool = field(init=False)

    def __post_init__(self) -> None:
        T = linalg.check_channel(self.T).copy()
        T.flags.writeable = False
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "n", linalg.check_occupation(self.n, T.shape[1]))
        object.__setattr__(self, "unitary", linalg.is_unitary(T, UNITARY_TOL))

    @property
    def modes_out(self) -> int:
        return self.T.shape[0]

    @property
    def modes_in(self) -> int:
        return self.T.shape[1]

    @property
    def photons(self) -> int:
        return sum(self.n)


def _require_unitary(U: np.ndarray) -> np.ndarray:
    U = linalg.as_complex_matrix(U, "U")
    linalg.require_square(U, "U")
    if not linalg.is_unitary(U, UNITARY_TOL):
        raise InvalidChannel("U must be unitary")
    return U


def fock_amplitude(U, m: Sequence[int], n: Sequence[int]) -> complex:
    """Scattering amplitude <m|U|n> for Fock states through a unitary.

    per(U_{m,n}) / sqrt(prod m_j! n_j!), with U_{m,n} the row/column
    repetition of U by the output/input occupations.
    """
    U = _require_unitary(U)
    m = linalg.check_occupation(m, U.shape[0], "m")
    n = linalg.check_occupation(n, U.shape[1], "n")
    if sum(m) != sum(n):
        raise InvalidInput(f"photon numbers differ: sum(m)={sum(m)}, sum(n)={sum(n)}")
    norm = math.sqrt(factorial_product(m) * factorial_product(n))
    return linalg.permanent(linalg.repeat_rows_cols(U, m, n)) / norm


def generating_function(U, n: Sequence[int], x) -> complex:
    """per([U^dag diag(x) U]_{n,n}) / prod n_j! for |x_j| <= 1.

    Setting x_j = 1 marginalizes mode j and x_j = 0 projects it on vacuum,
    so mixed assignments give marginal vacuum probabilities; evaluating at
    x_j = exp(i phi_j) gives the characteristic function of the
    photon-number distribution.
    """
    U = _require_unitary(U)
    n = linalg.check_occupation(n, U.shape[1], "n")
    x = linalg.as_complex_vector(x, "x")
    if x.shape != (U.shape[0],):
        raise DimensionMismatch(f"x has length {x.size}, expected {U.shape[0]}")
    if np.any(np.abs(x) > 1 + 1e-12):
        raise InvalidInput("entries of x must satisfy |x_j| <= 1")
    G = U.conj().T @ (x[:, None] * U)
    return linalg.permanent(linalg.repeat_rows_cols(G, n, n)) / factorial_product(n)


def marginal_vacuum_prob(U, n: Sequence[int], V: Sequence[int]) -> float:
    """Probability that every mode in ``V`` sees vacuum, others marginalized."""
    U = _require_unitary(U)
    V = linalg.check_mode_set(V, U.shape[0], "V")
    x = np.ones(U.shape[0], dtype=np.complex128)
    x[V] = 0.0
    value = generating_function(U, n, x)
    p = real_part_checked(value, 1.0, "marginal vacuum probability")
    return clamp_probability(p, what="marginal vacuum probability")


def threshold_prob_fock_detailed(exp: FockExperiment, d: Sequence[int]) -> ProbabilityResult:
    d = linalg.check_click_pattern(d, exp.modes_out)
    if sum(d) > exp.photons:
        return ProbabilityResult(0.0, 0.0, 0)  # more clicks than photons
    A = linalg.repeat_rows_cols(exp.T, d, exp.n)
    if exp.unitary:
        res = matfunc.ubrs_detailed(A)
    else:
        E = linalg.repeat_rows_cols(linalg.environment_matrix(exp.T), exp.n, exp.n)
        res = matfunc.brs_detailed(A, E)
    return _finish_probability(res, factorial_product(exp.n), "threshold probability")


def _finish_probability(res: matfunc.IncExcResult, norm: float, what: str) -> ProbabilityResult:
    p = real_part_checked(res.value / norm, res.max_term / norm, what)
    return ProbabilityResult(clamp_probability(p, what=what), res.max_term / norm, res.terms)


def threshold_prob_fock(exp: FockExperiment, d: Sequence[int]) -> float:
    """Probability of the click pattern ``d`` on threshold detectors.

    Unitary channels use ubrs on the clicked rows of T; lossy channels use
    brs with the environment matrix I - T^dag T.  Patterns with more clicks
    than photons return exactly 0.
    """
    return threshold_prob_fock_detailed(exp, d).value


def marginal_threshold_prob_fock(exp: FockExperiment, C: Sequence[int], V: Sequence[int]) -> float:
    """Probability of clicks on modes ``C`` and vacuum on ``V``, rest ignored.

    Ignored modes act like extra environment rows: their contribution
    ``T_B^dag T_B`` joins I - T^dag T, which is exactly what appending those
    rows of the unitary dilation to the environment block produces.
    """
    C = linalg.check_mode_set(C, exp.modes_out, "C")
    V = linalg.check_mode_set(V, exp.modes_out, "V")
    if set(C) & set(V):
        raise InvalidInput("C and V must be disjoint")
    B = sorted(set(range(exp.modes_out)) - set(C) - set(V))
    if not B:
        d = [1 if j in set(C) else 0 for j in range(exp.modes_out)]
        return threshold_prob_fock(exp, d)
    if len(C) > exp.photons:
        return 0.0
    A = np.repeat(linalg.select_rows(exp.T, C), exp.n, axis=1)
    E = linalg.environment_matrix(exp.T)
    TB = linalg.select_rows(exp.T, B)
    E = E + TB.conj().T @ TB
    res = matfunc.brs_detailed(A, linalg.repeat_rows_cols(E, exp.n, exp.n))
    return _finish_probability(res, factorial_product(exp.n), "marginal threshold probability").value


def fock_distribution(
    exp: FockExperiment, *, max_modes: int = DISTRIBUTION_MODE_CAP
) -> dict[tuple[int, ...], float]:
    """Threshold probability of every click pattern, in lexicographic order."""
    if exp.modes_out > max_modes:
        raise CapExceeded(
            f"distribution over {exp.modes_out} modes exceeds the cap of {max_modes}"
        )
    return {
        d: threshold_prob_fock(exp, d)
        for d in itertools.product((0, 1), repeat=exp.modes_out)
    }
