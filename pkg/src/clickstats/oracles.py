"""Brute-force reference implementations.

Everything here is deliberately exponential and as close to the defining
formulas as possible.  The fast paths in `linalg`, `matfunc`, `fock` and
`gaussian` are validated against these; the oracles themselves are only
trusted because they are short enough to audit by eye.  Size caps are
hard errors so that a test can never silently fall back to a truncated
computation.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping, Sequence

import mpmath as mp
import numpy as np

from . import fock, gaussian, linalg
from .errors import CapExceeded, DimensionMismatch, InvalidInput

MAX_PERMANENT_NAIVE = 9
MAX_LHAF_PAIRS = 4
MAX_ENUM_PHOTONS = 5
MAX_ENUM_MODES = 6
MAX_INCEXC_MODES = 8
MAX_SERIES_ORDER = 3
MAX_APPROX_MODES = 10


def _check_cap(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise CapExceeded(f"{what} = {value} exceeds the oracle cap {cap}")


def permanent_naive(A) -> complex:
    """Permanent as a literal sum over all n! permutations."""
    A = linalg.as_complex_matrix(A, "A")
    n = linalg.require_square(A, "A")
    _check_cap(n, MAX_PERMANENT_NAIVE, "matrix size")
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        prod = 1.0 + 0.0j
        for i, j in enumerate(perm):
            prod *= A[i, j]
        total += prod
    return complex(total)


def _pair_loop_partitions(indices: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All partitions of `indices` into unordered pairs and singletons."""
    if not indices:
        yield ()
        return
    first, rest = indices[0], indices[1:]
    for tail in _pair_loop_partitions(rest):
        yield ((first,),) + tail
    for k, partner in enumerate(rest):
        remaining = rest[:k] + rest[k + 1:]
        for tail in _pair_loop_partitions(remaining):
            yield ((first, partner),) + tail


def lhaf_reference(A, gamma=None) -> complex:
    """Loop hafnian by enumerating perfect matchings with self-loops.

    Each partition of the 2m indices into pairs and singletons
    contributes the product of A entries over its pairs and gamma
    entries over its singletons.  With gamma omitted (or zero) only the
    perfect matchings survive and this is the plain hafnian.
    """
    A = linalg.as_complex_matrix(A, "A")
    n = linalg.require_square(A, "A")
    if n % 2:
        raise DimensionMismatch(f"A must be even-dimensional, got {n}x{n}")
    _check_cap(n // 2, MAX_LHAF_PAIRS, "mode count")
    defect = float(np.max(np.abs(A - A.T))) if n else 0.0
    if defect > linalg.TAU_HERM:
        raise InvalidInput(f"A must be symmetric, |A - A^T| reaches {defect:.3e}")
    if gamma is None:
        g = np.zeros(n, dtype=np.complex128)
    else:
        g = linalg.as_complex_vector(gamma, "gamma")
        if g.shape[0] != n:
            raise DimensionMismatch(f"gamma has length {g.shape[0]}, expected {n}")
    total = 0.0 + 0.0j
    for partition in _pair_loop_partitions(tuple(range(n))):
        term = 1.0 + 0.0j
        for block in partition:
            if len(block) == 1:
                term *= g[block[0]]
            else:
                term *= A[block[0], block[1]]
        total += term
    return complex(total)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _resolve_dilation(exp: fock.FockExperiment, dilation) -> np.ndarray:
    if dilation is None:
        return linalg.unitary_dilation(exp.T)
    U = linalg.as_complex_matrix(dilation, "dilation")
    K = linalg.require_square(U, "dilation")
    if K < max(exp.modes_out, exp.modes_in):
        raise DimensionMismatch(
            f"dilation of size {K} cannot embed a {exp.modes_out}x{exp.modes_in} channel")
    if not linalg.is_unitary(U):
        raise InvalidInput("dilation must be unitary")
    block = U[: exp.modes_out, : exp.modes_in]
    defect = float(np.max(np.abs(block - exp.T)))
    if defect > 1e-12:
        raise InvalidInput(
            f"dilation does not embed the channel, |U_block - T| reaches {defect:.3e}")
    return U


def threshold_enum_fock(exp: fock.FockExperiment, d, *, dilation=None) -> float:
    """Click probability by enumerating photon-number outputs of a dilation.

    Embeds T in a unitary over system plus environment modes, feeds the
    Fock input (environment in vacuum), and sums |amplitude|^2 over every
    output pattern whose thresholded system part equals d.  Environment
    occupations are unconstrained, which is exactly tracing them out.
    A different `dilation` of the same channel must give the same answer.
    """
    d = linalg.check_click_pattern(d, exp.modes_out, "d")
    _check_cap(exp.photons, MAX_ENUM_PHOTONS, "photon number")
    _check_cap(exp.modes_out, MAX_ENUM_MODES, "output mode count")
    U = _resolve_dilation(exp, dilation)
    K = U.shape[0]
    n_full = exp.n + (0,) * (K - exp.modes_in)
    prob = 0.0
    for m_full in _compositions(exp.photons, K):
        clicks = tuple(int(c > 0) for c in m_full[: exp.modes_out])
        if clicks != d:
            continue
        prob += abs(fock.fock_amplitude(U, m_full, n_full)) ** 2
    return prob


def threshold_incexc_gaussian(state: gaussian.GaussianState, d) -> float:
    """Click probability by inclusion/exclusion over vacuum marginals.

    p(d) = sum over subsets Z of the clicked modes of (-1)^|Z| times the
    probability that the unclicked modes and Z are all in vacuum.
    """
    d = linalg.check_click_pattern(d, state.M, "d")
    _check_cap(state.M, MAX_INCEXC_MODES, "mode count")
    clicked = [i for i, bit in enumerate(d) if bit]
    silent = [i for i, bit in enumerate(d) if not bit]
    prob = 0.0
    for r in range(len(clicked) + 1):
        for Z in itertools.combinations(clicked, r):
            prob += (-1.0) ** r * gaussian.vacuum_prob_marginal(state, silent + list(Z))
    return prob


SERIES_DPS = 40


def _ltor_weak(O: np.ndarray, gamma: np.ndarray, eta: mp.mpf, m: int) -> mp.mpc:
    """ltor(eta*O, sqrt(eta)*gamma) by the defining subset sum, at SERIES_DPS digits.

    At the node scale the target coefficient sits 10+ orders below the
    individual subset terms, so double precision would drown it in
    rounding noise; extended precision keeps the oracle a literal
    transcription of the formula instead of a cancellation-avoidance
    rewrite.
    """
    root = mp.sqrt(eta)
    total = mp.mpc(1 if m % 2 == 0 else -1)
    for r in range(1, m + 1):
        sign = -1 if (m - r) & 1 else 1
        for Y in itertools.combinations(range(m), r):
            idx = list(Y) + [j + m for j in Y]
            B = mp.matrix(2 * r)
            for a, ia in enumerate(idx):
                for b, ib in enumerate(idx):
                    B[a, b] = (1 if a == b else 0) - eta * mp.mpc(O[ia, ib])
            gY = [root * mp.mpc(gamma[i]) for i in idx]
            w = mp.lu_solve(B, mp.matrix([mp.conj(x) for x in gY]))
            expo = sum(gY[k] * w[k] for k in range(2 * r)) / 2
            total += sign * mp.exp(expo) / mp.sqrt(mp.det(B))
    return total


def lhaf_from_ltor_series(O, gamma, ell: int, *, nodes: Sequence[float] | None = None) -> complex:
    """Loop hafnian extracted from the loop Torontonian's small-state series.

    For a physical pair (O, gamma) on m modes, eta -> ltor(eta*O,
    sqrt(eta)*gamma) vanishes at 0 and its eta^m Taylor coefficient is
    lhaf(X O, gamma): with every mode clicked, the leading contribution
    is the exactly-one-photon-per-mode event.  We evaluate at ell+1 small
    nodes, solve the square Vandermonde system for the coefficients of
    eta^1 .. eta^(ell+1), and return the eta^ell one.  The extra power
    soaks up the leading truncation error.
    """
    O = linalg.as_complex_matrix(O, "O")
    n = linalg.require_square(O, "O")
    if n % 2:
        raise DimensionMismatch(f"O must be even-dimensional, got {n}x{n}")
    m = n // 2
    if ell != m:
        raise InvalidInput(f"ell must equal the mode count: ell={ell}, m={m}")
    if ell < 1:
        raise InvalidInput("ell must be at least 1")
    _check_cap(ell, MAX_SERIES_ORDER, "series order")
    gamma = linalg.as_complex_vector(gamma, "gamma")
    if gamma.shape[0] != n:
        raise DimensionMismatch(f"gamma has length {gamma.shape[0]}, expected {n}")
    if nodes is None:
        eta = 0.02 * np.arange(1, ell + 2, dtype=np.float64)
    else:
        eta = np.asarray(nodes, dtype=np.float64)
        if eta.shape != (ell + 1,) or np.any(eta <= 0.0) or len(set(eta.tolist())) != ell + 1:
            raise InvalidInput(f"nodes must be {ell + 1} distinct positive values")
    powers = np.arange(1, ell + 2)
    if np.linalg.cond(eta[:, None] ** powers[None, :]) > 1e12:
        raise InvalidInput("series fit is ill-conditioned, spread the nodes further apart")
    with mp.workdps(SERIES_DPS):
        V = mp.matrix(ell + 1)
        for i in range(ell + 1):
            for k in range(ell + 1):
                V[i, k] = mp.mpf(eta[i]) ** (k + 1)
        values = mp.matrix([_ltor_weak(O, gamma, mp.mpf(e), m) for e in eta])
        coeffs = mp.lu_solve(V, values)
        return complex(coeffs[ell - 1])


def approx_model_distribution(exp: fock.FockExperiment) -> Mapping[tuple[int, ...], float]:
    """Collision-free photon-counting model over all click patterns.

    Reads a click as "exactly one photon" instead of "one or more": the
    returned weight of pattern d is the probability that the system
    photon-number outcome is exactly d, obtained from the same dilated
    enumeration as threshold_enum_fock but keeping only collision-free
    system patterns.  Mass on bunched outcomes is dropped, so the values
    need not sum to 1; comparisons use the map as-is.
    """
    _check_cap(exp.photons, MAX_ENUM_PHOTONS, "photon number")
    _check_cap(exp.modes_out, MAX_APPROX_MODES, "output mode count")
    U = linalg.unitary_dilation(exp.T)
    K = U.shape[0]
    n_full = exp.n + (0,) * (K - exp.modes_in)
    M = exp.modes_out
    out: dict[tuple[int, ...], float] = {
        pattern: 0.0 for pattern in itertools.product((0, 1), repeat=M)
    }
    for m_full in _compositions(exp.photons, K):
        system = m_full[:M]
        if any(c > 1 for c in system):
            continue
        out[system] += abs(fock.fock_amplitude(U, m_full, n_full)) ** 2
    return out
