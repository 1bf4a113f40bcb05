"""Matrix functions for threshold-detector and photon-number statistics.

``brs``/``ubrs`` give click probabilities of Fock states through lossy or
unitary linear optics, ``tor``/``ltor`` those of (displaced) Gaussian
states, and ``lhaf`` the loop Hafnian used for photon-number-resolved
probabilities.  All are inclusion/exclusion sums over mode subsets and are
evaluated with compensated accumulation; the ``*_detailed`` variants also
report the magnitude of the largest term as a cancellation diagnostic.
"""

from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve

from . import linalg
from .errors import DimensionMismatch, InvalidInput, UnphysicalState
from .linalg import TAU_HERM, CompensatedSum, as_complex_matrix, as_complex_vector

logger = logging.getLogger(__name__)

# Residue gate for the mathematically-real tor/ltor outputs, scaled by the
# largest subset term so the check tracks the achievable cancellation level.
IMAG_TOL = 1e-8


@dataclass(frozen=True)
class IncExcResult:
    """Raw inclusion/exclusion sum plus cancellation diagnostics."""

    value: complex
    max_term: float
    terms: int


def brs_detailed(A, E) -> IncExcResult:
    A = as_complex_matrix(A, "A")
    E = as_complex_matrix(E, "E")
    m, n = A.shape
    if E.shape != (n, n):
        raise DimensionMismatch(f"E must be {n} x {n} to match A's columns, got {E.shape}")
    acc = CompensatedSum()
    for k in range(1 << m):
        rows = [j for j in range(m) if k >> j & 1]
        AY = A[rows, :]
        G = AY.conj().T @ AY + E
        term = linalg.permanent(G)
        if (m - len(rows)) & 1:
            term = -term
        acc.add(term)
    return IncExcResult(acc.value, acc.max_abs, 1 << m)


def brs(A, E) -> complex:
    """Threshold-detection function for Fock states through a lossy channel.

    Sum over all subsets Y of the rows of the m x n matrix ``A`` of
    ``(-1)^(m-|Y|) per(A_Y^dag A_Y + E)``; the empty subset contributes
    ``per(E)``.  Runs in O(n 2^(n+m)) time.
    """
    return brs_detailed(A, E).value


def ubrs_detailed(A) -> IncExcResult:
    A = as_complex_matrix(A, "A")
    return brs_detailed(A, np.zeros((A.shape[1], A.shape[1]), dtype=np.complex128))


def ubrs(A) -> complex:
    """Lossless-channel specialization of :func:`brs` (``E = 0``).

    The empty-subset term is the permanent of the all-zeros matrix, which
    vanishes for n >= 1.
    """
    return ubrs_detailed(A).value


def _validate_ltor_input(O: np.ndarray, gamma, tol: float) -> tuple[np.ndarray, np.ndarray | None, int]:
    O = as_complex_matrix(O, "O")
    n = linalg.require_square(O, "O")
    if n % 2:
        raise DimensionMismatch(f"O must be 2m x 2m, got {O.shape}")
    m = n // 2
    linalg.check_hermitian(O, tol, "O")
    if m:
        swapped = np.block(
            [[O[m:, m:], O[m:, :m]], [O[:m, m:], O[:m, :m]]]
        )  # X O* X with X = [[0, I], [I, 0]]
        defect = float(np.max(np.abs(swapped.conj() - O)))
        if defect > tol:
            raise UnphysicalState(
                f"O violates the block-conjugation symmetry X O* X = O by {defect:.3e}"
            )
    if gamma is None:
        return O, None, m
    gamma = as_complex_vector(gamma, "gamma")
    if gamma.shape != (n,):
        raise DimensionMismatch(f"gamma must have length {n}, got {gamma.shape}")
    if m:
        defect = float(np.max(np.abs(gamma.conj() - np.concatenate([gamma[m:], gamma[:m]]))))
        if defect > tol:
            raise UnphysicalState(f"gamma violates gamma* = X gamma by {defect:.3e}")
    if not np.any(gamma):
        gamma = None
    return O, gamma, m


def _ltor_range(
    B: np.ndarray, gamma: np.ndarray | None, m: int, start: int, stop: int
) -> tuple[complex, float]:
    """Inclusion/exclusion partial sum over subset indices [start, stop).

    ``B`` is the precomputed ``I - O``; subset index bits select modes, and
    mode j owns basis indices j and j + m.
    """
    gamma_conj = None if gamma is None else gamma.conj()
    acc = CompensatedSum()
    for k in range(start, stop):
        modes = [j for j in range(m) if k >> j & 1]
        s = len(modes)
        if s == 0:
            term = 1 + 0j
        else:
            idx = modes + [j + m for j in modes]
            sub = B[np.ix_(idx, idx)]
            try:
                L = np.linalg.cholesky(sub)
            except np.linalg.LinAlgError as exc:
                raise UnphysicalState(
                    f"I - O is not positive definite on mode subset {tuple(modes)}"
                ) from exc
            sqrt_det = float(np.prod(np.real(np.diag(L))))
            if gamma is None:
                term = complex(1.0 / sqrt_det)
            else:
                w = cho_solve((L, True), gamma_conj[idx], check_finite=False)
                expo = 0.5 * complex(gamma[idx] @ w)
                term = cmath.exp(expo) / sqrt_det
        if (m - s) & 1:
            term = -term
        acc.add(term)
    return acc.value, acc.max_abs


def real_part_checked(value: complex, max_term: float, what: str) -> float:
    """Discard the imaginary part of a mathematically-real result.

    The residue is gated against ``IMAG_TOL`` scaled by the largest
    contributing term, since that sets the cancellation noise floor.
    """
    residue = abs(value.imag)
    if residue > IMAG_TOL * max(1.0, max_term):
        raise UnphysicalState(
            f"{what} has imaginary residue {residue:.3e}; input violates its invariants"
        )
    return value.real


@dataclass(frozen=True)
class ProbabilityResult:
    """A probability plus the cancellation diagnostics of its evaluation."""

    value: float
    max_term: float
    terms: int


def clamp_probability(p: float, *, slack: float = 1e-9, what: str = "probability") -> float:
    """Clip cancellation residue to [0, 1]; excursions beyond ``slack`` raise."""
    if not (-slack <= p <= 1.0 + slack):
        raise UnphysicalState(f"{what} = {p!r} lies outside [0, 1] beyond slack {slack:g}")
    if p < 0.0 or p > 1.0:
        logger.debug("clipping %s residue %.6e into [0, 1]", what, p)
        return 0.0 if p < 0.0 else 1.0
    return p


def ltor_detailed(O, gamma, *, tol: float = TAU_HERM, validate: bool = True) -> IncExcResult:
    if validate:
        O, gamma, m = _validate_ltor_input(O, gamma, tol)
    else:
        O = as_complex_matrix(O, "O")
        m = O.shape[0] // 2
        if gamma is not None:
            gamma = as_complex_vector(gamma, "gamma")
            if not np.any(gamma):
                gamma = None
    B = np.eye(2 * m, dtype=np.complex128) - O
    value, max_term = _ltor_range(B, gamma, m, 0, 1 << m)
    return IncExcResult(value, max_term, 1 << m)


def ltor(O, gamma, *, tol: float = TAU_HERM, validate: bool = True) -> float:
    """Threshold-detection function for displaced Gaussian states.

    Sum over all mode subsets Y of ``(-1)^(m-|Y|)`` times
    ``exp(gamma_Y^t [I - O_YY]^-1 gamma_Y*) / 2) / sqrt(det(I - O_YY))``,
    where submatrices take both ladder indices of each selected mode.  The
    empty subset contributes ``(-1)^m``.  O(m^3 2^m) time.
    """
    res = ltor_detailed(O, gamma, tol=tol, validate=validate)
    return real_part_checked(res.value, res.max_term, "ltor")


def tor(O, *, tol: float = TAU_HERM, validate: bool = True) -> float:
    """Threshold-detection function for zero-mean Gaussian states: ltor with gamma = 0."""
    return ltor(O, None, tol=tol, validate=validate)


def _ltor_chunk(args) -> tuple[complex, float]:
    B, gamma, m, start, stop = args
    return _ltor_range(B, gamma, m, start, stop)


def ltor_parallel_detailed(
    O, gamma, thread_hint: int, *, tol: float = TAU_HERM, validate: bool = True
) -> IncExcResult:
    if thread_hint < 1:
        raise InvalidInput("thread_hint must be at least 1")
    if validate:
        O, gamma, m = _validate_ltor_input(O, gamma, tol)
    else:
        O = as_complex_matrix(O, "O")
        m = O.shape[0] // 2
        if gamma is not None:
            gamma = as_complex_vector(gamma, "gamma")
            if not np.any(gamma):
                gamma = None
    B = np.eye(2 * m, dtype=np.complex128) - O
    total = 1 << m
    if thread_hint == 1 or total < 2 * thread_hint:
        value, max_term = _ltor_range(B, gamma, m, 0, total)
        return IncExcResult(value, max_term, total)

    bounds = [total * i // thread_hint for i in range(thread_hint + 1)]
    jobs = [(B, gamma, m, bounds[i], bounds[i + 1]) for i in range(thread_hint)]
    partials = _map_parallel(_ltor_chunk, jobs, thread_hint)
    acc = CompensatedSum()
    max_term = 0.0
    for value, chunk_max in partials:
        acc.add(value)
        max_term = max(max_term, chunk_max)
    return IncExcResult(acc.value, max_term, total)


def ltor_parallel(O, gamma, thread_hint: int, *, tol: float = TAU_HERM, validate: bool = True) -> float:
    """Same contract as :func:`ltor` with subset terms split across workers.

    The subset range is cut into ``thread_hint`` fixed contiguous chunks and
    the per-chunk partials are combined in chunk order, so the result is
    bit-stable for a fixed ``thread_hint``; ``thread_hint=1`` runs inline
    over the full range and is bit-identical to :func:`ltor`.
    """
    res = ltor_parallel_detailed(O, gamma, thread_hint, tol=tol, validate=validate)
    return real_part_checked(res.value, res.max_term, "ltor")


def _map_parallel(fn, jobs, workers: int) -> list:
    from concurrent.futures import ProcessPoolExecutor
    import multiprocessing as mp

    try:
        ctx = mp.get_context("fork")
    except ValueError:  # pragma: no cover - non-POSIX fallback
        ctx = mp.get_context()
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        return list(pool.map(fn, jobs))


def _series_exp(coeffs: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of exp(p) truncated at ``order`` for p with p(0) = 0."""
    e = np.zeros(order + 1, dtype=np.complex128)
    e[0] = 1.0
    for n in range(1, order + 1):
        s = 0j
        for k in range(1, n + 1):
            s += k * coeffs[k] * e[n - k]
        e[n] = s / n
    return e


def lhaf(A, gamma=None, *, tol_sym: float = TAU_HERM) -> complex:
    """Loop Hafnian of a symmetric 2m x 2m matrix via the trace formula.

    Pairings come from ``A`` and self-loops from ``gamma``; with
    ``gamma = None`` (or all zeros) this is the plain Hafnian.  Each mode
    subset contributes the eta^m coefficient of
    ``exp(sum_k [tr(O_YY^k)/(2k) + gamma_Y^t O_YY^(k-1) X gamma_Y / 2] eta^k)``
    with ``O = X A``, combined with inclusion/exclusion signs.  Valid for
    arbitrary symmetric matrices.
    """
    A = as_complex_matrix(A, "A")
    n = linalg.require_square(A, "A")
    if n % 2:
        raise DimensionMismatch(f"A must be 2m x 2m, got {A.shape}")
    m = n // 2
    if n:
        defect = float(np.max(np.abs(A - A.T)))
        if defect > tol_sym:
            raise InvalidInput(f"A deviates from symmetric by {defect:.3e}")
    if gamma is not None:
        gamma = as_complex_vector(gamma, "gamma")
        if gamma.shape != (n,):
            raise DimensionMismatch(f"gamma must have length {n}, got {gamma.shape}")
        if not np.any(gamma):
            gamma = None
    if m == 0:
        return 1 + 0j

    O = np.vstack([A[m:, :], A[:m, :]])  # X A, with X = [[0, I], [I, 0]]
    acc = CompensatedSum()
    for k in range(1 << m):
        modes = [j for j in range(m) if k >> j & 1]
        s = len(modes)
        if s == 0:
            continue  # exp(0) contributes nothing at order m >= 1
        idx = modes + [j + m for j in modes]
        OY = O[np.ix_(idx, idx)]
        if gamma is not None:
            gY = gamma[idx]
            XgY = np.concatenate([gY[s:], gY[:s]])
        coeffs = np.zeros(m + 1, dtype=np.complex128)
        power = np.eye(2 * s, dtype=np.complex128)
        for order in range(1, m + 1):
            if gamma is not None:
                coeffs[order] = 0.5 * complex(gY @ (power @ XgY))
            power = power @ OY
            coeffs[order] += np.trace(power) / (2 * order)
        term = complex(_series_exp(coeffs, m)[m])
        if (m - s) & 1:
            term = -term
        acc.add(term)
    return acc.value
