"""Dense complex linear algebra primitives and index-manipulation conventions.

All matrix functions in this package operate on plain ``numpy`` arrays of
``complex128``.  Mode-pair selection follows the ladder-operator ordering
``(a_1 .. a_M, a_1^dag .. a_M^dag)``: mode ``j`` owns the basis vectors
``j`` and ``j + M``.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidChannel,
    InvalidInput,
    NotHermitian,
    NotPositiveDefinite,
)

# Floating-point gates for exact-math preconditions; overridable per call.
TAU_HERM = 1e-8
TAU_PSD = 1e-10
TAU_SV = 1e-9

# Factorials stay exactly representable well past this; larger occupations
# are outside the intended scale anyway.
MAX_MODE_OCCUPATION = 20


def as_complex_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce ``A`` to a 2-D complex128 array, copying if needed."""
    arr = np.asarray(A, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


def as_complex_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got shape {arr.shape}")
    return arr


def require_square(A: np.ndarray, name: str = "matrix") -> int:
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {A.shape}")
    return A.shape[0]


def hermiticity_defect(A: np.ndarray) -> float:
    """Max-abs deviation of ``A`` from its conjugate transpose."""
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(A - A.conj().T)))


def check_hermitian(A: np.ndarray, tol: float = TAU_HERM, name: str = "matrix") -> None:
    defect = hermiticity_defect(A)
    if defect > tol:
        raise NotHermitian(f"{name} deviates from Hermitian by {defect:.3e} (tol {tol:.1e})")


class CompensatedSum:
    """Neumaier-compensated accumulator for complex terms.

    Inclusion/exclusion sums in this package cancel catastrophically; the
    compensation keeps the running error at a few ulp of the largest term
    instead of growing with the term count.
    """

    __slots__ = ("_sr", "_si", "_cr", "_ci", "max_abs")

    def __init__(self) -> None:
        self._sr = 0.0
        self._si = 0.0
        self._cr = 0.0
        self._ci = 0.0
        self.max_abs = 0.0

    def add(self, value: complex) -> None:
        vr = value.real
        vi = value.imag
        mag = abs(value)
        if mag > self.max_abs:
            self.max_abs = mag
        s = self._sr
        t = s + vr
        if abs(s) >= abs(vr):
            self._cr += (s - t) + vr
        else:
            self._cr += (vr - t) + s
        self._sr = t
        s = self._si
        t = s + vi
        if abs(s) >= abs(vi):
            self._ci += (s - t) + vi
        else:
            self._ci += (vi - t) + s
        self._si = t

    @property
    def value(self) -> complex:
        return complex(self._sr + self._cr, self._si + self._ci)


def permanent(A, *, method: str = "gray") -> complex:
    """Permanent of a square complex matrix.

    Uses Ryser's inclusion/exclusion formula in O(n 2^n) time.  The default
    iterates column subsets in Gray-code order, updating the running row
    sums by a single column per step and accumulating terms with
    compensated summation.  ``method="binary"`` recomputes each subset from
    scratch in plain counting order; it is slower and uncompensated, and is
    kept as an independent cross-check.

    The permanent of the 0 x 0 matrix is 1 (empty product); any matrix with
    an all-zero row, including the k x k zero matrix, has permanent 0.
    """
    A = as_complex_matrix(A, "A")
    n = require_square(A, "A")
    if n == 0:
        return 1 + 0j
    if method == "binary":
        return _permanent_binary(A)
    if method != "gray":
        raise InvalidInput(f"unknown permanent method {method!r}")

    cols = [np.ascontiguousarray(A[:, j]) for j in range(n)]
    row_sums = np.zeros(n, dtype=np.complex128)
    acc = CompensatedSum()
    included = 0
    popcount = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        bit = 1 << j
        included ^= bit
        if included & bit:
            row_sums += cols[j]
            popcount += 1
        else:
            row_sums -= cols[j]
            popcount -= 1
        prod = complex(row_sums.prod())
        if (n - popcount) & 1:
            prod = -prod
        acc.add(prod)
    return acc.value


def _permanent_binary(A: np.ndarray) -> complex:
    n = A.shape[0]
    total = 0 + 0j
    for k in range(1, 1 << n):
        mask = [j for j in range(n) if k >> j & 1]
        prod = complex(A[:, mask].sum(axis=1).prod())
        total += -prod if (n - len(mask)) & 1 else prod
    return total


def repeat_rows_cols(A, row_rep: Sequence[int], col_rep: Sequence[int]) -> np.ndarray:
    """Repeat the j-th row ``row_rep[j]`` times and j-th column ``col_rep[j]`` times.

    Zero repetitions delete the row/column; output ordering follows the
    original index order.
    """
    A = as_complex_matrix(A, "A")
    row_rep = np.asarray(row_rep, dtype=np.intp)
    col_rep = np.asarray(col_rep, dtype=np.intp)
    if row_rep.shape != (A.shape[0],):
        raise DimensionMismatch(
            f"row repetitions have length {row_rep.size}, matrix has {A.shape[0]} rows"
        )
    if col_rep.shape != (A.shape[1],):
        raise DimensionMismatch(
            f"column repetitions have length {col_rep.size}, matrix has {A.shape[1]} columns"
        )
    if np.any(row_rep < 0) or np.any(col_rep < 0):
        raise InvalidInput("repetition counts must be non-negative")
    return np.repeat(np.repeat(A, row_rep, axis=0), col_rep, axis=1)


def select_rows(A, rows: Iterable[int]) -> np.ndarray:
    """Select the given rows of ``A`` (in the given order)."""
    A = as_complex_matrix(A, "A")
    idx = list(rows)
    for r in idx:
        if not 0 <= r < A.shape[0]:
            raise DimensionMismatch(f"row index {r} out of range for {A.shape[0]} rows")
    return A[idx, :].reshape(len(idx), A.shape[1])


def check_occupation(n: Sequence[int], length: int, name: str = "n") -> tuple[int, ...]:
    """Validate a per-mode photon occupation list of the given length."""
    n = tuple(int(v) for v in n)
    if len(n) != length:
        raise DimensionMismatch(f"{name} has length {len(n)}, expected {length}")
    if any(v < 0 for v in n):
        raise InvalidInput(f"{name} entries must be non-negative")
    if any(v > MAX_MODE_OCCUPATION for v in n):
        raise InvalidInput(
            f"{name} entries above {MAX_MODE_OCCUPATION} photons per mode are not supported"
        )
    return n


def check_click_pattern(d: Sequence[int], length: int, name: str = "d") -> tuple[int, ...]:
    """Validate a threshold-detector bit string of the given length."""
    d = tuple(int(v) for v in d)
    if len(d) != length:
        raise DimensionMismatch(f"{name} has length {len(d)}, expected {length}")
    if any(v not in (0, 1) for v in d):
        raise InvalidInput(f"{name} must be a bit string")
    return d


def check_mode_set(modes: Iterable[int], M: int, name: str = "modes") -> list[int]:
    """Validate a duplicate-free set of mode indices; returns them sorted."""
    out = [int(v) for v in modes]
    if len(set(out)) != len(out):
        raise InvalidInput(f"{name} contains duplicate modes")
    for j in out:
        if not 0 <= j < M:
            raise DimensionMismatch(f"{name} mode {j} out of range for {M} modes")
    return sorted(out)


def mode_pair_indices(modes: Iterable[int], M: int) -> list[int]:
    """Basis indices ``[j, ..., j + M, ...]`` for the given modes.

    Preserves the two-block ladder ordering: all annihilation indices first,
    then the matching creation indices.
    """
    modes = list(modes)
    for j in modes:
        if not 0 <= j < M:
            raise DimensionMismatch(f"mode index {j} out of range for {M} modes")
    return modes + [j + M for j in modes]


def select_mode_pairs(A, modes: Iterable[int], M: int) -> np.ndarray:
    """Principal submatrix of a 2M x 2M matrix on the paired indices of ``modes``."""
    A = as_complex_matrix(A, "A")
    if A.shape != (2 * M, 2 * M):
        raise DimensionMismatch(f"expected a {2 * M} x {2 * M} matrix, got {A.shape}")
    idx = mode_pair_indices(modes, M)
    return A[np.ix_(idx, idx)]


def select_mode_pairs_vec(v, modes: Iterable[int], M: int) -> np.ndarray:
    v = as_complex_vector(v, "v")
    if v.shape != (2 * M,):
        raise DimensionMismatch(f"expected a length-{2 * M} vector, got {v.shape}")
    return v[mode_pair_indices(modes, M)]


def repeat_mode_pairs(A, occupation: Sequence[int], M: int) -> np.ndarray:
    """Like :func:`select_mode_pairs` but with per-mode repetition counts.

    Mode ``j`` contributes ``occupation[j]`` copies of each of its two basis
    indices, keeping the two-block ordering.
    """
    A = as_complex_matrix(A, "A")
    if A.shape != (2 * M, 2 * M):
        raise DimensionMismatch(f"expected a {2 * M} x {2 * M} matrix, got {A.shape}")
    idx = repeat_mode_pair_indices(occupation, M)
    return A[np.ix_(idx, idx)]


def repeat_mode_pair_indices(occupation: Sequence[int], M: int) -> list[int]:
    occupation = list(occupation)
    if len(occupation) != M:
        raise DimensionMismatch(f"occupation has length {len(occupation)}, expected {M}")
    if any(c < 0 for c in occupation):
        raise InvalidInput("occupation entries must be non-negative")
    first = [j for j, c in enumerate(occupation) for _ in range(c)]
    return first + [j + M for j in first]


def block_swap(m: int) -> np.ndarray:
    """The 2m x 2m block-swap matrix [[0, I], [I, 0]]."""
    X = np.zeros((2 * m, 2 * m), dtype=np.complex128)
    X[:m, m:] = np.eye(m)
    X[m:, :m] = np.eye(m)
    return X


def hermitian_inverse_det(H, tol: float = TAU_HERM) -> tuple[np.ndarray, float]:
    """Inverse and determinant of a Hermitian positive definite matrix.

    Uses a Cholesky factorization, so the determinant comes back as a real
    positive number.  ``det`` of the 0 x 0 matrix is 1.
    """
    H = as_complex_matrix(H, "H")
    n = require_square(H, "H")
    if n == 0:
        return np.zeros((0, 0), dtype=np.complex128), 1.0
    check_hermitian(H, tol, "H")
    try:
        L = np.linalg.cholesky(H)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"H is not positive definite: {exc}") from exc
    diag = np.real(np.diag(L))
    det = float(np.prod(diag) ** 2)
    Linv = np.linalg.inv(L)
    return Linv.conj().T @ Linv, det


def hermitian_sqrt(H, tol_psd: float = TAU_PSD, tol_herm: float = TAU_HERM) -> np.ndarray:
    """Unique PSD square root of a Hermitian PSD matrix.

    Eigenvalues in ``(-tol_psd, tol_psd)`` are flushed to exactly zero:
    the square root would otherwise amplify rounding noise near zero into
    ~1e-8 entries, which ruins e.g. the unitarity of channel dilations.
    Anything below ``-tol_psd`` raises.
    """
    H = as_complex_matrix(H, "H")
    n = require_square(H, "H")
    if n == 0:
        return H.copy()
    check_hermitian(H, tol_herm, "H")
    w, V = np.linalg.eigh(H)
    if w[0] < -tol_psd:
        raise NotPositiveDefinite(f"smallest eigenvalue {w[0]:.3e} below -{tol_psd:.1e}")
    w = np.where(w < tol_psd, 0.0, w)
    return (V * np.sqrt(w)) @ V.conj().T


def environment_matrix(T) -> np.ndarray:
    """The vacuum-environment overlap matrix I - T^dag T of a lossy channel."""
    T = as_complex_matrix(T, "T")
    return np.eye(T.shape[1], dtype=np.complex128) - T.conj().T @ T


def check_channel(T, tol_sv: float = TAU_SV) -> np.ndarray:
    """Validate that all singular values of ``T`` are at most ``1 + tol_sv``."""
    T = as_complex_matrix(T, "T")
    if T.size:
        smax = float(np.linalg.norm(T, 2))
        if smax > 1.0 + tol_sv:
            raise InvalidChannel(f"largest singular value {smax:.12g} exceeds 1")
    return T


def unitary_dilation(T, tol_sv: float = TAU_SV) -> np.ndarray:
    """Embed a sub-unitary ``M_out x M_in`` transmission matrix in a unitary.

    Returns the ``(M_out + M_in)``-dimensional block matrix

        [[ T,                (I - T T^dag)^1/2 ],
         [ (I - T^dag T)^1/2,        -T^dag    ]]

    whose top-left ``M_out x M_in`` block is exactly ``T``.  Rows index
    output modes (physical first, then environment), columns index input
    modes (physical first, then environment).
    """
    T = check_channel(T, tol_sv)
    m_out, m_in = T.shape
    upper_right = hermitian_sqrt(np.eye(m_out) - T @ T.conj().T)
    lower_left = hermitian_sqrt(environment_matrix(T))
    U = np.empty((m_out + m_in, m_out + m_in), dtype=np.complex128)
    U[:m_out, :m_in] = T
    U[:m_out, m_in:] = upper_right
    U[m_out:, :m_in] = lower_left
    U[m_out:, m_in:] = -T.conj().T
    return U


def is_unitary(U: np.ndarray, tol: float = 1e-10) -> bool:
    if U.shape[0] != U.shape[1]:
        return False
    n = U.shape[0]
    if n == 0:
        return True
    return float(np.max(np.abs(U.conj().T @ U - np.eye(n)))) < tol


def haar_random_unitary(M: int, seed: int) -> np.ndarray:
    """Haar-distributed M x M unitary, deterministic for a fixed seed.

    Complex Ginibre matrix, QR decomposition, then the triangular factor's
    diagonal phases are divided out so the result carries the Haar measure
    rather than the QR convention's bias.
    """
    if M < 1:
        raise InvalidInput("M must be at least 1")
    rng = np.random.default_rng(seed)
    Z = (rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
