"""Brute-force numerical machinery used to cross-check the closed forms.

Nothing here reads a closed-form expression: Hamiltonians are assembled from
Pauli Kronecker products, eigenvectors come from a dense Hermitian solver, and
susceptibilities from finite differences of overlaps.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import DomainError, InvalidStateError, OracleInconsistencyError
from .model import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ModelParams,
    _pauli_on,
    theta_of,
    to_parity_order,
)

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray  # columns

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


def _canonical_basis(Q: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of span(Q).

    Unit vectors are projected onto the subspace and Gram-Schmidt'ed in index
    order; which unit vectors are used is decided by a pivoted QR so the
    projected vectors are well conditioned. The result depends only on the
    subspace, not on the basis LAPACK happened to return.
    """
    n, k = Q.shape
    _, _, piv = scipy.linalg.qr(Q.conj().T, pivoting=True, mode="economic")
    chosen = np.sort(piv[:k])
    out = np.empty((n, k), dtype=complex)
    for j, i in enumerate(chosen):
        v = Q @ Q[i].conj()  # projection of e_i
        for m in range(j):
            v = v - out[:, m] * np.vdot(out[:, m], v)
        out[:, j] = v / np.linalg.norm(v)
    # second pass of Gram-Schmidt for orthonormality at machine precision
    for j in range(k):
        v = out[:, j]
        for m in range(j):
            v = v - out[:, m] * np.vdot(out[:, m], v)
        out[:, j] = v / np.linalg.norm(v)
    return out


def hermitian_eigensystem(m: np.ndarray, cluster_tol: float = 1e-10) -> EigenDecomposition:
    """Full eigendecomposition of a small dense Hermitian matrix.

    Values ascend. Within each cluster of (numerically) degenerate values the
    eigenvectors follow the index-ordered Gram-Schmidt convention of
    :func:`_canonical_basis`; for a non-degenerate value this fixes the phase
    so that the first pivot component is real and positive.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise DomainError("matrix is not Hermitian within 1e-12")
    m = (m + m.conj().T) / 2.0
    w, V = np.linalg.eigh(m)
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    vecs = np.empty_like(V)
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[stop - 1] <= cluster_tol * scale:
            stop += 1
        vecs[:, start:stop] = _canonical_basis(V[:, start:stop])
        start = stop
    return EigenDecomposition(values=w, vectors=vecs)


def psd_sqrt(m: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in ``[-tol, 0)`` are clamped to zero."""
    m = np.asarray(getattr(m, "matrix", m), dtype=complex)
    w, V = np.linalg.eigh((m + m.conj().T) / 2.0)
    if w.size and w.min() < -tol:
        raise InvalidStateError(f"matrix has eigenvalue {w.min():.3e} < -{tol:g}")
    w = np.clip(w, 0.0, None)
    return (V * np.sqrt(w)) @ V.conj().T


def fd_susceptibility(
    f: Callable[[float], float], delta: float, *, complement: bool = False
) -> float:
    """Symmetric second difference ``(2 - f(d) - f(-d)) / d^2`` of a fidelity ``f``.

    With ``complement=True`` the callback returns ``1 - F`` directly, which
    avoids the cancellation in ``1 - F`` when the infidelity is tiny.
    """
    if not delta > 0:
        raise DomainError("delta must be positive")
    vals = (f(delta), f(-delta))
    if complement:
        for v in vals:
            if v < -1e-9 or v > 1.0 + 1e-9:
                raise OracleInconsistencyError(f"infidelity {v!r} outside [0, 1]")
        return (vals[0] + vals[1]) / delta**2
    for v in vals:
        if v < 0.0 or v > 1.0 + 1e-9:
            raise OracleInconsistencyError(f"fidelity {v!r} outside [0, 1]")
    # each 1 - f is exact for f in [1/2, 1]; 2 - f - f would round twice
    return ((1.0 - vals[0]) + (1.0 - vals[1])) / delta**2


def uhlmann_infidelity(A: np.ndarray, B: np.ndarray) -> float:
    """``1 - F(AA^dag, BB^dag)`` from factors, as ``min_U |A - B U|_F^2 / 2``.

    Both factors must have the same shape and unit Frobenius norm. The minimum
    is attained at the unitary polar factor of ``B^dag A``; the difference of
    two nearby matrices is formed explicitly, so no cancellation against 1.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.ndim == 1:
        A, B = A[:, None], B[:, None]
    W, _, Vh = np.linalg.svd(B.conj().T @ A)
    U = W @ Vh
    return 0.5 * float(np.linalg.norm(A - B @ U) ** 2)


# ----------------------------------------------------------------------------
# Independent model construction
# ----------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _pauli_terms() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Kron-ordered ``sum XX``, ``sum YY`` over pairs and ``sum Z``; built once."""
    pairs = ((0, 1), (1, 2), (0, 2))
    xx = sum(_pauli_on(PAULI_X, i) @ _pauli_on(PAULI_X, j) for i, j in pairs)
    yy = sum(_pauli_on(PAULI_Y, i) @ _pauli_on(PAULI_Y, j) for i, j in pairs)
    z = sum(_pauli_on(PAULI_Z, k) for k in range(3))
    for m in (xx, yy, z):
        m.setflags(write=False)
    return xx, yy, z


def pauli_hamiltonian(params: ModelParams) -> np.ndarray:
    """8x8 Hamiltonian assembled from Pauli products, returned in parity order.

    Pair couplings ``-(1/6)(XX + gamma YY)`` summed over the three pairs plus a
    Zeeman term whose sign matches the block matrices (``+h Sz`` in the
    ``sigma_z|0> = +|0>`` convention).
    """
    xx, yy, z = _pauli_terms()
    H = -(xx + params.gamma * yy) / 6.0 + 0.5 * params.h * z
    return to_parity_order(H)


def total_spin_squared() -> np.ndarray:
    S = [sum(_pauli_on(p, k) for k in range(3)) / 2.0 for p in (PAULI_X, PAULI_Y, PAULI_Z)]
    return to_parity_order(sum(s @ s for s in S))


def _sector_slice(block_sign: int) -> slice:
    if block_sign not in (1, -1):
        raise DomainError(f"block sign must be +1 or -1, got {block_sign!r}")
    return slice(0, 4) if block_sign == 1 else slice(4, 8)


def sector_eigensystem(params: ModelParams, block_sign: int) -> EigenDecomposition:
    """Dense eigensystem of one parity sector of :func:`pauli_hamiltonian`, embedded in 8 dims."""
    sl = _sector_slice(block_sign)
    H = pauli_hamiltonian(params)
    eig = hermitian_eigensystem(H[sl, sl])
    vecs = np.zeros((8, 4), dtype=complex)
    vecs[sl, :] = eig.vectors
    return EigenDecomposition(eig.values, vecs)


def sector_ground_vector(params: ModelParams, block_sign: int) -> np.ndarray:
    """Lowest eigenvector of one parity sector, phase fixed so that it overlaps
    the sector's reference state (``|000>`` or ``|111>``) or, failing that, its
    first nonzero component non-negatively."""
    v = sector_eigensystem(params, block_sign).vectors[:, 0]
    nz = np.flatnonzero(np.abs(v) > 1e-8)
    k = 0 if block_sign == 1 else 4
    pivot = k if abs(v[k]) > 1e-8 else nz[0]
    return v * (abs(v[pivot]) / v[pivot])


def spectrum_dense(params: ModelParams) -> np.ndarray:
    return hermitian_eigensystem(pauli_hamiltonian(params)).values


def theta_derivative_fd(params: ModelParams, block_sign: int, step: float = 1e-5) -> float:
    """Fourth-order central difference of ``h -> Theta(gamma, block_sign * h)``.

    Differences are taken on the circle so a wrap through 0 = 2 pi is harmless.
    """
    s = 1 if block_sign == 1 else -1
    t0 = theta_of(params.gamma, s * params.h)

    def d(k):
        return math.remainder(theta_of(params.gamma, s * (params.h + k * step)) - t0, 2 * math.pi)

    return (-d(2) + 8.0 * d(1) - 8.0 * d(-1) + d(-2)) / (12.0 * step)
