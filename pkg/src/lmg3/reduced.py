"""One- and two-qubit marginals of the ground state.

Qubits are numbered 1, 2, 3 from the left of ``|q1 q2 q3>``. Reduced operators
are written in the kron basis of the kept qubits (``|0>, |1>`` or
``|00>, |01>, |10>, |11>``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError, InvalidStateError
from .model import GroundState, to_tensor_order

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4, 8):
            raise InvalidStateError(f"density operator must be 2x2, 4x4 or 8x8, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-13:
            raise InvalidStateError("density operator is not Hermitian within 1e-13")
        if abs(np.trace(m).real - 1.0) > 1e-12:
            raise InvalidStateError(f"trace {np.trace(m).real!r} differs from 1")
        if np.linalg.eigvalsh(m).min() < -1e-12:
            raise InvalidStateError("density operator has a negative eigenvalue")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        return cls(np.outer(psi, psi.conj()))


@dataclass(frozen=True)
class ReducedOneQubit:
    r: float
    rho: DensityOperator


@dataclass(frozen=True)
class ReducedTwoQubit:
    p1: float
    p2: float
    psi1: np.ndarray = field(repr=False)
    psi2: np.ndarray = field(repr=False)
    varrho: DensityOperator = field(repr=False)


PSI2 = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)
"""``(|01> + |10>)/sqrt(2)``, the parameter-independent eigenvector of the pair marginal."""


def _as_tensor(state) -> np.ndarray:
    """Parity-ordered 8-vector or 8x8 operator -> rank-3 or rank-6 kron tensor."""
    m = np.asarray(getattr(state, "matrix", state), dtype=complex)
    if m.shape == (8,):
        return to_tensor_order(m).reshape(2, 2, 2)
    if m.shape == (8, 8):
        return to_tensor_order(m).reshape(2, 2, 2, 2, 2, 2)
    raise DomainError(f"expected an 8-vector or 8x8 operator, got shape {m.shape}")


def _keep_set(keep: Iterable[int]) -> tuple[int, ...]:
    ks = tuple(sorted(set(int(k) for k in keep)))
    if not ks or len(ks) == 3 or not set(ks) <= {1, 2, 3}:
        raise DomainError(f"keep must be a nonempty proper subset of {{1, 2, 3}}, got {keep!r}")
    return ks


def partial_trace(state, keep: Iterable[int]) -> DensityOperator:
    """Reduced density operator on the qubits in ``keep``.

    ``state`` is a parity-ordered pure 8-vector or an 8x8 density operator.
    """
    ks = _keep_set(keep)
    t = _as_tensor(state)
    kept = [k - 1 for k in ks]
    traced = [q for q in range(3) if q not in kept]
    if t.ndim == 3:
        # rho = A A^dag with A the (kept x traced) reshaping of psi
        A = np.transpose(t, kept + traced).reshape(2 ** len(kept), -1)
        rho = A @ A.conj().T
    else:
        letters = "abc"
        rows = letters
        cols = "".join(letters[q].upper() if q in kept else letters[q] for q in range(3))
        out = "".join(letters[q] for q in kept) + "".join(letters[q].upper() for q in kept)
        rho = np.einsum(rows + cols + "->" + out, t)
        rho = rho.reshape(2 ** len(kept), 2 ** len(kept))
    rho = (rho + rho.conj().T) / 2.0
    return DensityOperator(rho)


def marginal_factor(psi: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Matrix ``A`` with ``partial_trace(psi, keep) = A A^dag`` (no square roots)."""
    ks = _keep_set(keep)
    t = _as_tensor(psi)
    kept = [k - 1 for k in ks]
    traced = [q for q in range(3) if q not in kept]
    return np.transpose(t, kept + traced).reshape(2 ** len(kept), -1)


def purity_parameter(theta: float) -> float:
    """``r = (1 + 2 cos Theta) / 3``."""
    return (1.0 + 2.0 * math.cos(theta)) / 3.0


def _require_nondegenerate(gs: GroundState):
    if gs.is_degenerate:
        raise DomainError("reduced states need a definite branch; use block_state(params, block)")


def one_qubit_reduced(gs: GroundState) -> ReducedOneQubit:
    """Single-qubit marginal ``(1 + s r sigma_z)/2`` for a state in block ``s``.

    The upper block carries ``+r``; the lower block is its bit-flip image, so
    its Bloch vector points the other way (``|111>`` reduces to ``|1><1|``).
    """
    _require_nondegenerate(gs)
    r = purity_parameter(gs.theta)
    z = gs.block * r
    rho = np.diag([(1.0 + z) / 2.0, (1.0 - z) / 2.0]).astype(complex)
    return ReducedOneQubit(r=r, rho=DensityOperator(rho))


def psi1_vector(theta: float, block_sign: int) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    norm = math.sqrt(2.0 + math.cos(theta))
    v = np.zeros(4, dtype=complex)
    if block_sign == 1:
        v[0], v[3] = SQRT3 * c, s
    else:
        v[3], v[0] = SQRT3 * c, s
    return v / norm


def two_qubit_reduced(gs: GroundState) -> ReducedTwoQubit:
    """Pair marginal ``p1 |psi1><psi1| + p2 |psi2><psi2|`` with ``p1,2 = (1 +- r)/2``."""
    _require_nondegenerate(gs)
    r = purity_parameter(gs.theta)
    p1, p2 = (1.0 + r) / 2.0, (1.0 - r) / 2.0
    psi1 = psi1_vector(gs.theta, gs.block)
    varrho = p1 * np.outer(psi1, psi1.conj()) + p2 * np.outer(PSI2, PSI2.conj())
    return ReducedTwoQubit(p1=p1, p2=p2, psi1=psi1, psi2=PSI2.copy(), varrho=DensityOperator(varrho))
