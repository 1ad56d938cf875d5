"""Berry phases under coordinated rotation about the field axis.

The isospectral family is ``H(phi) = U(phi) H U(phi)^dag`` with
``U(phi) = exp(-i phi Sz)``. Within a parity block the ground state sees an
effective spin-1/2 problem whose field direction makes polar angle ``Theta``
and turns with ``2 phi``; the Berry phase is minus half the solid angle swept,
traversed twice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import integrate

from . import oracle
from .errors import (
    CrossingError,
    DegenerateMarginalError,
    DiscretizationError,
    MonopoleError,
)
from .model import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SZ_DIAGONAL,
    TWO_PI,
    Branch,
    ModelParams,
    block_state,
    build_hamiltonian,
    energy_functions,
    ground_state,
    mixing_angle,
    reference_state,
    resolve_block,
    w_state,
)
from .reduced import purity_parameter, two_qubit_reduced

BETA_2 = 0.0
"""Eigenstate Berry phase of ``(|01> + |10>)/sqrt(2)``: it has zero pair magnetisation."""

MIXED_PHASE_TOL = 1e-9


def principal_value(angle: float) -> float:
    """Reduce an angle into ``(-pi, pi]``."""
    p = math.remainder(angle, TWO_PI)
    if p <= -math.pi:
        p += TWO_PI
    return p + 0.0  # no negative zero


def circle_distance(a: float, b: float) -> float:
    return abs(principal_value(a - b))


@dataclass(frozen=True)
class PhaseResult:
    raw: float
    principal: float
    branch: Branch
    block: int


@dataclass(frozen=True)
class EffectiveField:
    magnitude: float
    direction: np.ndarray = field(repr=False)
    phi: float
    block: int

    @property
    def vector(self) -> np.ndarray:
        return self.magnitude * self.direction


@dataclass(frozen=True)
class MixedPhaseResult:
    gamma_phase: float
    weights: tuple[float, float]
    eigenphases: tuple[float, float]
    defined: bool
    block: int


def rotation_diagonal(phi: float) -> np.ndarray:
    """Diagonal of ``exp(-i phi Sz)`` in the parity-ordered basis."""
    return np.exp(-1j * phi * SZ_DIAGONAL)


def rotated_hamiltonian(params: ModelParams, phi: float) -> np.ndarray:
    u = rotation_diagonal(phi)
    return (u[:, None] * build_hamiltonian(params)) * u.conj()[None, :]


# ----------------------------------------------------------------------------
# Pure state
# ----------------------------------------------------------------------------

def raw_berry_phase(theta: float, block_sign: int) -> float:
    """``-s 2 pi (1 - cos Theta)`` for a ground state in block ``s``."""
    return -block_sign * TWO_PI * (1.0 - math.cos(theta))


def berry_phase_pure(params: ModelParams, block: int | None = None) -> PhaseResult:
    """Ground-state Berry phase for one full turn ``phi: 0 -> 2 pi``.

    ``block`` selects a parity block explicitly; without it the energetic
    ground state is used and a degenerate point raises :class:`CrossingError`.
    """
    s = resolve_block(params, block)
    gs = block_state(params, s)
    raw = raw_berry_phase(gs.theta, s)
    return PhaseResult(raw=raw, principal=principal_value(raw), branch=gs.branch, block=s)


def berry_phase_discrete_oracle(
    params: ModelParams, steps: int = 4096, block: int | None = None
) -> float:
    """Discrete open-path (Pancharatnam) Berry phase, principal value.

    The starting vector is the lowest eigenvector of the parity sector from a
    dense eigensolver; the path is generated by the exact rotation, and

        arg<V_0|V_K> - sum_k arg<V_k|V_{k+1}>

    converges to the Berry phase as ``O(1/K^2)``.
    """
    if steps < 16:
        raise ValueError("steps must be at least 16")
    s = resolve_block(params, block)
    v = oracle.sector_ground_vector(params, s)
    phis = np.linspace(0.0, TWO_PI, steps + 1)
    path = np.exp(-1j * np.outer(phis, SZ_DIAGONAL)) * v[None, :]
    overlaps = np.einsum("ki,ki->k", path[:-1].conj(), path[1:])
    if np.min(np.abs(overlaps)) < 1e-12:
        raise DiscretizationError("neighbouring states became orthogonal; increase steps")
    total = np.angle(np.vdot(path[0], path[-1])) - np.sum(np.angle(overlaps))
    return principal_value(float(total))


def wilson_loop_phase(states: Sequence[np.ndarray]) -> float:
    """Gauge-invariant Berry phase ``-arg prod_k <u_k|u_{k+1}>`` of a closed loop.

    ``states`` are samples along the loop without repeating the first one; any
    phases may be attached to them.
    """
    u = np.asarray(states)
    prod = np.vdot(u[-1], u[0])
    for a, b in zip(u[:-1], u[1:]):
        prod *= np.vdot(a, b)
    if abs(prod) < 1e-300:
        raise DiscretizationError("loop product vanished")
    return -float(np.angle(prod))


# ----------------------------------------------------------------------------
# Effective two-level problem and monopole
# ----------------------------------------------------------------------------

def field_direction(theta: float, phi: float, block_sign: int) -> np.ndarray:
    st = math.sin(theta)
    return np.array(
        [st * math.cos(2.0 * phi), block_sign * st * math.sin(2.0 * phi), math.cos(theta)]
    )


def two_level_basis(block_sign: int) -> np.ndarray:
    """8x2 matrix whose columns are ``|000>, |W-bar>`` (upper) or ``|111>, |W>`` (lower)."""
    return np.column_stack([reference_state(block_sign), w_state(block_sign)])


def two_level_matrix(e0: float, b: np.ndarray) -> np.ndarray:
    """``e0 * 1 - b . Sigma``."""
    return e0 * np.eye(2) - (b[0] * PAULI_X + b[1] * PAULI_Y + b[2] * PAULI_Z)


def effective_two_level(
    params: ModelParams, phi: float, block: int | None = None
) -> tuple[EffectiveField, np.ndarray]:
    """Effective field and projected 2x2 Hamiltonian at rotation angle ``phi``.

    The field is ``dE (sin T cos 2phi, s sin T sin 2phi, cos T)``. The matrix is
    the projection of ``H(phi)`` onto the ordered pair (reference state,
    W-type state) and equals ``E0 - B . Sigma``: the ground state is aligned
    with ``B``.
    """
    s = resolve_block(params, block)
    ef = energy_functions(params, s)
    theta = mixing_angle(params, s)
    fld = EffectiveField(
        magnitude=ef.de, direction=field_direction(theta, phi, s), phi=phi % TWO_PI, block=s
    )
    return fld, two_level_matrix(ef.e0, fld.vector)


def projected_hamiltonian(params: ModelParams, phi: float, block_sign: int) -> np.ndarray:
    """Brute-force ``<a| H(phi) |b>`` over the two-level basis, for cross-checks."""
    P = two_level_basis(block_sign)
    return P.conj().T @ rotated_hamiltonian(params, phi) @ P


def _check_gap(params: ModelParams, s: int, de: float, tol: float | None):
    tol = params.tol_degeneracy if tol is None else tol
    if de <= tol:
        raise MonopoleError(
            f"effective field vanishes (dE={de:.3e}) at field argument {s * params.h:+.6g}, "
            f"gamma={params.gamma:.6g}; monopoles sit at (gamma, h) = (1, -1/3) for the upper "
            "block and (1, +1/3) for the lower block"
        )


def monopole_field(
    params: ModelParams, phi: float = 0.0, block: int | None = None, tol: float | None = None
) -> np.ndarray:
    """Berry gauge field ``-s n / (2 dE^2)`` at the current field point."""
    s = resolve_block(params, block)
    de = energy_functions(params, s).de
    _check_gap(params, s, de, tol)
    n = field_direction(mixing_angle(params, s), phi, s)
    return -s * 0.5 * n / de**2


def monopole_flux(params: ModelParams, block: int | None = None) -> float:
    """Flux of the monopole field through the cap bounded by the field loop.

    The cap is the part of the sphere of radius ``dE`` with polar angle below
    ``Theta``, covered twice (azimuth ``0..4 pi``) and oriented outwards.
    Evaluated by adaptive quadrature of ``F . n dA``.
    """
    s = resolve_block(params, block)
    de = energy_functions(params, s).de
    _check_gap(params, s, de, None)
    theta = mixing_angle(params, s)

    def integrand(polar, azimuth):
        n = np.array([math.sin(polar) * math.cos(azimuth),
                      math.sin(polar) * math.sin(azimuth),
                      math.cos(polar)])
        fld = -s * 0.5 * n / de**2
        return float(fld @ n) * de**2 * math.sin(polar)

    val, _ = integrate.dblquad(integrand, 0.0, 2.0 * TWO_PI, 0.0, theta, epsabs=1e-12, epsrel=1e-12)
    return val


def lattice_berry_flux(
    params: ModelParams, block: int | None = None, n_polar: int = 24, n_phi: int = 256
) -> float:
    """Ground-state Berry flux of the effective 2x2 problem through the swept cap.

    The cap is parametrised by (polar angle t <= Theta, rotation angle phi) with
    the field direction of :func:`field_direction`; each plaquette contributes
    ``-arg`` of its four-overlap product, so the sum is the raw phase (no
    2 pi ambiguity). Eigenvectors come from a dense solver in arbitrary gauge.
    """
    s = resolve_block(params, block)
    ef = energy_functions(params, s)
    theta = mixing_angle(params, s)
    ts = np.linspace(0.0, theta, n_polar + 1)
    phis = np.linspace(0.0, TWO_PI, n_phi, endpoint=False)
    u = np.empty((n_polar + 1, n_phi, 2), dtype=complex)
    for i, t in enumerate(ts):
        for j, p in enumerate(phis):
            b = ef.de * field_direction(t, p, s)
            u[i, j] = np.linalg.eigh(two_level_matrix(ef.e0, b))[1][:, 0]
    flux = 0.0
    for i in range(n_polar):
        for j in range(n_phi):
            jn = (j + 1) % n_phi
            a, b_, c, d = u[i, j], u[i + 1, j], u[i + 1, jn], u[i, jn]
            loop = np.vdot(a, b_) * np.vdot(b_, c) * np.vdot(c, d) * np.vdot(d, a)
            flux -= float(np.angle(loop))
    return flux


# ----------------------------------------------------------------------------
# Two-qubit mixed state
# ----------------------------------------------------------------------------

def eigenstate_berry_phase(theta: float, block_sign: int) -> float:
    """Berry phase of the pair eigenvector ``psi1``: ``-s 2 pi (1 - cos T)/(2 + cos T)``."""
    c = math.cos(theta)
    return -block_sign * TWO_PI * (1.0 - c) / (2.0 + c)


def _marginal_degenerate(theta: float, tol: float) -> bool:
    return abs(purity_parameter(theta)) <= tol


def mixed_berry_phase_two_qubit(
    params: ModelParams,
    block: int | None = None,
    tol: float = MIXED_PHASE_TOL,
    strict: bool = True,
) -> MixedPhaseResult:
    """Interferometric mixed-state Berry phase of any qubit pair.

    ``arg{(2 + cos T) exp(i beta_1) + (1 - cos T)}``. Undefined when the two
    nonzero eigenvalues of the pair marginal coincide (``|r| <= tol``, the GHZ
    point); then :class:`DegenerateMarginalError` is raised, or with
    ``strict=False`` a result with ``defined=False`` and a NaN phase is returned.
    """
    if block is None:
        gs = ground_state(params)
        if gs.is_degenerate:
            if all(_marginal_degenerate(c.theta, tol) for c in gs.candidates):
                if strict:
                    raise DegenerateMarginalError(
                        "mixed-state phase undefined: the pair marginal has nonzero "
                        "degenerate eigenvalues (GHZ ground state)"
                    )
                c = gs.candidates[0]
                return _undefined(c.theta, c.block)
            raise CrossingError(
                f"ground state is degenerate at (gamma={params.gamma}, h={params.h}); "
                "pass block=+1 or block=-1"
            )
        s = gs.block
    else:
        s = resolve_block(params, block)
    theta = mixing_angle(params, s)
    if _marginal_degenerate(theta, tol):
        if strict:
            raise DegenerateMarginalError(
                "mixed-state phase undefined: the pair marginal has nonzero degenerate eigenvalues"
            )
        return _undefined(theta, s)
    c = math.cos(theta)
    beta1 = eigenstate_berry_phase(theta, s)
    g = complex((2.0 + c) * np.exp(1j * beta1) + (1.0 - c))
    return MixedPhaseResult(
        gamma_phase=principal_value(math.atan2(g.imag, g.real)),
        weights=((2.0 + c) / 3.0, (1.0 - c) / 3.0),
        eigenphases=(beta1, BETA_2),
        defined=True,
        block=s,
    )


def _undefined(theta: float, s: int) -> MixedPhaseResult:
    c = math.cos(theta)
    return MixedPhaseResult(
        gamma_phase=math.nan,
        weights=((2.0 + c) / 3.0, (1.0 - c) / 3.0),
        eigenphases=(eigenstate_berry_phase(theta, s), BETA_2),
        defined=False,
        block=s,
    )


def mixed_phase_arctan_form(theta: float, block_sign: int) -> float:
    """Single-argument arctan presentation of the mixed phase.

    Agrees with :func:`mixed_berry_phase_two_qubit` only up to a multiple of
    pi; kept for comparison, not used downstream.
    """
    c = math.cos(theta)
    b1 = eigenstate_berry_phase(theta, block_sign)
    den = 1.0 - c + (2.0 + c) * math.cos(b1)
    return math.atan((2.0 + c) * math.sin(b1) / den) if den != 0.0 else math.copysign(math.pi / 2, b1)


def pair_rotation_diagonal(phi: float) -> np.ndarray:
    """Diagonal of ``exp(-i phi (Z1 + Z2)/2)`` on ``|00>, |01>, |10>, |11>``."""
    return np.exp(-1j * phi * np.array([1.0, 0.0, 0.0, -1.0]))


def two_qubit_visibility(params: ModelParams, block: int | None = None) -> float:
    """Interference visibility ``|p1 exp(i beta_1) + p2 exp(i beta_2)|``.

    Bounded below by ``|p1 - p2| = |r|``, so it vanishes only at the GHZ point.
    """
    s = resolve_block(params, block)
    theta = mixing_angle(params, s)
    c = math.cos(theta)
    beta1 = eigenstate_berry_phase(theta, s)
    return float(abs((2.0 + c) * np.exp(1j * beta1) + (1.0 - c)) / 3.0)


def mixed_berry_phase_discrete(
    params: ModelParams, steps: int = 512, block: int | None = None
) -> float:
    """Mixed-state phase from numerically transported eigenvectors.

    The pair marginal is rotated, re-diagonalised at every step by the dense
    solver, and each eigenvector with nonzero weight gets a closed-loop
    Wilson phase; the phases are then combined with the weights.
    """
    s = resolve_block(params, block)
    rho = two_qubit_reduced(block_state(params, s)).varrho.matrix
    phis = np.linspace(0.0, TWO_PI, steps, endpoint=False)
    frames = []
    for p in phis:
        u = pair_rotation_diagonal(p)
        frames.append(oracle.hermitian_eigensystem((u[:, None] * rho) * u.conj()[None, :]))
    weights = frames[0].values
    total = 0j
    for k in np.flatnonzero(weights > 1e-9):
        beta = wilson_loop_phase([f.vectors[:, k] for f in frames])
        total += weights[k] * np.exp(1j * beta)
    return float(np.angle(total))
