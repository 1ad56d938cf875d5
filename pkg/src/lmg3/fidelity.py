"""Fidelity susceptibility of the ground state and of its marginals.

The driving parameter is ``h``: ``H(gamma, h) = H0 + h HI``. Within a parity
block the ground state is ``cos(T/2)|ref> + sin(T/2)|W>``, so every
susceptibility is a function of ``T`` and ``dT/dh`` only:

    chi_full = sin(T)^2 / (4 dE^2) = T'^2 / 4
    chi_1    = (1 + cos T) T'^2 / (4 (2 + cos T))
    chi_2    = chi_1 + T'^2 / (4 (2 + cos T)) = T'^2 / 4

The gap factor 4 comes from the excited partner sitting ``2 dE`` above the
ground state. ``chi_2 = chi_full`` is not an accident: the pair marginal of a
permutation-symmetric three-qubit state in one parity block determines the
state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .errors import DomainError, NearDegeneracyError
from .model import (
    SQRT3,
    ModelParams,
    _check_block,
    eigensystem_closed_form,
    energy_functions,
    mixing_angle,
    radicand,
    resolve_block,
    spin_operators,
)
from .reduced import DensityOperator, marginal_factor

DEFAULT_DELTA_H = 1e-4
ISOTROPIC_TOL = 1e-9
NEGATIVE_NOISE = 1e-12


class Kind(enum.Enum):
    FULL = "Full"
    ONE_QUBIT = "OneQubit"
    TWO_QUBIT = "TwoQubit"


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    PERTURBATIVE_SUM = "PerturbativeSum"
    FINITE_DIFFERENCE = "FiniteDifference"


@dataclass(frozen=True)
class SusceptibilityResult:
    value: float
    kind: Kind
    method: Method

    def __post_init__(self):
        v = float(self.value)
        if v < -NEGATIVE_NOISE:
            raise DomainError(f"negative susceptibility {v!r}")
        object.__setattr__(self, "value", max(v, 0.0))


@dataclass(frozen=True)
class DrivingSplit:
    h0: np.ndarray = field(repr=False)
    hI: np.ndarray = field(repr=False)

    def hamiltonian(self, h: float) -> np.ndarray:
        return self.h0 + h * self.hI


def driving_split(gamma: float) -> DrivingSplit:
    """``H0 = -(Sx^2 + gamma Sy^2)/3 + (1 + gamma)/4`` and ``HI = Sz``."""
    sx, sy, sz = spin_operators()
    h0 = -(sx @ sx + gamma * sy @ sy) / 3.0 + 0.25 * (1.0 + gamma) * np.eye(8)
    return DrivingSplit(h0=h0, hI=sz.copy())


def _block_gap(params: ModelParams, s: int) -> float:
    return 2.0 * energy_functions(params, s).de


def _require_gap(params: ModelParams, s: int):
    gap = _block_gap(params, s)
    if gap <= params.tol_degeneracy:
        raise NearDegeneracyError(
            f"gap {gap:.3e} below tolerance at (gamma={params.gamma}, h={params.h}), block {s:+d}"
        )


def fidelity_susceptibility_sum(
    params: ModelParams, block: int | None = None
) -> SusceptibilityResult:
    """``sum_n |<n|HI|g>|^2 / (E_n - E_g)^2`` over the closed-form eigenstates.

    Terms whose matrix element vanishes are skipped before dividing, which
    covers the doublets and the other parity block (degenerate with ``g`` on a
    crossing line but never coupled to it).
    """
    s = resolve_block(params, block)
    _require_gap(params, s)
    states = eigensystem_closed_form(params)
    g_index = 1 if s == 1 else 5  # E- of the block, see eigensystem_closed_form
    e_g, v_g = states[g_index]
    hv = driving_split(params.gamma).hI @ v_g
    total = 0.0
    for n, (e_n, v_n) in enumerate(states):
        if n == g_index:
            continue
        amp2 = abs(np.vdot(v_n, hv)) ** 2
        if amp2 <= 1e-28:
            continue
        total += amp2 / (e_n - e_g) ** 2
    return SusceptibilityResult(total, Kind.FULL, Method.PERTURBATIVE_SUM)


def fidelity_susceptibility_closed(
    params: ModelParams, block: int | None = None
) -> SusceptibilityResult:
    """``sin(T)^2 / (4 dE^2)`` on the active block."""
    s = resolve_block(params, block)
    _require_gap(params, s)
    de = energy_functions(params, s).de
    value = math.sin(mixing_angle(params, s)) ** 2 / (4.0 * de * de)
    return SusceptibilityResult(value, Kind.FULL, Method.CLOSED_FORM)


# ----------------------------------------------------------------------------
# Bures fidelity
# ----------------------------------------------------------------------------

def _as_density(x) -> np.ndarray:
    return x.matrix if isinstance(x, DensityOperator) else DensityOperator(x).matrix


def bures_fidelity(a, b, support_tol: float = 1e-12) -> float:
    """Uhlmann fidelity ``Tr sqrt(sqrt(a) b sqrt(a))`` (not squared).

    ``sqrt(a) b sqrt(a)`` shares its nonzero spectrum with
    ``L^dag b L`` where ``a = L L^dag`` is restricted to the support of ``a``;
    working there keeps rank-deficient inputs well conditioned.
    """
    ma, mb = _as_density(a), _as_density(b)
    if ma.shape != mb.shape:
        raise DomainError(f"dimension mismatch {ma.shape} vs {mb.shape}")
    w, V = np.linalg.eigh(ma)
    keep = w > support_tol * max(float(w.max()), 1.0)
    L = V[:, keep] * np.sqrt(w[keep])
    m = L.conj().T @ mb @ L
    lam = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return float(min(1.0, np.sum(np.sqrt(np.clip(lam, 0.0, None)))))


# ----------------------------------------------------------------------------
# dTheta/dh and partial-state susceptibilities
# ----------------------------------------------------------------------------

def _dtheta_dx(gamma: float, x: float) -> float:
    """Derivative of ``Theta(gamma, x)`` in its second argument."""
    a = 6.0 * x + 1.0 + gamma
    sq = math.sqrt(radicand(gamma, x))
    g1 = gamma - 1.0
    if a > 0.0:
        q = a + 2.0 * sq
        return -6.0 * SQRT3 * g1 * q / (sq * (q * q + 3.0 * g1 * g1))
    n = SQRT3 * g1
    d = a - 2.0 * sq
    dd = 6.0 - 3.0 * a / sq
    return -2.0 * n * dd / (n * n + d * d)


def theta_derivative(params: ModelParams, block_sign: int) -> float:
    """``dTheta/dh`` of block ``block_sign``.

    Undefined on the isotropic line, where Theta is a step function of ``h``.
    """
    s = _check_block(block_sign)
    if abs(params.gamma - 1.0) <= ISOTROPIC_TOL:
        raise DomainError("dTheta/dh is undefined at gamma = 1 (Theta is piecewise constant)")
    _require_gap(params, s)
    return s * _dtheta_dx(params.gamma, s * params.h)


def _partial_inputs(params: ModelParams, block: int | None):
    """(cos T, T'^2), with T'^2 = 0 on the isotropic line."""
    s = resolve_block(params, block)
    _require_gap(params, s)
    c = math.cos(mixing_angle(params, s))
    if abs(params.gamma - 1.0) <= ISOTROPIC_TOL:
        return c, 0.0
    return c, theta_derivative(params, s) ** 2


def partial_fs_one_qubit(params: ModelParams, block: int | None = None) -> SusceptibilityResult:
    """Single-qubit susceptibility ``(1 + cos T) T'^2 / (4 (2 + cos T))``.

    Equivalent to ``r'^2 / (4 (1 - r^2))`` with ``r = (1 + 2 cos T)/3``, without
    the 0/0 at ``T = 0``. Reported as 0 on the isotropic line.
    """
    c, t2 = _partial_inputs(params, block)
    return SusceptibilityResult((1.0 + c) * t2 / (4.0 * (2.0 + c)), Kind.ONE_QUBIT, Method.CLOSED_FORM)


def partial_fs_one_qubit_r_form(params: ModelParams, block: int | None = None) -> float:
    """The same quantity via the purity parameter; breaks down as ``|r| -> 1``."""
    s = resolve_block(params, block)
    t = mixing_angle(params, s)
    r = (1.0 + 2.0 * math.cos(t)) / 3.0
    dr = -(2.0 / 3.0) * math.sin(t) * theta_derivative(params, s)
    return dr * dr / (4.0 * (1.0 - r * r))


def partial_fs_two_qubit(params: ModelParams, block: int | None = None) -> SusceptibilityResult:
    """Pair susceptibility: the one-qubit term plus ``T'^2 / (4 (2 + cos T))``.

    The second term is the pure-state susceptibility of ``psi1`` weighted by
    its eigenvalue ``(2 + cos T)/3``.
    """
    c, t2 = _partial_inputs(params, block)
    chi1 = (1.0 + c) * t2 / (4.0 * (2.0 + c))
    return SusceptibilityResult(chi1 + t2 / (4.0 * (2.0 + c)), Kind.TWO_QUBIT, Method.CLOSED_FORM)


# ----------------------------------------------------------------------------
# Finite-difference oracles
# ----------------------------------------------------------------------------

_KEEP = {Kind.ONE_QUBIT: (1,), Kind.TWO_QUBIT: (1, 2)}


def fd_oracle(
    params: ModelParams,
    kind: Kind = Kind.FULL,
    delta_h: float = DEFAULT_DELTA_H,
    block: int | None = None,
) -> SusceptibilityResult:
    """``2 (1 - F) / dh^2`` from dense-solver ground vectors at ``h +- dh``.

    ``F`` is the overlap modulus for ``Kind.FULL`` and the Bures fidelity of the
    one- or two-qubit marginals otherwise. ``1 - F`` is evaluated directly
    from purifications (see :func:`oracle.uhlmann_infidelity`) so that values
    of order ``1e-15`` keep their relative precision.
    """
    s = resolve_block(params, block)

    def factor(h: float) -> np.ndarray:
        v = oracle.sector_ground_vector(params.with_h(h), s)
        return v if kind is Kind.FULL else marginal_factor(v, _KEEP[kind])

    ref = factor(params.h)

    def infid(d: float) -> float:
        return oracle.uhlmann_infidelity(ref, factor(params.h + d))

    # the symmetric sum of both infidelities is 2 (1 - F) to second order
    value = oracle.fd_susceptibility(infid, delta_h, complement=True)
    return SusceptibilityResult(value, kind, Method.FINITE_DIFFERENCE)
