"""Three-qubit LMG Hamiltonian, closed-form spectrum and ground state.

All vectors and matrices use the parity-ordered computational basis::

    |000>, |011>, |101>, |110>,   |111>, |100>, |010>, |001>
    `------- even block -------'  `------- odd block --------'

so the Hamiltonian is literally block diagonal in memory, with the upper
block equal to ``P(gamma, h)`` and the lower block to ``P(gamma, -h)``.
A block is addressed by its sign ``+1`` (upper) or ``-1`` (lower); the
*field argument* of block ``s`` is ``s * h``, i.e. the second argument that
the energy functions and the mixing angle are evaluated at.

Single-qubit conventions: ``sigma_z|0> = +|0>``, ``sigma_y = -i|0><1| + i|1><0|``.
With these, the block matrices are those of
``H = -(Sx^2 + gamma Sy^2)/3 + (1 + gamma)/4 + h Sz``; rotations about z are
generated by the same ``Sz``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import CrossingError, DomainError

SQRT3 = math.sqrt(3.0)
TWO_PI = 2.0 * math.pi

BASIS_LABELS = ("000", "011", "101", "110", "111", "100", "010", "001")
# position in the parity-ordered basis -> index in the kron(q1, q2, q3) basis
TENSOR_INDEX = np.array([int(label, 2) for label in BASIS_LABELS])

H_C1 = 0.0
"""First crossing line ``h_c^(1) = 0`` (the two blocks swap under h -> -h)."""

# Intercept of the isotropic level crossing inside a block: at gamma = 1 the
# block's reference state and its W-type state cross at field argument -1/3.
MONOPOLE_FIELD_ARGUMENT = -1.0 / 3.0
MONOPOLE_POINTS = ((1.0, 1.0 / 3.0), (1.0, -1.0 / 3.0))

_LIMIT_EPS = 1e-13


class Branch(enum.Enum):
    LOW_FIELD = "+"
    HIGH_FIELD = "-"
    DEGENERATE = "0"


@dataclass(frozen=True)
class ModelParams:
    """A point ``(gamma, h)`` of parameter space.

    ``tol_degeneracy`` is an absolute energy threshold: two levels closer than
    this are treated as degenerate.
    """

    gamma: float
    h: float
    tol_degeneracy: float = 1e-9

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.h)):
            raise DomainError(f"gamma and h must be finite, got ({self.gamma}, {self.h})")
        if not self.tol_degeneracy > 0:
            raise DomainError("tol_degeneracy must be positive")

    def with_h(self, h: float) -> "ModelParams":
        return ModelParams(self.gamma, h, self.tol_degeneracy)


def _check_block(block_sign: int) -> int:
    if block_sign not in (1, -1):
        raise DomainError(f"block sign must be +1 or -1, got {block_sign!r}")
    return int(block_sign)


# ----------------------------------------------------------------------------
# Hamiltonian
# ----------------------------------------------------------------------------

def block_matrix(gamma: float, field_arg: float) -> np.ndarray:
    """The 4x4 block ``P(gamma, field_arg)``."""
    a = -(1.0 - gamma) / 6.0
    b = -(1.0 + gamma) / 6.0
    d = -field_arg / 2.0
    return np.array(
        [
            [1.5 * field_arg, a, a, a],
            [a, d, b, b],
            [a, b, d, b],
            [a, b, b, d],
        ]
    )


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Dense 8x8 Hamiltonian in the parity-ordered basis."""
    H = np.zeros((8, 8), dtype=complex)
    H[:4, :4] = block_matrix(params.gamma, params.h)
    H[4:, 4:] = block_matrix(params.gamma, -params.h)
    return H


def _pauli_on(op: np.ndarray, k: int) -> np.ndarray:
    mats = [np.eye(2, dtype=complex)] * 3
    mats[k] = op
    return np.kron(np.kron(mats[0], mats[1]), mats[2])


def to_parity_order(m: np.ndarray) -> np.ndarray:
    """Reorder a vector or matrix from the kron basis into the parity-ordered basis."""
    m = np.asarray(m)
    if m.ndim == 1:
        return m[TENSOR_INDEX]
    return m[np.ix_(TENSOR_INDEX, TENSOR_INDEX)]


def to_tensor_order(m: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_parity_order`."""
    m = np.asarray(m)
    out = np.zeros_like(m)
    if m.ndim == 1:
        out[TENSOR_INDEX] = m
    else:
        out[np.ix_(TENSOR_INDEX, TENSOR_INDEX)] = m
    return out


PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def spin_operators() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Total spin ``(Sx, Sy, Sz)`` in the parity-ordered basis."""
    out = []
    for p in (PAULI_X, PAULI_Y, PAULI_Z):
        S = sum(_pauli_on(p, k) for k in range(3)) / 2.0
        out.append(to_parity_order(S))
    return tuple(out)


def parity_operator() -> np.ndarray:
    """``sigma_z (x) sigma_z (x) sigma_z``: +1 on the upper block, -1 on the lower."""
    return to_parity_order(np.kron(np.kron(PAULI_Z, PAULI_Z), PAULI_Z))


def bit_flip_operator() -> np.ndarray:
    """``sigma_x (x) sigma_x (x) sigma_x``; conjugates ``H(gamma, h)`` into ``H(gamma, -h)``."""
    return to_parity_order(np.kron(np.kron(PAULI_X, PAULI_X), PAULI_X))


# Sz is diagonal in the computational basis; keep the diagonal around for
# cheap rotations exp(-i phi Sz).
SZ_DIAGONAL = np.array([1.5 - label.count("1") for label in BASIS_LABELS])


# ----------------------------------------------------------------------------
# Closed-form energies and mixing angle
# ----------------------------------------------------------------------------

class EnergyFunctions(NamedTuple):
    e0: float
    de: float
    e_minus: float
    e_plus: float


def radicand(gamma: float, field_arg: float) -> float:
    """``9x^2 + 3x(1 + gamma) + 1 - gamma + gamma^2`` as a sum of squares.

    ``(3x + (1 + gamma)/2)^2 + 3(gamma - 1)^2/4`` is the same polynomial but is
    never negative and vanishes exactly at the monopole ``(1, -1/3)``.
    """
    return (3.0 * field_arg + 0.5 * (1.0 + gamma)) ** 2 + 0.75 * (gamma - 1.0) ** 2


def _sqrt_radicand(gamma: float, field_arg: float) -> float:
    return math.sqrt(radicand(gamma, field_arg))


def energy_functions(params: ModelParams, block_sign: int = 1) -> EnergyFunctions:
    """``E0, dE, E-, E+`` of block ``block_sign`` (field argument ``block_sign * h``)."""
    s = _check_block(block_sign)
    x = s * params.h
    e0 = (3.0 * x - 1.0 - params.gamma) / 6.0
    de = _sqrt_radicand(params.gamma, x) / 3.0
    return EnergyFunctions(e0, de, e0 - de, e0 + de)


def _theta_isotropic_limit(field_arg: float) -> float:
    # gamma = 1: the block's reference state and W-type state decouple and
    # cross at field argument -1/3; below it the reference state is lower.
    return math.pi if field_arg >= MONOPOLE_FIELD_ARGUMENT else 0.0


def _half_theta_args(gamma: float, x: float) -> tuple[float, float]:
    """(numerator, denominator) of tan(Theta/2), rescaled by a positive factor.

    The bare denominator ``6x + 1 + gamma - 2 sqrt(R)`` cancels catastrophically
    near gamma = 1 when ``a = 6x + 1 + gamma > 0``; there we use
    ``a - 2 sqrt(R) = -3 (gamma - 1)^2 / (a + 2 sqrt(R))`` and rescale both
    arguments by ``(a + 2 sqrt(R)) / (sqrt(3) |gamma - 1|) > 0``, which leaves
    atan2 unchanged.
    """
    a = 6.0 * x + 1.0 + gamma
    sq = _sqrt_radicand(gamma, x)
    if a > 0.0:
        q = a + 2.0 * sq
        g1 = gamma - 1.0
        return math.copysign(q, g1) if g1 != 0.0 else 0.0, -SQRT3 * abs(g1)
    return SQRT3 * (gamma - 1.0), a - 2.0 * sq


def theta_of(gamma: float, field_arg: float) -> float:
    """Mixing angle ``Theta(gamma, field_arg)`` in ``[0, 2 pi)``."""
    num, den = _half_theta_args(gamma, field_arg)
    if abs(num) < _LIMIT_EPS and abs(den) < _LIMIT_EPS:
        return _theta_isotropic_limit(field_arg)
    t = math.fmod(2.0 * math.atan2(num, den), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


def mixing_angle(params: ModelParams, block_sign: int = 1) -> float:
    """Mixing angle of block ``block_sign``, i.e. ``Theta(gamma, block_sign * h)``.

    At ``gamma = 1`` the defining ratio is 0/0; the analytic limit is returned:
    ``pi`` for field arguments at or above -1/3 and ``0`` below.
    """
    s = _check_block(block_sign)
    return theta_of(params.gamma, s * params.h)


@dataclass(frozen=True)
class Spectrum:
    e0_plus: float
    de_plus: float
    e0_minus: float
    de_minus: float
    theta_plus: float
    theta_minus: float
    e_degenerate_plus: float
    e_degenerate_minus: float

    def block_energies(self, block_sign: int) -> tuple[float, float, float, float]:
        """``(E+, E-, E_doublet, E_doublet)`` of one block."""
        if _check_block(block_sign) == 1:
            e0, de, ed = self.e0_plus, self.de_plus, self.e_degenerate_plus
        else:
            e0, de, ed = self.e0_minus, self.de_minus, self.e_degenerate_minus
        return e0 + de, e0 - de, ed, ed

    def energies(self) -> np.ndarray:
        """All eight eigenvalues in the order of :func:`eigensystem_closed_form`."""
        return np.array(self.block_energies(1) + self.block_energies(-1))


def spectrum(params: ModelParams) -> Spectrum:
    up = energy_functions(params, 1)
    lo = energy_functions(params, -1)
    return Spectrum(
        e0_plus=up.e0,
        de_plus=up.de,
        e0_minus=lo.e0,
        de_minus=lo.de,
        theta_plus=mixing_angle(params, 1),
        theta_minus=mixing_angle(params, -1),
        e_degenerate_plus=-up.e0,
        e_degenerate_minus=-lo.e0,
    )


# ----------------------------------------------------------------------------
# Eigenvectors
# ----------------------------------------------------------------------------

_W_LOCAL = np.array([0.0, 1.0, 1.0, 1.0]) / SQRT3
_REF_LOCAL = np.array([1.0, 0.0, 0.0, 0.0])
_DOUBLET_LOCAL = (
    np.array([0.0, 1.0, 0.0, -1.0]) / math.sqrt(2.0),
    np.array([0.0, 1.0, -2.0, 1.0]) / math.sqrt(6.0),
)


def embed_block(local: np.ndarray, block_sign: int) -> np.ndarray:
    """Place a 4-vector of block ``block_sign`` into the 8-dim space."""
    v = np.zeros(8, dtype=complex)
    if _check_block(block_sign) == 1:
        v[:4] = local
    else:
        v[4:] = local
    return v


def w_state(block_sign: int = 1) -> np.ndarray:
    """``|W-bar>`` for the upper block, ``|W>`` for the lower block."""
    return embed_block(_W_LOCAL, block_sign)


def reference_state(block_sign: int = 1) -> np.ndarray:
    """``|000>`` for the upper block, ``|111>`` for the lower block."""
    return embed_block(_REF_LOCAL, block_sign)


def block_ground_vector(theta: float, block_sign: int) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return embed_block(c * _REF_LOCAL + s * _W_LOCAL, block_sign)


def block_excited_vector(theta: float, block_sign: int) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return embed_block(-s * _REF_LOCAL + c * _W_LOCAL, block_sign)


def eigensystem_closed_form(params: ModelParams) -> list[tuple[float, np.ndarray]]:
    """All eight closed-form eigenpairs.

    Order per block (upper block first): ``E+``, ``E-``, then the doublet at
    ``-E0``.
    """
    pairs = []
    for s in (1, -1):
        ef = energy_functions(params, s)
        theta = mixing_angle(params, s)
        pairs.append((ef.e_plus, block_excited_vector(theta, s)))
        pairs.append((ef.e_minus, block_ground_vector(theta, s)))
        for d in _DOUBLET_LOCAL:
            pairs.append((-ef.e0, embed_block(d, s)))
    return pairs


# ----------------------------------------------------------------------------
# Crossings and ground state
# ----------------------------------------------------------------------------

def crossing_field(gamma: float) -> float:
    """Second crossing line ``h_c^(2) = (2/3) sqrt(gamma)``."""
    if not gamma >= 0.0:
        raise DomainError(f"crossing line h_c^(2) is undefined for gamma < 0 (got {gamma})")
    return 2.0 / 3.0 * math.sqrt(gamma)


def distance_to_crossing(gamma: float, h: float) -> float:
    """Euclidean distance from ``(gamma, |h|)`` to the curve ``h = (2/3) sqrt(gamma)``.

    With ``u = sqrt(t)`` the squared distance to the curve point
    ``(t, (2/3) sqrt(t))`` is a quartic in ``u``; its stationary points are
    the real roots of a cubic, compared together with the endpoint ``u = 0``.
    """
    c = 2.0 / 3.0
    y = abs(h)
    roots = np.roots([4.0, 0.0, 2.0 * c * c - 4.0 * gamma, -2.0 * c * y])
    cands = [0.0] + [r.real for r in roots if abs(r.imag) < 1e-9 and r.real >= 0.0]
    return min(math.hypot(u * u - gamma, c * u - y) for u in cands)


def distance_to_monopole(gamma: float, h: float) -> float:
    return min(math.hypot(gamma - g, h - hm) for g, hm in MONOPOLE_POINTS)


def branch_of_block(params: ModelParams, block_sign: int) -> Branch:
    """Regime label of a block: the block that wins at small |h| is LOW_FIELD."""
    low_block = 1 if params.h >= 0.0 else -1
    return Branch.LOW_FIELD if _check_block(block_sign) == low_block else Branch.HIGH_FIELD


def block_of_branch(params: ModelParams, branch: Branch) -> int:
    if branch is Branch.DEGENERATE:
        raise DomainError("DEGENERATE does not name a block")
    low_block = 1 if params.h >= 0.0 else -1
    return low_block if branch is Branch.LOW_FIELD else -low_block


@dataclass(frozen=True)
class GroundState:
    """Lowest state of one parity block, or a degenerate pair of them.

    For ``branch == DEGENERATE`` the fields ``vector``, ``theta``, ``block`` refer
    to the low-field candidate and ``candidates`` holds both.
    """

    branch: Branch
    vector: np.ndarray = field(repr=False)
    theta: float
    energy: float
    block: int
    candidates: tuple["GroundState", ...] = field(default=(), repr=False)

    @property
    def field_arg_sign(self) -> int:
        return self.block

    @property
    def is_degenerate(self) -> bool:
        return self.branch is Branch.DEGENERATE


def block_state(params: ModelParams, block_sign: int) -> GroundState:
    """Lowest eigenstate of block ``block_sign`` regardless of which block is lower."""
    s = _check_block(block_sign)
    ef = energy_functions(params, s)
    if -ef.e0 < ef.e_minus - params.tol_degeneracy:
        # only possible for gamma < -1
        raise DomainError(
            f"at gamma={params.gamma} the doublet lies below E- in block {s:+d}; "
            "the two-level ground state does not apply"
        )
    theta = mixing_angle(params, s)
    return GroundState(
        branch=branch_of_block(params, s),
        vector=block_ground_vector(theta, s),
        theta=theta,
        energy=ef.e_minus,
        block=s,
    )


def ground_state(params: ModelParams) -> GroundState:
    """Energetic ground state.

    The two candidates are the lowest states of the two blocks; if their
    energies agree to ``tol_degeneracy`` (on ``h = 0`` or on ``h = h_c^(2)``)
    the result is flagged DEGENERATE and both are returned in ``candidates``.
    Negative ``h`` is handled by the block swap: the lower block then plays the
    low-field role.
    """
    low_block = 1 if params.h >= 0.0 else -1
    low = block_state(params, low_block)
    high = block_state(params, -low_block)
    if abs(low.energy - high.energy) <= params.tol_degeneracy:
        return GroundState(
            branch=Branch.DEGENERATE,
            vector=low.vector,
            theta=low.theta,
            energy=min(low.energy, high.energy),
            block=low.block,
            candidates=(low, high),
        )
    return low if low.energy < high.energy else high


def resolve_block(params: ModelParams, block: int | None = None) -> int:
    """Block holding the ground state, or ``block`` if given explicitly.

    Raises :class:`CrossingError` when the ground state is degenerate and no
    block was requested.
    """
    if block is not None:
        return _check_block(block)
    gs = ground_state(params)
    if gs.is_degenerate:
        raise CrossingError(
            f"ground state is degenerate at (gamma={params.gamma}, h={params.h}); "
            "pass block=+1 or block=-1"
        )
    return gs.block


def select_state(params: ModelParams, block: int | None = None) -> GroundState:
    return block_state(params, resolve_block(params, block))


# ----------------------------------------------------------------------------
# Classification
# ----------------------------------------------------------------------------

class StateKind(enum.Enum):
    W = "W"
    PRODUCT = "Product"
    GHZ = "GHZ"
    GENERIC = "Generic"


@dataclass(frozen=True)
class GroundStateClass:
    kind: StateKind
    witness: float


def ghz_reference(block_sign: int = 1) -> np.ndarray:
    """``(|+++> + s|--->)/sqrt(2)``: the GHZ state reached at the origin.

    For the upper block this is the equal superposition of the even-weight
    basis states, for the lower block that of the odd-weight ones.
    """
    return embed_block(np.full(4, 0.5), block_sign)


def _overlap2(a: np.ndarray, b: np.ndarray) -> float:
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def _classify_state(gs: GroundState, params: ModelParams, class_tol: float) -> GroundStateClass:
    theta = gs.theta
    s = gs.block
    if abs(theta - math.pi) <= class_tol:
        return GroundStateClass(StateKind.W, _overlap2(w_state(s), gs.vector))
    if theta <= class_tol or TWO_PI - theta <= class_tol:
        return GroundStateClass(StateKind.PRODUCT, _overlap2(reference_state(s), gs.vector))
    at_origin = abs(params.gamma) <= class_tol and abs(params.h) <= class_tol
    if at_origin and abs(theta - TWO_PI / 3.0) <= class_tol:
        return GroundStateClass(StateKind.GHZ, _overlap2(ghz_reference(s), gs.vector))
    witness = max(_overlap2(w_state(s), gs.vector), _overlap2(reference_state(s), gs.vector))
    return GroundStateClass(StateKind.GENERIC, witness)


def classify_ground_state(
    params: ModelParams, class_tol: float = 1e-9, block: int | None = None
) -> GroundStateClass:
    """Classify the ground state as W, product, GHZ or generic.

    At a degenerate point without an explicit ``block`` both candidates are
    classified; they must agree (as they do at the origin, where both are GHZ),
    otherwise :class:`CrossingError` is raised.
    """
    if block is not None:
        return _classify_state(block_state(params, block), params, class_tol)
    gs = ground_state(params)
    if not gs.is_degenerate:
        return _classify_state(gs, params, class_tol)
    results = [_classify_state(c, params, class_tol) for c in gs.candidates]
    if results[0].kind is not results[1].kind:
        raise CrossingError(
            f"degenerate candidates classify differently ({results[0].kind.value} vs "
            f"{results[1].kind.value}); pass block explicitly"
        )
    return results[0]
