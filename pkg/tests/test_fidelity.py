import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmg3 import oracle
from lmg3.errors import DomainError, InvalidStateError, NearDegeneracyError
from lmg3.fidelity import (
    Kind,
    Method,
    SusceptibilityResult,
    bures_fidelity,
    driving_split,
    fd_oracle,
    fidelity_susceptibility_closed,
    fidelity_susceptibility_sum,
    partial_fs_one_qubit,
    partial_fs_one_qubit_r_form,
    partial_fs_two_qubit,
    theta_derivative,
)
from lmg3.model import ModelParams, build_hamiltonian, crossing_field, energy_functions, ground_state

# 40-digit reference values at (gamma, h) = (0.5, 0.2), dh = 1e-4: mpmath eigensolver on the
# even sector, explicit partial trace and Bures fidelity through mpmath square roots
MP_CHI_FULL = 0.104421932667994
MP_CHI_1Q = 0.00476208867476178
MP_CHI_2Q = 0.104421932667705

points = st.tuples(st.floats(0.0, 2.0), st.floats(0.0, 1.2), st.sampled_from([1, -1]))


def gapped(g, h, s, min_de=0.02):
    return energy_functions(ModelParams(g, h), s).de > min_de


# --- full state -----------------------------------------------------------------

def test_sum_vanishes_isotropic():
    assert fidelity_susceptibility_sum(ModelParams(1.0, 0.5)).value <= 1e-12


def test_sum_sample_point_matches_oracles():
    p = ModelParams(0.5, 0.2)
    chi = fidelity_susceptibility_sum(p).value
    assert chi == pytest.approx(MP_CHI_FULL, rel=1e-3)
    assert chi == pytest.approx(fd_oracle(p, Kind.FULL, 1e-4).value, rel=1e-3)


def test_divergence_approaching_monopole_off_isotropic_line():
    # the monopole at (1, 1/3) belongs to the lower block; chi ~ 27 / (16 (gamma - 1)^2)
    values = [fidelity_susceptibility_sum(ModelParams(1.0 + e, 1 / 3), block=-1).value for e in (1e-1, 1e-2, 1e-3)]
    assert values[0] < values[1] < values[2]
    assert values[2] > 1e4
    assert values[2] == pytest.approx(27 / 16 * 1e6, rel=1e-3)


def test_sum_raises_on_closed_gap():
    with pytest.raises(NearDegeneracyError):
        fidelity_susceptibility_sum(ModelParams(1.0, 1 / 3), block=-1)


@given(points)
def test_closed_equals_sum(args):
    g, h, s = args
    if not gapped(g, h, s, 1e-3):
        return
    p = ModelParams(g, h)
    a = fidelity_susceptibility_closed(p, block=s).value
    b = fidelity_susceptibility_sum(p, block=s).value
    assert abs(a - b) <= 1e-10 * max(1.0, b)


def test_closed_vanishes_isotropic():
    for h in (0.1, 0.5, 1.0):
        assert fidelity_susceptibility_closed(ModelParams(1.0, h)).value <= 1e-30


@given(points)
@settings(max_examples=40, deadline=None)
def test_sum_matches_fd_oracle(args):
    g, h, s = args
    if not gapped(g, h, s, 0.05):
        return
    p = ModelParams(g, h)
    a = fidelity_susceptibility_sum(p, block=s).value
    b = fd_oracle(p, Kind.FULL, block=s).value
    assert abs(a - b) <= 1e-3 * max(a, 1e-7)


def test_driving_split_reproduces_hamiltonian():
    rng = np.random.default_rng(2024)
    for g, h in rng.uniform(-2, 2, size=(100, 2)):
        split = driving_split(g)
        assert np.max(np.abs(split.hamiltonian(h) - build_hamiltonian(ModelParams(g, h)))) <= 1e-13


def test_result_clamps_noise_and_rejects_negative():
    assert SusceptibilityResult(-1e-13, Kind.FULL, Method.CLOSED_FORM).value == 0.0
    with pytest.raises(DomainError):
        SusceptibilityResult(-1e-6, Kind.FULL, Method.CLOSED_FORM)


# --- Bures fidelity ------------------------------------------------------------------

def test_bures_self():
    rho = np.diag([0.2, 0.3, 0.5])
    with pytest.raises(InvalidStateError):
        bures_fidelity(rho, rho)  # 3x3 is not a qubit operator
    rho = np.diag([0.2, 0.3, 0.4, 0.1])
    assert bures_fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)


def test_bures_pure_states():
    a = np.array([1, 1j]) / math.sqrt(2)
    b = np.array([math.cos(0.3), math.sin(0.3)])
    f = bures_fidelity(np.outer(a, a.conj()), np.outer(b, b.conj()))
    assert f == pytest.approx(abs(np.vdot(a, b)), abs=1e-12)


def test_bures_commuting():
    f = bures_fidelity(np.diag([0.7, 0.3]), np.diag([0.6, 0.4]))
    assert f == pytest.approx(math.sqrt(0.42) + math.sqrt(0.12), abs=1e-14)


def test_bures_rejects_invalid():
    with pytest.raises(InvalidStateError):
        bures_fidelity(np.diag([1.2, -0.2]), np.eye(2) / 2)
    with pytest.raises(DomainError):
        bures_fidelity(np.eye(2) / 2, np.eye(4) / 4)


@given(st.integers(0, 2**32 - 1), st.sampled_from([2, 4]), st.integers(1, 4))
@settings(max_examples=60)
def test_bures_symmetric_and_bounded(seed, n, rank):
    rng = np.random.default_rng(seed)

    def rand():
        a = rng.normal(size=(n, min(rank, n))) + 1j * rng.normal(size=(n, min(rank, n)))
        m = a @ a.conj().T
        return m / np.trace(m).real

    a, b = rand(), rand()
    f1, f2 = bures_fidelity(a, b), bures_fidelity(b, a)
    assert 0.0 <= f1 <= 1.0
    assert abs(f1 - f2) <= 1e-10  # rank deficiency limits this below 1e-12 for random inputs


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40)
def test_bures_symmetric_full_rank(seed):
    rng = np.random.default_rng(seed)
    ms = []
    for _ in range(2):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = a @ a.conj().T + 0.1 * np.eye(4)
        ms.append(m / np.trace(m).real)
    assert abs(bures_fidelity(*ms) - bures_fidelity(*ms[::-1])) <= 1e-12


# --- dTheta/dh -------------------------------------------------------------------------

def test_theta_derivative_near_isotropic_line():
    for g in (1 - 1e-3, 1 + 1e-3):
        p = ModelParams(g, 0.5)
        d = theta_derivative(p, 1)
        assert math.isfinite(d) and abs(d) < 1e-3
        assert d == pytest.approx(oracle.theta_derivative_fd(p, 1), rel=1e-6)


def test_theta_derivative_origin():
    # 4th-order FD on the dense-solver angle gives 2.598076211346..., i.e. 3 sqrt(3) / 2
    d = theta_derivative(ModelParams(0.0, 0.0), 1)
    assert d == pytest.approx(3 * math.sqrt(3) / 2, rel=1e-12)
    assert d == pytest.approx(oracle.theta_derivative_fd(ModelParams(0.0, 0.0), 1), rel=1e-7)


def test_theta_derivative_undefined_isotropic():
    with pytest.raises(DomainError):
        theta_derivative(ModelParams(1.0, 0.5), 1)


def test_theta_derivative_grid():
    for g in np.linspace(0, 2, 21):
        if abs(g - 1) < 1e-9:
            continue
        for h in np.linspace(0, 1.2, 21):
            for s in (1, -1):
                p = ModelParams(float(g), float(h))
                if energy_functions(p, s).de < 0.02:
                    continue
                a, b = theta_derivative(p, s), oracle.theta_derivative_fd(p, s)
                assert abs(a - b) <= 1e-7 * max(abs(a), 1e-10)


# --- partial states --------------------------------------------------------------------------

def test_one_qubit_isotropic_limit():
    assert partial_fs_one_qubit(ModelParams(1.0, 0.5)).value == 0.0
    for g in (1 - 1e-6, 1 + 1e-6):
        assert partial_fs_one_qubit(ModelParams(g, 0.5)).value <= 1e-10


def test_one_qubit_sample_point():
    p = ModelParams(0.5, 0.2)
    chi1 = partial_fs_one_qubit(p).value
    assert chi1 == pytest.approx(MP_CHI_1Q, rel=1e-3)
    assert chi1 == pytest.approx(fd_oracle(p, Kind.ONE_QUBIT, 1e-4).value, rel=1e-3)


@given(points)
def test_one_qubit_forms_agree(args):
    g, h, s = args
    if abs(g - 1) < 1e-6 or not gapped(g, h, s):
        return
    p = ModelParams(g, h)
    a = partial_fs_one_qubit(p, block=s).value
    b = partial_fs_one_qubit_r_form(p, block=s)
    assert abs(a - b) <= 1e-12 * max(1.0, a) or abs(a - b) <= 1e-9 * a


def test_two_qubit_isotropic_limit():
    assert partial_fs_two_qubit(ModelParams(1.0, 0.5)).value == 0.0
    assert partial_fs_two_qubit(ModelParams(1 + 1e-6, 0.5)).value <= 1e-10


def test_two_qubit_sample_point():
    p = ModelParams(0.5, 0.2)
    chi2 = partial_fs_two_qubit(p).value
    assert chi2 == pytest.approx(MP_CHI_2Q, rel=1e-3)
    assert chi2 == pytest.approx(fd_oracle(p, Kind.TWO_QUBIT, 1e-4).value, rel=1e-3)


@given(points)
@settings(max_examples=40, deadline=None)
def test_partial_match_fd(args):
    g, h, s = args
    if not gapped(g, h, s, 0.05):
        return
    p = ModelParams(g, h)
    for kind, fn in ((Kind.ONE_QUBIT, partial_fs_one_qubit), (Kind.TWO_QUBIT, partial_fs_two_qubit)):
        a = fn(p, block=s).value
        b = fd_oracle(p, kind, block=s).value
        assert abs(a - b) <= 1e-3 * max(a, 1e-7)


@given(points)
def test_ordering(args):
    g, h, s = args
    if not gapped(g, h, s, 1e-4):
        return
    p = ModelParams(g, h)
    full = fidelity_susceptibility_sum(p, block=s).value
    chi1 = partial_fs_one_qubit(p, block=s).value
    chi2 = partial_fs_two_qubit(p, block=s).value
    assert chi2 >= chi1 >= 0.0
    assert full >= chi2 * (1 - 1e-9)


def test_pair_susceptibility_saturates_full():
    # the pair marginal of a block ground state determines the state
    for g, h in [(0.5, 0.2), (1.5, 0.3), (0.2, 0.9)]:
        p = ModelParams(g, h)
        assert partial_fs_two_qubit(p).value == pytest.approx(fidelity_susceptibility_sum(p).value, rel=1e-10)


def test_partial_crossing_raises():
    from lmg3.errors import CrossingError

    with pytest.raises(CrossingError):
        partial_fs_one_qubit(ModelParams(1.0, 2 / 3))
    assert ground_state(ModelParams(1.0, 2 / 3)).is_degenerate


def test_high_side_profile_peaks_just_below_tenth():
    gammas = np.linspace(0.01, 0.9, 179)
    chi = np.array([fidelity_susceptibility_sum(ModelParams(g, crossing_field(g) + 0.02)).value for g in gammas])
    k = int(np.argmax(chi))
    assert 0 < k < len(gammas) - 1
    assert 0.08 < gammas[k] < 0.1
    assert np.all(np.diff(chi[k:]) < 0)
