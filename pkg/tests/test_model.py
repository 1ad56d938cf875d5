import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmg3 import oracle
from lmg3.errors import CrossingError, DomainError
from lmg3.model import (
    BASIS_LABELS,
    H_C1,
    Branch,
    ModelParams,
    StateKind,
    bit_flip_operator,
    block_state,
    build_hamiltonian,
    classify_ground_state,
    crossing_field,
    distance_to_crossing,
    eigensystem_closed_form,
    energy_functions,
    ghz_reference,
    ground_state,
    mixing_angle,
    parity_operator,
    reference_state,
    spectrum,
    theta_of,
    w_state,
)

finite_gamma = st.floats(-3.0, 3.0, allow_nan=False)
finite_h = st.floats(-2.0, 2.0, allow_nan=False)


def idx(label):
    return BASIS_LABELS.index(label)


def grid21():
    for g in np.linspace(0.0, 2.0, 21):
        for h in np.linspace(0.0, 1.2, 21):
            yield ModelParams(float(g), float(h))


# --- Hamiltonian -----------------------------------------------------------

def test_trace_zero_at_sample_point():
    assert abs(np.trace(build_hamiltonian(ModelParams(0.3, 0.7)))) < 1e-15


def test_isotropic_decouples_reference_state():
    H = build_hamiltonian(ModelParams(1.0, 0.5))
    assert H[idx("000"), idx("011")] == 0.0


def test_matrix_entries_at_gamma_zero():
    H = build_hamiltonian(ModelParams(0.0, 1.0))
    assert H[idx("000"), idx("011")] == pytest.approx(-1 / 6, abs=1e-15)
    assert H[idx("011"), idx("101")] == pytest.approx(-1 / 6, abs=1e-15)


def test_blocks_are_exactly_decoupled():
    H = build_hamiltonian(ModelParams(0.7, 0.4))
    assert np.all(H[:4, 4:] == 0) and np.all(H[4:, :4] == 0)


@given(finite_gamma, finite_h)
def test_hermitian_and_traceless(g, h):
    H = build_hamiltonian(ModelParams(g, h))
    assert np.max(np.abs(H - H.conj().T)) == 0.0
    assert abs(np.trace(H)) <= 1e-15 * max(1.0, abs(h))


@given(finite_gamma, finite_h)
def test_parity_and_total_spin_commute(g, h):
    H = build_hamiltonian(ModelParams(g, h))
    P = parity_operator()
    S2 = oracle.total_spin_squared()
    assert np.max(np.abs(H @ P - P @ H)) <= 1e-14
    assert np.max(np.abs(H @ S2 - S2 @ H)) <= 1e-13


def test_parity_sectors():
    assert np.allclose(np.diag(parity_operator()), [1, 1, 1, 1, -1, -1, -1, -1])


@given(finite_gamma, finite_h)
def test_bit_flip_swaps_blocks(g, h):
    X = bit_flip_operator()
    swapped = X @ build_hamiltonian(ModelParams(g, h)) @ X
    assert np.max(np.abs(swapped - build_hamiltonian(ModelParams(g, -h)))) <= 1e-15


@given(finite_gamma, finite_h)
def test_block_swap_symmetry(g, h):
    a = np.linalg.eigvalsh(build_hamiltonian(ModelParams(g, h)))
    b = np.linalg.eigvalsh(build_hamiltonian(ModelParams(g, -h)))
    assert np.max(np.abs(a - b)) <= 1e-12


@given(finite_gamma, finite_h)
def test_matches_pauli_construction(g, h):
    H = build_hamiltonian(ModelParams(g, h))
    assert np.max(np.abs(H - oracle.pauli_hamiltonian(ModelParams(g, h)))) <= 1e-14


# --- Energies --------------------------------------------------------------

def test_monopole_gap_vanishes_exactly():
    assert energy_functions(ModelParams(1.0, 1 / 3), -1).de == 0.0
    assert energy_functions(ModelParams(1.0, -1 / 3), 1).de == 0.0


def test_isotropic_zero_field_ground_energy():
    # dense-solver value, frozen
    assert energy_functions(ModelParams(1.0, 0.0), 1).e_minus == pytest.approx(-2 / 3, abs=1e-15)
    assert oracle.spectrum_dense(ModelParams(1.0, 0.0))[0] == pytest.approx(-2 / 3, abs=1e-14)


def test_origin_energies():
    ef = energy_functions(ModelParams(0.0, 0.0), 1)
    assert ef.e_minus == pytest.approx(-0.5, abs=1e-15)
    assert ef.e_plus == pytest.approx(1 / 6, abs=1e-15)


@given(finite_gamma, finite_h, st.sampled_from([1, -1]))
def test_gap_nonnegative(g, h, s):
    assert energy_functions(ModelParams(g, h), s).de >= 0.0


@pytest.mark.parametrize("gamma", [0.0, 0.3, 0.5, 1.7, 2.0])
def test_avoided_crossing_minimum(gamma):
    h_star = -(1 + gamma) / 6
    gap = 2 * energy_functions(ModelParams(gamma, h_star), 1).de
    assert gap == pytest.approx(abs(1 - gamma) / math.sqrt(3), abs=1e-10)
    hs = h_star + np.linspace(-0.2, 0.2, 81)
    gaps = [2 * energy_functions(ModelParams(gamma, h), 1).de for h in hs]
    assert min(gaps) >= gap - 1e-12


# --- Mixing angle ------------------------------------------------------------

def test_theta_anchors():
    assert theta_of(0.0, 0.0) == pytest.approx(2 * math.pi / 3, abs=1e-12)
    assert theta_of(2.0, -1 / 3) == pytest.approx(4 * math.pi / 3, abs=1e-12)


def test_theta_isotropic_limits():
    p = ModelParams(1.0, 0.5)
    assert mixing_angle(p, 1) == math.pi
    assert mixing_angle(p, -1) == 0.0


def test_theta_isotropic_limit_switches_at_monopole():
    assert theta_of(1.0, -0.2) == math.pi
    assert theta_of(1.0, -0.5) == 0.0


@given(st.floats(0.0, 3.0), finite_h, st.sampled_from([1, -1]))
def test_theta_range(g, h, s):
    t = mixing_angle(ModelParams(g, h), s)
    assert 0.0 <= t < 2 * math.pi


@given(st.floats(-1.0, 3.0).filter(lambda g: abs(g - 1) > 1e-6), finite_h)
def test_theta_reproduces_ground_vector(g, h):
    # tan(T/2) read off the dense solver's sector ground vector
    p = ModelParams(g, h)
    v = oracle.sector_ground_vector(p, 1)
    w = np.vdot(w_state(1), v)
    ref = np.vdot(reference_state(1), v)
    t = mixing_angle(p, 1)
    assert abs(abs(math.cos(t / 2)) - abs(ref)) < 1e-8
    assert abs(abs(math.sin(t / 2)) - abs(w)) < 1e-8
    assert math.cos(t / 2) * math.sin(t / 2) * (ref.conjugate() * w).real >= -1e-8


@given(st.floats(0.0, 3.0), st.floats(-2.0, 2.0))
def test_theta_continuous_near_isotropic_line(g, h):
    if abs(g - 1.0) < 1e-3 or abs(h + 1 / 3) < 1e-2:
        return
    t1 = theta_of(g, h)
    t2 = theta_of(g + 1e-9, h)
    assert abs(math.remainder(t1 - t2, 2 * math.pi)) < 1e-6


# --- Eigensystem -------------------------------------------------------------

@given(finite_gamma, finite_h)
@settings(max_examples=60)
def test_closed_form_eigensystem(g, h):
    p = ModelParams(g, h)
    pairs = eigensystem_closed_form(p)
    V = np.column_stack([v for _, v in pairs])
    assert np.max(np.abs(V.conj().T @ V - np.eye(8))) <= 1e-12
    H = build_hamiltonian(p)
    for e, v in pairs:
        assert np.linalg.norm(H @ v - e * v) <= 1e-10


def test_spectrum_matches_dense_on_grid():
    for p in grid21():
        closed = np.sort(spectrum(p).energies())
        assert np.max(np.abs(closed - oracle.spectrum_dense(p))) <= 1e-10


def test_doublet_energy():
    p = ModelParams(1.0, 0.5)
    pairs = eigensystem_closed_form(p)
    e0 = energy_functions(p, 1).e0
    assert pairs[2][0] == pytest.approx(-e0) and pairs[3][0] == pytest.approx(-e0)


# --- Crossings and ground state ---------------------------------------------

def test_crossing_field_values():
    assert crossing_field(1.0) == 2 / 3
    assert crossing_field(0.0) == 0.0
    assert crossing_field(4.0) == pytest.approx(4 / 3, abs=1e-15)
    assert H_C1 == 0.0


def test_crossing_field_equalises_candidates():
    p = ModelParams(4.0, crossing_field(4.0))
    assert energy_functions(p, 1).e_minus == pytest.approx(energy_functions(p, -1).e_minus, abs=1e-14)


def test_crossing_field_rejects_negative_gamma():
    with pytest.raises(DomainError):
        crossing_field(-0.1)


def test_ground_state_isotropic_low_field_is_w_bar():
    gs = ground_state(ModelParams(1.0, 0.5))
    assert gs.branch is Branch.LOW_FIELD
    assert abs(np.vdot(w_state(1), gs.vector)) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_ground_state_isotropic_high_field_is_all_ones():
    gs = ground_state(ModelParams(1.0, 1.0))
    assert gs.branch is Branch.HIGH_FIELD
    assert abs(gs.vector[idx("111")]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_ground_state_degenerate_on_crossing():
    gs = ground_state(ModelParams(1.0, 2 / 3))
    assert gs.branch is Branch.DEGENERATE
    assert {c.block for c in gs.candidates} == {1, -1}


def test_zero_field_is_degenerate_between_blocks():
    assert ground_state(ModelParams(0.5, 0.0)).is_degenerate


@given(st.floats(0.0, 3.0), st.floats(0.0, 2.0))
def test_ground_state_support_and_norm(g, h):
    p = ModelParams(g, h)
    gs = ground_state(p)
    assert abs(np.linalg.norm(gs.vector) - 1) <= 1e-12
    if gs.is_degenerate:
        return
    other = gs.vector[4:] if gs.branch is Branch.LOW_FIELD else gs.vector[:4]
    assert np.all(other == 0)
    assert gs.energy == pytest.approx(oracle.spectrum_dense(p)[0], abs=1e-10)


@given(st.floats(0.0, 3.0), st.floats(0.0, 2.0))
def test_branch_follows_crossing_line(g, h):
    p = ModelParams(g, h)
    split = abs(energy_functions(p, 1).e_minus - energy_functions(p, -1).e_minus)
    gs = ground_state(p)
    assert gs.is_degenerate == (split <= p.tol_degeneracy)
    hc = crossing_field(g)
    if not gs.is_degenerate and abs(h - hc) > 1e-6:
        assert gs.branch is (Branch.LOW_FIELD if h < hc else Branch.HIGH_FIELD)


@given(st.floats(-3.0, -1.0 - 1e-6), st.floats(-2.0, 2.0))
def test_doublet_ground_state_rejected_below_minus_one(g, h):
    p = ModelParams(g, h)
    for s in (1, -1):
        ef = energy_functions(p, s)
        if -ef.e0 < ef.e_minus - p.tol_degeneracy:
            with pytest.raises(DomainError):
                block_state(p, s)


@given(st.floats(-1.0, 3.0), st.floats(-2.0, 2.0), st.sampled_from([1, -1]))
def test_block_ground_is_sector_minimum_for_gamma_above_minus_one(g, h, s):
    p = ModelParams(g, h)
    assert block_state(p, s).energy == pytest.approx(oracle.sector_eigensystem(p, s).values[0], abs=1e-10)


def test_negative_h_uses_block_swap():
    a = ground_state(ModelParams(0.5, 0.2))
    b = ground_state(ModelParams(0.5, -0.2))
    assert b.block == -a.block and b.branch is Branch.LOW_FIELD
    assert b.theta == a.theta and b.energy == a.energy


def test_distance_to_crossing():
    assert distance_to_crossing(1.0, 2 / 3) < 1e-12
    ts = np.linspace(0.0, 4.0, 400001)
    for g, h in [(0.25, 0.0), (1.0, 0.1), (0.05, 0.6)]:
        brute = np.min(np.hypot(ts - g, 2 / 3 * np.sqrt(ts) - h))
        assert distance_to_crossing(g, h) == pytest.approx(brute, abs=1e-6)


# --- Classification -----------------------------------------------------------

def test_classify_origin_ghz():
    c = classify_ground_state(ModelParams(0.0, 0.0))
    assert c.kind is StateKind.GHZ
    assert c.witness == pytest.approx(1.0, abs=1e-12)


def test_ghz_reference_is_rotated_ghz():
    # (|+++> + |--->)/sqrt(2) in the computational basis
    plus = np.array([1, 1]) / math.sqrt(2)
    minus = np.array([1, -1]) / math.sqrt(2)
    ghz = (np.kron(np.kron(plus, plus), plus) + np.kron(np.kron(minus, minus), minus)) / math.sqrt(2)
    from lmg3.model import to_parity_order

    assert np.allclose(to_parity_order(ghz), ghz_reference(1), atol=1e-15)


def test_classify_w_and_product():
    assert classify_ground_state(ModelParams(1.0, 0.5)).kind is StateKind.W
    c = classify_ground_state(ModelParams(1.0, 1.0))
    assert c.kind is StateKind.PRODUCT and c.witness == pytest.approx(1.0)


def test_classify_generic_and_crossing():
    c = classify_ground_state(ModelParams(0.5, 0.2))
    assert c.kind is StateKind.GENERIC and 0.0 <= c.witness <= 1.0
    with pytest.raises(CrossingError):
        classify_ground_state(ModelParams(1.0, 2 / 3))
    assert classify_ground_state(ModelParams(1.0, 2 / 3), block=-1).kind is StateKind.PRODUCT


def test_params_validation():
    with pytest.raises(DomainError):
        ModelParams(math.nan, 0.0)
    with pytest.raises(DomainError):
        ModelParams(0.0, 0.0, tol_degeneracy=0.0)


def test_block_state_explicit():
    s = block_state(ModelParams(1.0, 2 / 3), -1)
    assert s.block == -1 and s.branch is Branch.HIGH_FIELD
