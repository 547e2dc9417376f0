import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmqc import protocol
from gmqc.protocol import IDENTITY, PauliFrame
from gmqc.spin import X, Z

FX, FZ, FXZ = PauliFrame(1, 0), PauliFrame(0, 1), PauliFrame(1, 1)
M = {1: X, 2: X @ Z, 3: Z}


def same_up_to_phase(a, b, tol=1e-10):
    c = np.vdot(b, a)
    return abs(c) > 0 and np.linalg.norm(a - (c / abs(c)) * b) < tol


def hand_kraus(c):
    # <gamma| applied to the physical leg, written in the |1>,|2>,|3> frame
    return sum(np.conj(c[a - 1]) * M[a] for a in (1, 2, 3))


def test_pauli_frame_group():
    assert FX * FZ == FXZ
    assert FXZ * FXZ == IDENTITY
    np.testing.assert_allclose(FXZ.matrix(), X @ Z)
    assert [f.label() for f in (IDENTITY, FX, FZ, FXZ)] == ["I", "X", "Z", "XZ"]


def test_pauli_class_ignores_phase():
    assert protocol.pauli_class(1j * X @ Z) == FXZ
    assert protocol.pauli_class(np.eye(2) * np.exp(0.3j)) == IDENTITY
    assert protocol.pauli_class(protocol.rz(0.4)) is None


@pytest.mark.parametrize("theta", [0.0, 0.4, -2.9, np.pi / 2])
def test_rotation_bases_are_orthonormal(theta):
    for make in (protocol.rz_basis, protocol.rx_basis):
        b = make(theta)
        np.testing.assert_allclose(b @ b.conj().T, np.eye(3), atol=1e-12)


@pytest.mark.parametrize(
    "axis, expected",
    [
        ("Z", {1: (True, FX), 2: (True, FXZ), 3: (False, FZ)}),
        ("X", {1: (True, FXZ), 2: (True, FZ), 3: (False, FX)}),
    ],
)
def test_rotation_tables(axis, expected):
    assert protocol.rotation_table(axis) == expected


@settings(max_examples=40, deadline=None)
@given(theta=st.floats(-np.pi, np.pi), axis=st.sampled_from(["Z", "X"]))
def test_rotation_kraus_decomposition(theta, axis):
    basis = protocol.BASES[axis](theta)
    gate = protocol.LOGICAL_GATES[axis](theta)
    for label, (ok, frame) in protocol.rotation_table(axis).items():
        k = hand_kraus(basis[label - 1])
        target = frame.matrix() @ (gate if ok else np.eye(2))
        assert same_up_to_phase(k, target)


def test_teleport_table_is_the_bare_kraus_set():
    assert protocol.teleport_table() == {1: FX, 2: FXZ, 3: FZ}


@pytest.mark.parametrize("theta", [0.3, -1.2])
def test_angle_adaptation(theta):
    for frame in (IDENTITY, FX, FZ, FXZ):
        for axis in ("Z", "X"):
            gate = protocol.LOGICAL_GATES[axis]
            adapted = protocol.adapt_angle(frame, axis, theta)
            # R(adapted) F = F R(theta)
            lhs = gate(adapted) @ frame.matrix()
            rhs = frame.matrix() @ gate(theta)
            assert same_up_to_phase(lhs, rhs)
    with pytest.raises(ValueError):
        protocol.adapt_angle(IDENTITY, "Y", 0.1)


def test_gamma_unitary_is_unitary_and_entangling():
    g = protocol.gamma_unitary()
    np.testing.assert_allclose(g @ g.conj().T, np.eye(4), atol=1e-12)
    np.testing.assert_allclose(np.abs(g), 0.5 * np.ones((4, 4)), atol=1e-12)
    u = protocol.interaction_in_frame()
    # |3> = |m=0> is untouched
    for k in range(9):
        if k // 3 == 2 or k % 3 == 2:
            e = np.zeros(9)
            e[k] = 1
            np.testing.assert_allclose(u @ e, e, atol=1e-12)


def test_cphase_table_success_pattern():
    table = protocol.cphase_table()
    wins = {pair for pair, (ok, _) in table.items() if ok}
    assert wins == {(1, 1), (1, 2), (2, 1), (2, 2)}
    assert table[1, 2][1] == (FX, FXZ)
    assert table[3, 3] == (False, (FZ, FZ))


def test_cphase_kraus_decomposition():
    cz = protocol.CPHASE
    for pair, (ok, (fa, fb)) in protocol.cphase_table().items():
        k = protocol.cphase_kraus(*pair)
        target = np.kron(fa.matrix(), fb.matrix()) @ (cz if ok else np.eye(4))
        assert same_up_to_phase(k, target), pair
    total = sum(k.conj().T @ k for k in (protocol.cphase_kraus(a, b) for a, b in itertools.product((1, 2, 3), repeat=2)))
    np.testing.assert_allclose(total, 9 * np.eye(4), atol=1e-10)


@pytest.mark.parametrize("fa, fb", list(itertools.product([IDENTITY, FX, FZ, FXZ], repeat=2)))
def test_frame_propagation_through_cphase(fa, fb):
    ga, gb = protocol.propagate_through_cphase(fa, fb)
    lhs = protocol.CPHASE @ np.kron(fa.matrix(), fb.matrix())
    rhs = np.kron(ga.matrix(), gb.matrix()) @ protocol.CPHASE
    assert same_up_to_phase(lhs, rhs)


def test_boundary_maps():
    init = protocol.init_map()
    assert init[0][1] == 0 and init[1][1] == 1
    assert init[0][0] == pytest.approx(0.5) and init[1][0] == pytest.approx(0.5)
    # outcome "up" at the right end reads logical 1, "down" reads 0
    assert protocol.readout_bond_bits() == {0: 1, 1: 0}
    assert protocol.decode_readout(0, IDENTITY) == 1
    assert protocol.decode_readout(1, FX) == 1
    assert protocol.decode_readout(1, FZ) == 0


def test_init_branches_produce_zero_state():
    for res in protocol.init_branches(protocol.LogicalRegister.fresh(1), 0):
        corrected = res.frames[0].matrix() @ res.state.vector
        assert abs(corrected[0]) == pytest.approx(1.0)


def test_rotation_branch_probabilities(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    state = protocol.LogicalRegister(v / np.linalg.norm(v))
    for axis in ("Z", "X"):
        branches = protocol.rotation_branches(state, 1, 1, axis, 0.9, IDENTITY)
        assert [b.probability for b in branches] == pytest.approx([1 / 3] * 3)
    pairs = protocol.cphase_branches(state, 0, 1, 1, (IDENTITY, FX))
    assert len(pairs) == 9
    assert sum(b.probability for b in pairs) == pytest.approx(1.0)


def test_readout_skips_impossible_branches():
    state = protocol.LogicalRegister(np.array([1, 0], dtype=complex))
    branches = protocol.readout_branches(state, 0, IDENTITY, site=5)
    assert len(branches) == 1
    assert branches[0].bit == 0 and branches[0].sites == (5,)


def test_sampling_is_seeded(rng):
    state = protocol.LogicalRegister.fresh(1)
    draws = [
        protocol.attempt_rotation(state, 0, 1, "Z", 0.5, IDENTITY, np.random.default_rng(s)).outcome
        for s in range(20)
    ]
    again = [
        protocol.attempt_rotation(state, 0, 1, "Z", 0.5, IDENTITY, np.random.default_rng(s)).outcome
        for s in range(20)
    ]
    assert draws == again
    assert set(draws) == {1, 2, 3}


def test_gamma_closed_form():
    one_minus_x = np.eye(2) - X
    expected = np.eye(4) - 0.5 * np.kron(one_minus_x, one_minus_x)
    np.testing.assert_allclose(protocol.gamma_unitary(), expected, atol=1e-12)
