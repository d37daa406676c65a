import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stealthq import qsim
from stealthq.errors import InvalidArgumentError
from stealthq.qsim import Statevector, ZString, apply_cnot, apply_ry, expectation_zstring, init_zero

import oracles

angles = st.floats(-np.pi, np.pi, allow_nan=False)


def random_circuit(rng, n, n_gates):
    """List of ('ry', q, theta) / ('cx', c, t) gates."""
    gates = []
    for _ in range(n_gates):
        if n > 1 and rng.random() < 0.4:
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(("cx", int(c), int(t)))
        else:
            gates.append(("ry", int(rng.integers(n)), float(rng.uniform(-np.pi, np.pi))))
    return gates


def run_sim(n, gates):
    state = init_zero(n)
    for kind, a, b in gates:
        state = apply_ry(state, a, b) if kind == "ry" else apply_cnot(state, a, b)
    return state


def run_oracle(n, gates):
    psi = oracles.zero_state(n)
    for kind, a, b in gates:
        U = oracles.ry_full(n, a, b) if kind == "ry" else oracles.cnot_full(n, a, b)
        psi = U @ psi
    return psi


class TestInitZero:
    def test_three_qubits(self):
        np.testing.assert_array_equal(init_zero(3).amplitudes, [1, 0, 0, 0, 0, 0, 0, 0])

    def test_one_qubit(self):
        np.testing.assert_array_equal(init_zero(1).amplitudes, [1, 0])

    @pytest.mark.parametrize("n", [0, -1, 13])
    def test_out_of_range(self, n):
        with pytest.raises(InvalidArgumentError):
            init_zero(n)

    def test_batch(self):
        s = init_zero(2, (4, 5))
        assert s.batch_shape == (4, 5)
        np.testing.assert_array_equal(s.norm_squared(), np.ones((4, 5)))

    def test_amplitudes_read_only(self):
        with pytest.raises(ValueError):
            init_zero(2).amplitudes[0] = 0


class TestRy:
    def test_zero_angle_is_identity(self):
        np.testing.assert_array_equal(apply_ry(init_zero(1), 0, 0.0).amplitudes, [1, 0])

    def test_half_turn(self):
        np.testing.assert_allclose(apply_ry(init_zero(1), 0, np.pi).amplitudes, [0, 1], atol=1e-12)

    def test_expectation_matches_matrix_product(self):
        a = oracles.ry_matrix(0.7) @ np.array([1.0, 0.0])
        ref = abs(a[0]) ** 2 - abs(a[1]) ** 2
        got = expectation_zstring(apply_ry(init_zero(1), 0, 0.7), ZString(1, 1))
        assert abs(got - ref) < 1e-12
        assert abs(got - np.cos(0.7)) < 1e-12

    def test_second_qubit_is_bit_one(self):
        s = apply_ry(init_zero(2), 1, np.pi)
        np.testing.assert_allclose(np.abs(s.amplitudes), [0, 0, 1, 0], atol=1e-12)

    def test_batched_angles(self):
        theta = np.linspace(-3, 3, 7)
        s = apply_ry(init_zero(1, (7,)), 0, theta)
        np.testing.assert_allclose(expectation_zstring(s, ZString(1, 1)), np.cos(theta), atol=1e-12)

    @pytest.mark.parametrize("bad", [np.nan, np.inf])
    def test_non_finite_angle(self, bad):
        with pytest.raises(InvalidArgumentError):
            apply_ry(init_zero(1), 0, bad)

    def test_qubit_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            apply_ry(init_zero(2), 2, 0.1)

    @given(angles)
    def test_rotation_identity(self, theta):
        got = expectation_zstring(apply_ry(init_zero(1), 0, theta), ZString(1, 1))
        assert abs(got - np.cos(theta)) < 1e-12


class TestCnot:
    def test_control_zero_unchanged(self):
        s = apply_cnot(Statevector(2, [1, 0, 0, 0]), 0, 1)
        np.testing.assert_array_equal(s.amplitudes, [1, 0, 0, 0])

    def test_flips_target(self):
        s = apply_cnot(Statevector(2, [0, 1, 0, 0]), 0, 1)
        np.testing.assert_array_equal(s.amplitudes, [0, 0, 0, 1])

    def test_degenerate_indices(self):
        with pytest.raises(InvalidArgumentError):
            apply_cnot(init_zero(2), 0, 0)

    def test_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            apply_cnot(init_zero(2), 0, 5)

    @given(st.integers(0, 2**31 - 1), st.integers(2, 4))
    def test_involution(self, seed, n):
        rng = np.random.default_rng(seed)
        psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        state = Statevector(n, psi / np.linalg.norm(psi))
        c, t = rng.choice(n, size=2, replace=False)
        twice = apply_cnot(apply_cnot(state, int(c), int(t)), int(c), int(t))
        np.testing.assert_array_equal(twice.amplitudes, state.amplitudes)


class TestExpectation:
    @pytest.mark.parametrize("mask", range(8))
    def test_ground_state_is_plus_one(self, mask):
        assert expectation_zstring(init_zero(3), ZString(3, mask)) == 1.0

    def test_identity_observable(self):
        rng = np.random.default_rng(3)
        psi = rng.normal(size=8) + 1j * rng.normal(size=8)
        s = Statevector(3, psi / np.linalg.norm(psi))
        assert abs(expectation_zstring(s, ZString(3, 0)) - 1.0) < 1e-12

    def test_bell_state(self):
        bell = apply_cnot(apply_ry(init_zero(2), 0, np.pi / 2), 0, 1)
        assert abs(expectation_zstring(bell, ZString.on(2, [0]))) < 1e-12
        assert abs(expectation_zstring(bell, ZString.on(2, [1]))) < 1e-12
        assert abs(expectation_zstring(bell, ZString.on(2, [0, 1])) - 1.0) < 1e-12

    def test_qubit_count_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            expectation_zstring(init_zero(2), ZString(3, 1))


class TestZString:
    def test_label_and_mask(self):
        z = ZString.on(3, [0, 2])
        assert z.z_mask == 0b101
        assert z.label() == "ZIZ"

    def test_mask_outside_register(self):
        with pytest.raises(InvalidArgumentError):
            ZString(2, 0b100)

    def test_signs_match_dense_diagonal(self):
        for mask in range(16):
            qubits = [q for q in range(4) if mask >> q & 1]
            dense = np.diag(oracles.zstring_full(4, qubits))
            np.testing.assert_array_equal(ZString(4, mask).signs(), dense)


def test_statevector_shape_check():
    with pytest.raises(InvalidArgumentError):
        Statevector(2, np.zeros(3))


def test_kronecker_oracle_random_circuits():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(150):
        n = int(rng.integers(1, 4))
        gates = random_circuit(rng, n, int(rng.integers(1, 13)))
        state = run_sim(n, gates)
        psi = run_oracle(n, gates)
        worst = max(worst, np.abs(state.amplitudes - psi).max())
        for mask in range(2**n):
            qubits = [q for q in range(n) if mask >> q & 1]
            ref = oracles.expectation(psi, oracles.zstring_full(n, qubits))
            got = expectation_zstring(state, ZString(n, mask))
            assert abs(got - ref) < 1e-10
    assert worst < 1e-10


@settings(max_examples=50)
@given(st.integers(0, 2**31 - 1))
def test_norm_preserved_and_expectations_bounded(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    state = run_sim(n, random_circuit(rng, n, 20))
    assert abs(state.norm_squared() - 1.0) < 1e-10
    for mask in range(2**n):
        e = expectation_zstring(state, ZString(n, mask))
        assert -1 - 1e-12 <= e <= 1 + 1e-12


def test_batched_matches_per_sample():
    rng = np.random.default_rng(9)
    theta = rng.uniform(-np.pi, np.pi, size=(6, 3))
    batch = init_zero(3, (6,))
    for q in range(3):
        batch = apply_ry(batch, q, theta[:, q])
    batch = apply_cnot(batch, 2, 0)
    for k in range(6):
        single = init_zero(3)
        for q in range(3):
            single = apply_ry(single, q, theta[k, q])
        single = apply_cnot(single, 2, 0)
        np.testing.assert_allclose(batch.amplitudes[k], single.amplitudes, atol=1e-15)


def test_max_qubits_register():
    s = apply_ry(init_zero(qsim.MAX_QUBITS), qsim.MAX_QUBITS - 1, np.pi)
    assert abs(s.probabilities()[2 ** (qsim.MAX_QUBITS - 1)] - 1.0) < 1e-12
