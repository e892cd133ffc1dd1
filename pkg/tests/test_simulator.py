import numpy as np
import pytest

from conftest import random_spec
from tripauli.bitcore import WalshLabel
from tripauli.circuit import Circuit, RepeatedCircuit
from tripauli.decomposer import decompose, generate_sets, wave_hamiltonian
from tripauli.errors import CapExceededError
from tripauli.simulator import (MAX_QUBITS, apply_circuit, brute_force_decompose, check_hermitian,
                                circuit_unitary, dump_csv, embedding_matrix, evolve_state,
                                exact_propagator, label_to_dense, reconstruct, spectral_error,
                                weights_close)


def test_label_dense_basics():
    np.testing.assert_array_equal(label_to_dense("Y"), [[0, -1j], [1j, 0]])
    np.testing.assert_array_equal(label_to_dense("II"), np.eye(4))
    np.testing.assert_array_equal(label_to_dense("XX"), np.fliplr(np.eye(4)))


def test_label_dense_qubit_order():
    # qubit 1 is the least significant index bit
    np.testing.assert_array_equal(np.diag(label_to_dense("ZI")).real, [1, -1, 1, -1])


@pytest.mark.parametrize("text", ["XYZ", "YYI", "ZXY"])
def test_involution(text):
    p = label_to_dense(text)
    np.testing.assert_allclose(p @ p, np.eye(8), atol=1e-15)


def test_cap():
    with pytest.raises(CapExceededError):
        label_to_dense(WalshLabel(0, 0, MAX_QUBITS + 1))


def test_brute_force_examples():
    assert brute_force_decompose(np.diag([3, 1])) == {(0, 0): 4, (0, 1): 2}
    w = label_to_dense("XY")
    assert brute_force_decompose(w, tol=1e-12) == {(3, 2): 4}
    with pytest.raises(ValueError):
        brute_force_decompose(np.ones((3, 3)))


def test_brute_force_support_in_sets(rng):
    spec = random_spec(rng, 3)
    ref = brute_force_decompose(spec.to_dense(), tol=1e-10)
    allowed = {(lab.x, lab.z) for s in generate_sets(3) for lab in s.labels}
    assert set(ref) <= allowed


def test_exact_propagator():
    u = exact_propagator(np.diag([1.0, -1.0]), np.pi / 2)
    np.testing.assert_allclose(u, np.diag([np.exp(-0.5j * np.pi), np.exp(0.5j * np.pi)]), atol=1e-12)
    np.testing.assert_allclose(exact_propagator(np.diag([1.0, 2.0]), 0), np.eye(2))
    spec, ham = wave_hamiltonian([1] * 4, 2, 1 / 3)
    u = exact_propagator(embedding_matrix(spec.to_dense()), 1.0)
    assert np.linalg.norm(u.conj().T @ u - np.eye(8)) <= 1e-10
    with pytest.raises(ValueError):
        exact_propagator(np.array([[0, 1], [0, 0]]), 1.0)


def test_spectral_error():
    assert spectral_error(np.eye(4), np.eye(4)) == 0
    assert spectral_error(np.eye(4), -np.eye(4)) == pytest.approx(2)
    with pytest.raises(ValueError):
        spectral_error(np.eye(2), np.eye(4))


def test_evolve_state():
    c = Circuit(1)
    c.append("X", 0)
    np.testing.assert_allclose(evolve_state(c, [1, 0]), [0, 1])
    np.testing.assert_allclose(evolve_state(Circuit(2), [0, 1, 0, 0]), [0, 1, 0, 0])
    with pytest.raises(ValueError):
        evolve_state(c, [1, 1])
    with pytest.raises(ValueError):
        evolve_state(c, [1, 0, 0, 0])


def test_repeated_circuit_power():
    c = Circuit(2)
    c.append("H", 0)
    c.append("CX", 0, 1)
    c.append("RZ", 1, param=0.3)
    c.global_phase = 0.1
    step = circuit_unitary(c)
    np.testing.assert_allclose(circuit_unitary(RepeatedCircuit(c, 5)), np.linalg.matrix_power(step, 5), atol=1e-12)
    state = np.array([1, 0, 0, 0], dtype=complex)
    np.testing.assert_allclose(evolve_state(RepeatedCircuit(c, 3), state),
                               np.linalg.matrix_power(step, 3) @ state, atol=1e-12)


@pytest.mark.parametrize("gate, matrix", [
    (("CX", 0, 1), [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]]),
    (("CX", 1, 0), [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    (("CZ", 0, 1), np.diag([1, 1, 1, -1])),
])
def test_two_qubit_gates(gate, matrix):
    c = Circuit(2)
    c.append(*gate)
    np.testing.assert_array_equal(circuit_unitary(c), matrix)


def test_apply_batch_matches_single(rng):
    c = Circuit(3)
    for g in [("H", 0), ("CX", 0, 2), ("S", 1), ("CZ", 2, 1)]:
        c.append(*g)
    states = rng.normal(size=(8, 3)) + 0j
    batch = apply_circuit(c, states)
    for k in range(3):
        np.testing.assert_allclose(batch[:, k], apply_circuit(c, states[:, k]))


def test_reconstruct_and_weights(rng):
    spec = random_spec(rng, 2)
    d = decompose(spec)
    np.testing.assert_allclose(reconstruct(d), spec.to_dense(), atol=1e-12)
    assert weights_close(d.weight_map(), brute_force_decompose(spec.to_dense())) <= 1e-12


def test_check_hermitian():
    check_hermitian(np.eye(2))
    with pytest.raises(ValueError):
        check_hermitian(np.array([[0, 1], [0, 0]]))


def test_dump_csv(tmp_path):
    path = tmp_path / "m.csv"
    dump_csv(np.diag([1, 2j]), path)
    assert path.read_text() == "row,col,re,im\n0,0,1.0,0.0\n1,1,0.0,2.0\n"
