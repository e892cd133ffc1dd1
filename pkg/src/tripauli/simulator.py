"""Dense reference computations used to check every other module.

Qubit ``q`` (0-based) is bit ``q`` of a basis index, so a Pauli label renders
as ``kron(P_{n-1}, ..., P_1, P_0)``. Everything here is brute force and capped
at :data:`MAX_QUBITS`.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Mapping

import numpy as np

from tripauli.bitcore import WalshLabel
from tripauli.errors import CapExceededError

MAX_QUBITS = 12
HERMITIAN_TOL = 1e-12

_PAULI = {
    (0, 0): np.eye(2, dtype=np.complex128),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=np.complex128),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=np.complex128),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
}


def _check_cap(width: int) -> None:
    if width > MAX_QUBITS:
        raise CapExceededError(f"{width} qubits exceeds the dense simulation cap of {MAX_QUBITS}")


@lru_cache(maxsize=4096)
def _label_dense_cached(x: int, z: int, n: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for q in reversed(range(n)):
        out = np.kron(out, _PAULI[((x >> q) & 1, (z >> q) & 1)])
    out.setflags(write=False)
    return out


def label_to_dense(label: WalshLabel | str) -> np.ndarray:
    """Dense matrix of a Pauli label (read-only, cached)."""
    if isinstance(label, str):
        label = WalshLabel.from_pauli(label)
    _check_cap(label.n)
    return _label_dense_cached(label.x, label.z, label.n)


def reconstruct(decomp) -> np.ndarray:
    """Dense sum ``prefactor * sum(weight * W)`` of a decomposition."""
    _check_cap(decomp.n)
    size = 1 << decomp.n
    out = np.zeros((size, size), dtype=np.complex128)
    for term in decomp.terms:
        out += term.weight * label_to_dense(term.label)
    return decomp.prefactor * out


def brute_force_decompose(matrix, tol: float = 0.0) -> dict[tuple[int, int], complex]:
    """All ``4**n`` coefficients ``Tr(B W(x, z))`` with ``|beta| > tol``."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    size = matrix.shape[0]
    n = size.bit_length() - 1
    if matrix.shape != (size, size) or size != 1 << n:
        raise ValueError(f"expected a 2**n square matrix, got shape {matrix.shape}")
    _check_cap(n)
    out = {}
    for x in range(size):
        for z in range(size):
            beta = complex(np.trace(matrix @ _label_dense_cached(x, z, n)))
            if abs(beta) > tol:
                out[(x, z)] = beta
    return out


def embedding_matrix(b_matrix) -> np.ndarray:
    """Block matrix ``[[0, B], [B^dagger, 0]]``."""
    b_matrix = np.asarray(b_matrix, dtype=np.complex128)
    zero = np.zeros_like(b_matrix)
    return np.block([[zero, b_matrix], [b_matrix.conj().T, zero]])


def check_hermitian(matrix, tol: float = HERMITIAN_TOL) -> None:
    dev = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")


def exact_propagator(hamiltonian, t: float) -> np.ndarray:
    """``exp(-i H t)`` via the eigendecomposition of a Hermitian ``H``."""
    hamiltonian = np.asarray(hamiltonian, dtype=np.complex128)
    check_hermitian(hamiltonian)
    evals, evecs = np.linalg.eigh(hamiltonian)
    return (evecs * np.exp(-1j * t * evals)) @ evecs.conj().T


def spectral_error(u, v) -> float:
    """Largest singular value of ``u - v``."""
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    return float(np.linalg.norm(u - v, 2))


# --- circuits ---------------------------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(np.complex128)
_X = _PAULI[(1, 0)]


def _apply_1q(state: np.ndarray, width: int, q: int, op: np.ndarray) -> np.ndarray:
    axis = width - 1 - q
    state = np.moveaxis(state, axis, 0)
    state = np.tensordot(op, state, axes=(1, 0))
    return np.moveaxis(state, 0, axis)


def _apply_gate(state: np.ndarray, width: int, gate) -> np.ndarray:
    name, qubits, param = gate.name, gate.qubits, gate.param
    if name == "H":
        return _apply_1q(state, width, qubits[0], _H)
    if name == "S":
        return _apply_1q(state, width, qubits[0], _S)
    if name == "X":
        return _apply_1q(state, width, qubits[0], _X)
    if name == "RZ":
        op = np.diag([np.exp(-0.5j * param), np.exp(0.5j * param)])
        return _apply_1q(state, width, qubits[0], op)
    if name in ("CX", "CZ"):
        a, b = qubits
        idx_a = [slice(None)] * state.ndim
        idx_a[width - 1 - a] = 1
        sub = state[tuple(idx_a)]
        # dropping qubit a's axis shifts qubit b's axis when it came later
        b_axis = (width - 1 - b) - (1 if (width - 1 - b) > (width - 1 - a) else 0)
        if name == "CX":
            sub = np.flip(sub, axis=b_axis)
        else:
            sub = sub.copy()
            idx_b = [slice(None)] * sub.ndim
            idx_b[b_axis] = 1
            sub[tuple(idx_b)] *= -1
        state = state.copy()
        state[tuple(idx_a)] = sub
        return state
    raise ValueError(f"unsupported gate {name}")


def _as_step(circuit):
    """``(flat circuit, repetitions)`` for either a Circuit or a repeated one."""
    body = getattr(circuit, "body", None)
    if body is not None:
        return body, circuit.repetitions
    return circuit, 1


def apply_circuit(circuit, states: np.ndarray) -> np.ndarray:
    """Apply a flat circuit to the columns of ``states`` (shape ``(2**w,)`` or ``(2**w, k)``)."""
    width = circuit.width
    _check_cap(width)
    states = np.asarray(states, dtype=np.complex128)
    vector = states.ndim == 1
    batch = states.reshape(1 << width, -1)
    tensor = batch.reshape((2,) * width + (batch.shape[1],))
    for gate in circuit.gates:
        tensor = _apply_gate(tensor, width, gate)
    out = tensor.reshape(1 << width, -1) * np.exp(1j * circuit.global_phase)
    return out[:, 0] if vector else out


def circuit_unitary(circuit) -> np.ndarray:
    """Dense unitary of a circuit; repeated circuits use binary powering."""
    body, reps = _as_step(circuit)
    _check_cap(body.width)
    step = apply_circuit(body, np.eye(1 << body.width, dtype=np.complex128))
    if reps == 1:
        return step
    return np.linalg.matrix_power(step, reps)


def evolve_state(operator, state, tol: float = 1e-10) -> np.ndarray:
    """Apply a circuit or a dense unitary to a normalised state vector."""
    state = np.asarray(state, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"input state is not normalised (norm {norm})")
    if isinstance(operator, np.ndarray):
        if operator.shape != (state.shape[0], state.shape[0]):
            raise ValueError(f"dimension mismatch: {operator.shape} vs {state.shape}")
        return operator @ state
    body, reps = _as_step(operator)
    if 1 << body.width != state.shape[0]:
        raise ValueError(f"dimension mismatch: {body.width} qubits vs state of length {state.shape[0]}")
    if reps == 1:
        return apply_circuit(body, state)
    return circuit_unitary(operator) @ state


def weights_close(ours: Mapping, reference: Mapping) -> float:
    """Max absolute difference between two sparse weight maps."""
    keys = set(ours) | set(reference)
    return max((abs(ours.get(k, 0) - reference.get(k, 0)) for k in keys), default=0.0)


def dump_csv(matrix, path) -> None:
    """Write a dense matrix as ``row,col,re,im`` lines (nonzeros only)."""
    matrix = np.asarray(matrix)
    with open(path, "w") as fh:
        fh.write("row,col,re,im\n")
        for r, c in zip(*np.nonzero(matrix)):
            v = matrix[r, c]
            fh.write(f"{r},{c},{float(v.real)!r},{float(v.imag)!r}\n")
