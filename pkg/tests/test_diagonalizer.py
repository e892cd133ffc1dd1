import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_spec
from tripauli.bitcore import WalshLabel
from tripauli.circuit import Circuit
from tripauli.decomposer import CommutingSet, PauliTerm, decompose, embed_hermitian, generate_sets
from tripauli.diagonalizer import (CliffordCircuit, check_commuting, diagonalize_set, gate_budget,
                                   symplectic_conjugate, synthesize_diagonalizer)
from tripauli.errors import NonCommutingError
from tripauli.simulator import circuit_unitary, label_to_dense


def clifford_unitary(clifford):
    circ = Circuit(clifford.width)
    for g in clifford.gates:
        circ.append(g[0], *g[1:])
    return circuit_unitary(circ)


def layout_set(layout, weights=None):
    weights = weights or [1.0 + k for k in range(len(layout.labels))]
    terms = tuple(PauliTerm(lab, w) for lab, w in zip(layout.labels, weights))
    return CommutingSet(layout.m, layout.parity, layout.x_selector, terms)


@pytest.mark.parametrize("gate, before, after, sign", [
    (("H", 0), "X", "Z", 1), (("H", 0), "Z", "X", 1), (("H", 0), "Y", "Y", -1),
    (("S", 0), "X", "Y", 1), (("S", 0), "Y", "X", -1), (("S", 0), "Z", "Z", 1),
    (("CX", 0, 1), "XI", "XX", 1), (("CX", 0, 1), "IZ", "ZZ", 1), (("CX", 0, 1), "ZI", "ZI", 1),
    (("CZ", 0, 1), "XI", "XZ", 1), (("CZ", 0, 1), "YY", "XX", 1),
])
def test_conjugation_table(gate, before, after, sign):
    lab, s = symplectic_conjugate(gate, WalshLabel.from_pauli(before))
    assert (lab.pauli, s) == (after, sign)


@settings(max_examples=60, deadline=None)
@given(st.text(alphabet="IXYZ", min_size=2, max_size=3),
       st.sampled_from(["H", "S", "CX", "CZ", "X"]), st.integers(0, 2), st.integers(1, 2))
def test_conjugation_matches_dense(text, kind, a, shift):
    width = len(text)
    a %= width
    gate = (kind, a, (a + shift) % width) if kind in ("CX", "CZ") else (kind, a)
    if kind in ("CX", "CZ") and gate[1] == gate[2]:
        return
    lab = WalshLabel.from_pauli(text)
    new, s = symplectic_conjugate(gate, lab)
    circ = Circuit(width)
    circ.append(*gate)
    u = circuit_unitary(circ)
    np.testing.assert_allclose(u @ label_to_dense(lab) @ u.conj().T, s * label_to_dense(new), atol=1e-12)


def test_conjugate_out_of_range():
    with pytest.raises(IndexError):
        symplectic_conjugate(("H", 3), WalshLabel.from_pauli("XX"))


def test_z_only_set_gets_identity():
    s = layout_set(generate_sets(3)[0])
    d = diagonalize_set(s)
    assert len(d.clifford) == 0
    assert [lab for lab, _ in d.diagonal_terms] == list(s.labels)
    assert set(d.signs) == {1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("cls", ["general", "real-symmetric"])
def test_layouts_diagonalise_densely(n, cls):
    for layout in generate_sets(n, cls):
        s = layout_set(layout)
        d = diagonalize_set(s)
        u = clifford_unitary(d.clifford)
        for (lab, w), sgn, term in zip(d.diagonal_terms, d.signs, s.terms):
            assert lab.is_diagonal
            assert w == term.weight
            conj = u @ label_to_dense(term.label) @ u.conj().T
            np.testing.assert_allclose(conj, sgn * label_to_dense(lab), atol=1e-10)
        assert len(d.clifford) <= 2 * n * n


def test_odd_set_uses_phase_gate():
    odd = next(layout for layout in generate_sets(2) if layout.parity == "odd")
    assert diagonalize_set(layout_set(odd)).uses_phase_gate


@pytest.mark.parametrize("n", [1, 2, 3])
def test_embedded_sets(rng, n):
    emb = embed_hermitian(decompose(random_spec(rng, n, "real")))
    for s in emb.nonempty_sets():
        d = diagonalize_set(s)
        u = clifford_unitary(d.clifford)
        for (lab, _), sgn, term in zip(d.diagonal_terms, d.signs, s.terms):
            np.testing.assert_allclose(u @ label_to_dense(term.label) @ u.conj().T,
                                       sgn * label_to_dense(lab), atol=1e-10)


def test_rejects_noncommuting():
    labels = [WalshLabel.from_pauli("XI"), WalshLabel.from_pauli("ZI")]
    s = CommutingSet(1, "even", 1, tuple(PauliTerm(lab, 1.0) for lab in labels))
    with pytest.raises(NonCommutingError) as info:
        diagonalize_set(s)
    assert {str(p) for p in info.value.pair} == {"XI", "ZI"}
    check_commuting(labels[:1])


def test_synthesis_is_deterministic():
    labels = generate_sets(4)[5].labels
    assert synthesize_diagonalizer(labels, 4) == synthesize_diagonalizer(labels, 4)


def test_text_roundtrip():
    c = CliffordCircuit(3, (("H", 0), ("CX", 0, 2), ("S", 1), ("CZ", 1, 2)))
    assert c.to_text() == "H 1\nCX 1 3\nS 2\nCZ 2 3\n"
    assert CliffordCircuit.from_text(c.to_text(), 3) == c
    assert c.counts() == {"H": 1, "S": 1, "CX": 1, "CZ": 1}


@pytest.mark.parametrize("gates", [(("RZ", 0),), (("H", 3),), (("CX", 1, 1),), (("CX", 0),)])
def test_clifford_validation(gates):
    with pytest.raises(ValueError):
        CliffordCircuit(2, gates)


def test_gate_budget():
    assert gate_budget(2, CliffordCircuit(2, (("H", 0),) * 8)) == 2.0
