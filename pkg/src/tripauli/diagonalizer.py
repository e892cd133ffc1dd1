"""Clifford circuits that map every string of a commuting set to a Z-only string.

Labels are tracked symplectically with a sign bit; a gate ``U`` acts by
conjugation ``P -> U P U^dagger``. A circuit conjugates by its gates in list
order, so the dense operator is ``U = g_last ... g_1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from tripauli import kernels
from tripauli.bitcore import WalshLabel, commutes
from tripauli.decomposer import CommutingSet
from tripauli.errors import NonCommutingError

__all__ = ["CliffordCircuit", "DiagonalizedSet", "diagonalize_set", "symplectic_conjugate",
           "synthesize_diagonalizer"]

CLIFFORD_GATES = ("H", "S", "CX", "CZ")


@dataclass(frozen=True)
class CliffordCircuit:
    width: int
    gates: tuple[tuple, ...] = ()

    def __post_init__(self):
        for gate in self.gates:
            name, qubits = gate[0], gate[1:]
            if name not in CLIFFORD_GATES:
                raise ValueError(f"{name} is not in the Clifford alphabet {CLIFFORD_GATES}")
            if len(qubits) != (2 if name in ("CX", "CZ") else 1):
                raise ValueError(f"bad arity for {gate}")
            if any(not 0 <= q < self.width for q in qubits) or len(set(qubits)) != len(qubits):
                raise ValueError(f"qubit index out of range in {gate}")

    def __len__(self):
        return len(self.gates)

    def counts(self) -> dict[str, int]:
        out = {name: 0 for name in CLIFFORD_GATES}
        for gate in self.gates:
            out[gate[0]] += 1
        return out

    def to_text(self) -> str:
        """One gate per line with 1-based qubits, e.g. ``CX 1 4``."""
        return "".join(" ".join([g[0], *(str(q + 1) for q in g[1:])]) + "\n" for g in self.gates)

    @classmethod
    def from_text(cls, text: str, width: int) -> "CliffordCircuit":
        gates = []
        for lineno, line in enumerate(text.splitlines(), 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            try:
                gates.append((parts[0].upper(), *(int(p) - 1 for p in parts[1:])))
            except ValueError:
                raise ValueError(f"line {lineno}: cannot parse {line!r}") from None
        return cls(width, tuple(gates))


def _conj(gate: Sequence, x: int, z: int) -> tuple[int, int, int]:
    name, qubits = gate[0], tuple(gate[1:])
    if name == "CZ":
        steps = [("H", qubits[1]), ("CX", *qubits), ("H", qubits[1])]
    else:
        steps = [(name, *qubits)]
    flip = 0
    for step in steps:
        kind, q = step[0], step[1]
        xa, za = (x >> q) & 1, (z >> q) & 1
        if kind == "H":
            flip ^= xa & za
            if xa != za:
                x ^= 1 << q
                z ^= 1 << q
        elif kind == "S":
            flip ^= xa & za
            z ^= xa << q
        elif kind == "X":
            flip ^= za
        elif kind == "CX":
            t = step[2]
            xt, zt = (x >> t) & 1, (z >> t) & 1
            flip ^= xa & zt & (xt ^ za ^ 1)
            x ^= xa << t
            z ^= zt << q
        else:
            raise ValueError(f"unsupported gate {name}")
    return x, z, flip


def symplectic_conjugate(gate: Sequence, label: WalshLabel, sign: int = 1) -> tuple[WalshLabel, int]:
    """Image ``(label', sign')`` of ``sign * label`` under conjugation by one gate."""
    if any(not 0 <= q < label.n for q in gate[1:]):
        raise IndexError(f"gate {tuple(gate)} acts outside {label.n} qubits")
    x, z, flip = _conj(gate, label.x, label.z)
    return WalshLabel(x, z, label.n), -sign if flip else sign


def _rref_rows(rows: list[tuple[int, int]], width: int) -> list[list[int]]:
    """Row-reduce ``(x, z)`` rows on their X-part; returns ``[pivot, x, z]`` for X rows.

    Pivots are chosen lowest qubit first so results are reproducible.
    """
    rows = list(rows)
    out: list[list[int]] = []
    used = [False] * len(rows)
    for col in range(width):
        bit = 1 << col
        pick = next((i for i, r in enumerate(rows) if not used[i] and r[0] & bit), None)
        if pick is None:
            continue
        used[pick] = True
        px, pz = rows[pick]
        for i, (x, z) in enumerate(rows):
            if i != pick and x & bit:
                rows[i] = (x ^ px, z ^ pz)
        for row in out:
            if row[1] & bit:
                row[1] ^= px
                row[2] ^= pz
        out.append([col, px, pz])
    return out


def synthesize_diagonalizer(labels: Sequence[WalshLabel], width: int) -> CliffordCircuit:
    """Gates that take every (mutually commuting) label to a Z-only label.

    Gaussian elimination on the X-parts: CX clears X off the pivot columns,
    CZ and S clear Z on the rows' support, and a final H per pivot turns the
    remaining single-qubit X into Z. Z-only rows stay Z-only throughout.
    """
    rows = _rref_rows([(lab.x, lab.z) for lab in labels], width)
    gates: list[tuple] = []

    def push(gate):
        gates.append(gate)
        for row in rows:
            row[1], row[2], _ = _conj(gate, row[1], row[2])

    for row in rows:
        for col in range(width):
            if col != row[0] and (row[1] >> col) & 1:
                push(("CX", row[0], col))
    for row in rows:
        for col in range(width):
            if col != row[0] and (row[2] >> col) & 1:
                push(("CZ", row[0], col))
        if (row[2] >> row[0]) & 1:
            push(("S", row[0]))
    for row in rows:
        push(("H", row[0]))
    return CliffordCircuit(width, tuple(gates))


@dataclass(frozen=True)
class DiagonalizedSet:
    clifford: CliffordCircuit
    diagonal_terms: tuple[tuple[WalshLabel, complex], ...]
    source_set: CommutingSet = field(repr=False)
    signs: tuple[int, ...] = ()

    def signed_terms(self) -> list[tuple[WalshLabel, complex]]:
        return [(lab, s * w) for (lab, w), s in zip(self.diagonal_terms, self.signs)]

    @property
    def uses_phase_gate(self) -> bool:
        return any(g[0] == "S" for g in self.clifford.gates)


def check_commuting(labels: Sequence[WalshLabel]) -> None:
    for i, p in enumerate(labels):
        for q in labels[i + 1:]:
            if not commutes(p, q):
                raise NonCommutingError(p, q)


def diagonalize_set(cset: CommutingSet, width: int | None = None, validate: bool = True) -> DiagonalizedSet:
    """Clifford ``D`` with ``D P D^dagger = s * Lambda`` for each term ``P``.

    Weights are carried over unchanged; the conjugation signs ``s`` live in
    :attr:`DiagonalizedSet.signs` and enter only through
    ``exp(-i t sum(w P)) = D^dagger exp(-i t sum(s w Lambda)) D``.
    """
    labels = cset.labels
    if width is None:
        width = labels[0].n if labels else max(cset.x_selector.bit_length(), 1)
    if validate:
        check_commuting(labels)
    clifford = synthesize_diagonalizer(labels, width)
    xs, zs, signs = kernels.propagate_labels(
        [lab.x for lab in labels], [lab.z for lab in labels], np.zeros(len(labels)), clifford.gates)
    if np.any(xs):
        raise AssertionError(f"diagonalisation left X parts in set {cset.name}")
    if len(set(zs.tolist())) != len(labels):
        raise AssertionError(f"diagonal labels collide in set {cset.name}")
    sgn = tuple(-1 if s else 1 for s in signs.tolist())
    diag = tuple((WalshLabel(0, int(z), width), t.weight) for z, t in zip(zs.tolist(), cset.terms))
    return DiagonalizedSet(clifford, diag, cset, sgn)


def gate_budget(n: int, clifford: CliffordCircuit) -> float:
    """Clifford length divided by ``n**2``."""
    return len(clifford) / max(n, 1) ** 2
