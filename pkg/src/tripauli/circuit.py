"""Gate lists, diagonal-exponent synthesis and Trotterised propagators.

Rotation convention: ``RZ(phi) = diag(exp(-i phi/2), exp(i phi/2))``, so
``exp(-i theta Z) = RZ(2 theta)``. Global phases are tracked on the circuit
so dense renderings match ``exp(-i H t)`` exactly, not just up to phase.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from tripauli.bitcore import WalshLabel
from tripauli.decomposer import Decomposition
from tripauli.diagonalizer import CliffordCircuit, DiagonalizedSet, diagonalize_set

__all__ = [
    "Circuit",
    "Gate",
    "GateCount",
    "RepeatedCircuit",
    "TrotterPlan",
    "count_gates",
    "estimate_trotter_steps",
    "suzuki_sequence",
    "synthesize_diagonal_exponent",
    "trotter_circuit",
]

GATE_KINDS = ("H", "S", "CX", "CZ", "RZ", "X")
_ARITY = {"H": 1, "S": 1, "X": 1, "RZ": 1, "CX": 2, "CZ": 2}


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]
    param: float | None = None

    def text(self) -> str:
        parts = [self.name, *(str(q + 1) for q in self.qubits)]
        if self.param is not None:
            parts.append(repr(float(self.param)))
        return " ".join(parts)


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    global_phase: float = 0.0
    # (tag, start, stop) gate-index ranges
    blocks: list[tuple[str, int, int]] = field(default_factory=list)

    def append(self, name: str, *qubits: int, param: float | None = None) -> None:
        if name not in _ARITY:
            raise ValueError(f"unknown gate {name}")
        if len(qubits) != _ARITY[name] or len(set(qubits)) != len(qubits):
            raise ValueError(f"bad qubits {qubits} for {name}")
        if any(not 0 <= q < self.width for q in qubits):
            raise ValueError(f"qubit index out of range for width {self.width}: {qubits}")
        if name == "RZ" and not (param is not None and math.isfinite(param)):
            raise ValueError(f"RZ needs a finite angle, got {param}")
        self.gates.append(Gate(name, tuple(qubits), None if param is None else float(param)))

    def extend(self, other: "Circuit", tag: str | None = None) -> None:
        if other.width != self.width:
            raise ValueError("width mismatch")
        start = len(self.gates)
        self.gates.extend(other.gates)
        self.global_phase += other.global_phase
        for t, a, b in other.blocks:
            self.blocks.append((t, a + start, b + start))
        if tag is not None:
            self.blocks.append((tag, start, len(self.gates)))

    def __len__(self):
        return len(self.gates)

    def to_text(self) -> str:
        return "".join(g.text() + "\n" for g in self.gates)

    def to_qasm(self) -> str:
        return to_qasm(self)


@dataclass
class RepeatedCircuit:
    """``body`` applied ``repetitions`` times."""

    body: Circuit
    repetitions: int

    @property
    def width(self) -> int:
        return self.body.width


@dataclass(frozen=True)
class GateCount:
    counts: dict[str, int]
    total: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ValueError("per-kind counts do not sum to the total")

    def __getitem__(self, kind: str) -> int:
        return self.counts.get(kind, 0)


def count_gates(circuit: Circuit | RepeatedCircuit | CliffordCircuit) -> GateCount:
    reps = 1
    if isinstance(circuit, RepeatedCircuit):
        circuit, reps = circuit.body, circuit.repetitions
    tally = Counter(g[0] for g in circuit.gates)
    counts = {kind: tally.get(kind, 0) * reps for kind in GATE_KINDS}
    return GateCount(counts, sum(counts.values()))


def to_qasm(circuit: Circuit | RepeatedCircuit, max_gates: int = 1_000_000) -> str:
    """OpenQASM 2.0 text; repeated circuits are unrolled up to ``max_gates``."""
    body, reps = (circuit.body, circuit.repetitions) if isinstance(circuit, RepeatedCircuit) else (circuit, 1)
    if len(body.gates) * reps > max_gates:
        raise ValueError(f"{len(body.gates) * reps} gates exceed the export limit {max_gates}")
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";',
             f"// global phase: {body.global_phase * reps!r}", f"qreg q[{body.width}];"]
    step = []
    for g in body.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        name = g.name.lower()
        step.append(f"rz({g.param!r}) {args};" if g.name == "RZ" else f"{name} {args};")
    for _ in range(reps):
        lines.extend(step)
    return "\n".join(lines) + "\n"


# --- diagonal exponents -----------------------------------------------------

def _gray_rank(g: int) -> int:
    # position of g in the reflected Gray sequence
    r = g
    shift = g >> 1
    while shift:
        r ^= shift
        shift >>= 1
    return r


def synthesize_diagonal_exponent(terms: Iterable[tuple[WalshLabel, float]], width: int | None = None,
                                 tol: float = 0.0) -> Circuit:
    """Circuit for ``exp(-i sum_z theta_z Z**z)``.

    Each term's parity is collected on its highest qubit with a CX ladder and
    rotated there. Terms sharing a target are visited in Gray-code order of
    their remaining bits, so consecutive ladders differ only in the CX gates
    of the changed controls. An identity term becomes a global phase.
    """
    terms = list(terms)
    if width is None:
        if not terms:
            raise ValueError("width is required for an empty term list")
        width = terms[0][0].n
    circ = Circuit(width)
    groups: dict[int, list[tuple[int, float]]] = {}
    for label, theta in terms:
        if label.x:
            raise ValueError(f"label {label} is not diagonal")
        if label.n != width:
            raise ValueError(f"label {label} has width {label.n}, expected {width}")
        theta = complex(theta)
        if abs(theta.imag) > max(tol, 1e-12 * max(1.0, abs(theta.real))):
            raise ValueError(f"angle for {label} is not real: {theta}")
        theta = theta.real
        if abs(theta) <= tol:
            continue
        if label.z == 0:
            circ.global_phase -= theta
            continue
        target = label.z.bit_length() - 1
        groups.setdefault(target, []).append((label.z ^ (1 << target), theta))
    for target in sorted(groups):
        controls = 0
        for rest, theta in sorted(groups[target], key=lambda item: _gray_rank(item[0])):
            _toggle_ladder(circ, controls ^ rest, target)
            controls = rest
            circ.append("RZ", target, param=2.0 * theta)
        _toggle_ladder(circ, controls, target)
    return circ


def _toggle_ladder(circ: Circuit, mask: int, target: int) -> None:
    q = 0
    while mask:
        if mask & 1:
            circ.append("CX", q, target)
        mask >>= 1
        q += 1


# --- Trotter products -------------------------------------------------------

SUPPORTED_ORDERS = (1, 2, 4, 6)


@dataclass(frozen=True)
class TrotterPlan:
    order: int = 1
    repetitions: int = 1
    time: float = 1.0
    ordering: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.order not in SUPPORTED_ORDERS:
            raise ValueError(f"order must be one of {SUPPORTED_ORDERS}, got {self.order}")
        if int(self.repetitions) != self.repetitions or self.repetitions < 1:
            raise ValueError(f"repetitions must be a positive integer, got {self.repetitions}")

    def resolved_ordering(self, set_count: int) -> tuple[int, ...]:
        ordering = tuple(range(set_count)) if self.ordering is None else tuple(self.ordering)
        if sorted(ordering) != list(range(set_count)):
            raise ValueError(f"ordering {ordering} is not a permutation of {set_count} sets")
        return ordering


def suzuki_sequence(order: int, ordering: Sequence[int]) -> list[tuple[int, float]]:
    """Factors ``(set index, fraction of the step)`` of one product-formula step.

    Order 2 is the symmetric split; higher even orders use the standard
    five-fold recursion. Adjacent factors on the same set are merged.
    """
    ordering = list(ordering)

    def s2(c):
        half = [(k, c / 2) for k in ordering]
        return half + half[::-1]

    def build(p, c):
        if p == 2:
            return s2(c)
        u = 1.0 / (4.0 - 4.0 ** (1.0 / (p - 1)))
        inner = build(p - 2, u * c)
        return inner + inner + build(p - 2, (1 - 4 * u) * c) + inner + inner

    if order == 1:
        seq = [(k, 1.0) for k in ordering]
    elif order in (2, 4, 6):
        seq = build(order, 1.0)
    else:
        raise ValueError(f"unsupported order {order}")
    merged: list[tuple[int, float]] = []
    for k, c in seq:
        if merged and merged[-1][0] == k:
            merged[-1] = (k, merged[-1][1] + c)
        else:
            merged.append((k, c))
    return merged


def _clifford_into(circ: Circuit, clifford: CliffordCircuit, inverse: bool) -> None:
    gates = reversed(clifford.gates) if inverse else clifford.gates
    for g in gates:
        if inverse and g[0] == "S":
            # S^dagger = exp(-i pi/4) RZ(-pi/2)
            circ.append("RZ", g[1], param=-math.pi / 2)
            circ.global_phase -= math.pi / 4
        else:
            circ.append(g[0], *g[1:])


def set_exponential(dset: DiagonalizedSet, tau: float, prefactor: float, width: int) -> Circuit:
    """``exp(-i tau prefactor sum(w P))`` over one diagonalised set."""
    circ = Circuit(width)
    _clifford_into(circ, dset.clifford, inverse=False)
    angles = [(lab, tau * prefactor * w) for lab, w in dset.signed_terms()]
    circ.extend(synthesize_diagonal_exponent(angles, width))
    _clifford_into(circ, dset.clifford, inverse=True)
    return circ


def check_real_weights(decomp: Decomposition, rtol: float = 1e-12) -> None:
    weights = [t.weight for t in decomp.terms]
    if not weights:
        return
    scale = max(abs(w) for w in weights)
    bad = [(t.pauli, t.weight) for t in decomp.terms if abs(complex(t.weight).imag) > rtol * scale]
    if bad:
        shown = ", ".join(f"{p}: {w}" for p, w in bad[:5])
        raise ValueError(
            f"{len(bad)} terms have complex weights, so the operator is not Hermitian ({shown})")


def diagonalize_all(decomp: Decomposition) -> list[DiagonalizedSet]:
    return [diagonalize_set(s, width=decomp.n) for s in decomp.sets]


def trotter_circuit(decomp: Decomposition, diag: Sequence[DiagonalizedSet] | None, plan: TrotterPlan) -> RepeatedCircuit:
    """Product-formula circuit for ``exp(-i H t)``, one step repeated ``plan.repetitions`` times."""
    check_real_weights(decomp)
    if diag is None:
        diag = diagonalize_all(decomp)
    if len(diag) != len(decomp.sets):
        raise ValueError(f"{len(diag)} diagonalised sets for {len(decomp.sets)} sets")
    for d, s in zip(diag, decomp.sets):
        if d.source_set is not s and d.source_set != s:
            raise ValueError(f"diagonalised set does not match set {s.name}")
    ordering = plan.resolved_ordering(len(decomp.sets))
    ordering = tuple(k for k in ordering if len(decomp.sets[k]))
    dt = plan.time / plan.repetitions
    step = Circuit(decomp.n)
    for k, frac in suzuki_sequence(plan.order, ordering):
        step.extend(set_exponential(diag[k], frac * dt, decomp.prefactor, decomp.n), tag=decomp.sets[k].name)
    return RepeatedCircuit(step, int(plan.repetitions))


def trotter_bound_steps(set_count: int, norm_h: float, t: float, eps: float, order: int,
                        constant: float = 1.0) -> float:
    """Unrounded step count solving ``eps = C (2 M 5**(p//2 - 1) |H| t)**(p+1) / r**p``."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if min(set_count, norm_h, t, constant) <= 0:
        raise ValueError("set count, norm, time and constant must be positive")
    if order not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported order {order}")
    base = 2.0 * set_count * 5.0 ** (order // 2 - 1) * norm_h * t
    log_r = ((order + 1) * math.log(base) + math.log(constant) - math.log(eps)) / order
    return math.exp(log_r)


def estimate_trotter_steps(set_count: int, norm_h: float, t: float, eps: float, order: int,
                           constant: float = 1.0) -> int:
    return max(1, math.ceil(trotter_bound_steps(set_count, norm_h, t, eps, order, constant)))
