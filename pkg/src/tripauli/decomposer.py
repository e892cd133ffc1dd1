"""Pauli decomposition of tridiagonal matrices into internally commuting sets.

A ``2**n x 2**n`` tridiagonal matrix ``B`` is written as

    B = 2**-n * sum_{x,z} beta[x, z] * W(x, z)

and only labels whose X-part is a prefix selector ``V_m = 2**m - 1`` can carry
weight. For a fixed ``m`` the labels split by Y-parity into two commuting sets.
Weights are evaluated from the three diagonals directly, never from the dense
matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from tripauli import kernels
from tripauli.bitcore import BitString, WalshLabel, dot, parity
from tripauli.errors import ValidationError

__all__ = [
    "CommutingSet",
    "Decomposition",
    "MatrixClass",
    "PauliTerm",
    "SetLayout",
    "TridiagonalSpec",
    "WaveSpeedWarning",
    "decompose",
    "diag_weights",
    "embed_hermitian",
    "generate_sets",
    "offdiag_weights",
    "wave_hamiltonian",
    "wave_matrix",
    "wave_weights",
]

_I_POWERS = (1, 1j, -1, -1j)
# relative pruning threshold for floating-point inputs
FLOAT_PRUNE_RTOL = 1e-14


class MatrixClass(str, Enum):
    GENERAL = "general"
    REAL = "real"
    SYMMETRIC = "real-symmetric"
    EMBEDDED = "hermitian-embedding"

    @classmethod
    def parse(cls, value: "str | MatrixClass") -> "MatrixClass":
        if isinstance(value, MatrixClass):
            return value
        aliases = {"general": cls.GENERAL, "general-complex": cls.GENERAL, "complex": cls.GENERAL,
                   "real": cls.REAL, "symmetric": cls.SYMMETRIC,
                   "real-symmetric": cls.SYMMETRIC, "hermitian-embedding": cls.EMBEDDED}
        try:
            return aliases[value.strip().lower()]
        except KeyError:
            raise ValidationError(f"unknown matrix class {value!r}") from None


def _frozen(values, n_expected: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != n_expected:
        raise ValidationError(f"{name} has {arr.shape[0]} entries, expected {n_expected}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TridiagonalSpec:
    """Diagonals of a tridiagonal matrix: ``c`` main, ``a`` super, ``b`` sub.

    ``a[k]`` sits at ``(k, k+1)`` and ``b[k]`` at ``(k+1, k)``, both 0-based.
    """

    n: int
    c: np.ndarray
    a: np.ndarray
    b: np.ndarray
    symmetry_class: MatrixClass = MatrixClass.GENERAL

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValidationError(f"n must be a positive integer, got {self.n!r}")
        size = 1 << self.n
        object.__setattr__(self, "c", _frozen(self.c, size, "c"))
        object.__setattr__(self, "a", _frozen(self.a, size - 1, "a"))
        object.__setattr__(self, "b", _frozen(self.b, size - 1, "b"))
        object.__setattr__(self, "symmetry_class", MatrixClass.parse(self.symmetry_class))
        if self.symmetry_class is MatrixClass.EMBEDDED:
            raise ValidationError("a tridiagonal matrix cannot carry the embedding class")
        self.validate()

    def validate(self) -> None:
        problems = []
        if self.symmetry_class in (MatrixClass.REAL, MatrixClass.SYMMETRIC):
            for name, arr in (("c", self.c), ("a", self.a), ("b", self.b)):
                bad = np.flatnonzero(arr.imag != 0)
                if bad.size:
                    problems.append(f"{name} has imaginary entries at {bad.tolist()}")
        if self.symmetry_class is MatrixClass.SYMMETRIC:
            bad = np.flatnonzero(self.a != self.b)
            if bad.size:
                problems.append(f"a != b at {bad.tolist()}")
        if problems:
            raise ValidationError(
                f"entries inconsistent with class {self.symmetry_class.value}: " + "; ".join(problems))

    @property
    def size(self) -> int:
        return 1 << self.n

    @classmethod
    def from_dense(cls, matrix, symmetry_class="general") -> "TridiagonalSpec":
        matrix = np.asarray(matrix)
        size = matrix.shape[0]
        n = size.bit_length() - 1
        if matrix.shape != (size, size) or size != 1 << n or n < 1:
            raise ValidationError(f"expected a 2**n square matrix, got shape {matrix.shape}")
        band = np.triu(np.tril(matrix, 1), -1)
        if np.any(band != matrix):
            raise ValidationError("matrix has entries outside the tridiagonal band")
        return cls(n, np.diag(matrix), np.diag(matrix, 1), np.diag(matrix, -1), symmetry_class)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.c) + np.diag(self.a, 1) + np.diag(self.b, -1)

    def infer_class(self) -> MatrixClass:
        if np.any(self.c.imag) or np.any(self.a.imag) or np.any(self.b.imag):
            return MatrixClass.GENERAL
        if np.array_equal(self.a, self.b):
            return MatrixClass.SYMMETRIC
        return MatrixClass.REAL

    def is_exact(self) -> bool:
        """All entries integer-valued, so weight sums are exact in double precision."""
        parts = np.concatenate([arr.view(np.float64) for arr in (self.c, self.a, self.b)])
        return bool(np.all(np.isfinite(parts)) and np.all(parts == np.round(parts))
                    and np.max(np.abs(parts), initial=0) < 2.0 ** 40)

    def prune_tolerance(self) -> float:
        if self.is_exact():
            return 0.0
        scale = max(np.max(np.abs(arr), initial=0.0) for arr in (self.c, self.a, self.b))
        return FLOAT_PRUNE_RTOL * float(scale)


@dataclass(frozen=True)
class PauliTerm:
    label: WalshLabel
    weight: complex

    @property
    def pauli(self) -> str:
        return self.label.pauli


@dataclass(frozen=True)
class SetLayout:
    """Label structure of one commuting set before weights are attached."""

    m: int
    parity: str
    x_selector: int
    labels: tuple[WalshLabel, ...]

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class CommutingSet:
    m: int
    parity: str  # "even", "odd" or "mixed"
    x_selector: int
    terms: tuple[PauliTerm, ...]

    @property
    def labels(self) -> tuple[WalshLabel, ...]:
        return tuple(t.label for t in self.terms)

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.terms], dtype=np.complex128)

    def __len__(self):
        return len(self.terms)

    @property
    def name(self) -> str:
        if self.parity == "mixed":
            return f"S{self.m}"
        sign = {"even": "+", "odd": "-"}[self.parity]
        return f"S{self.m}{sign}"


@dataclass(frozen=True)
class Decomposition:
    """``prefactor * sum(weight * W(label))`` over all terms of all sets."""

    n: int
    matrix_class: MatrixClass
    sets: tuple[CommutingSet, ...]
    prefactor: float
    source_n: int | None = None
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def terms(self) -> list[PauliTerm]:
        return [t for s in self.sets for t in s.terms]

    @property
    def term_count(self) -> int:
        return sum(len(s) for s in self.sets)

    def nonempty_sets(self) -> tuple[CommutingSet, ...]:
        return tuple(s for s in self.sets if len(s))

    def weight_map(self) -> dict[tuple[int, int], complex]:
        return {(t.label.x, t.label.z): t.weight for t in self.terms}

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "matrix_class": self.matrix_class.value,
            "prefactor": self.prefactor,
            "term_count": self.term_count,
            "set_count": len(self.sets),
            "sets": [
                {
                    "name": s.name,
                    "m": s.m,
                    "parity": s.parity,
                    "x_selector": str(BitString(s.x_selector, self.n)),
                    "terms": [{"pauli": t.pauli, "weight": [float(np.real(t.weight)), float(np.imag(t.weight))]}
                              for t in s.terms],
                }
                for s in self.sets
            ],
        }


def generate_sets(n: int, matrix_class="general") -> list[SetLayout]:
    """Candidate commuting sets for an ``n``-qubit tridiagonal matrix.

    General and real matrices give ``2n + 1`` sets (``S0`` then ``Sm+``,
    ``Sm-`` for ``m = 1..n``); real-symmetric ones only ``S0`` and the ``Sm+``.
    Labels inside a set are ordered by ascending ``z``.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    matrix_class = MatrixClass.parse(matrix_class)
    if matrix_class is MatrixClass.EMBEDDED:
        return _embedded_layouts(n)
    size = 1 << n
    layouts = [SetLayout(0, "mixed", 0, tuple(WalshLabel(0, z, n) for z in range(size)))]
    parities = ("even",) if matrix_class is MatrixClass.SYMMETRIC else ("even", "odd")
    for m in range(1, n + 1):
        x = (1 << m) - 1
        for par in parities:
            want = 0 if par == "even" else 1
            labels = tuple(WalshLabel(x, z, n) for z in range(size) if parity(x & z) == want)
            layouts.append(SetLayout(m, par, x, labels))
    return layouts


def _embedded_layouts(n: int) -> list[SetLayout]:
    """Sets of the block embedding on ``n + 1`` qubits; the block qubit is the last one."""
    lead = 1 << n
    size = 1 << n
    layouts = []
    for m in range(0, n + 1):
        x = (1 << m) - 1
        labels = tuple(WalshLabel(x | lead, z | (lead if parity(x & z) else 0), n + 1)
                       for z in range(size))
        layouts.append(SetLayout(m, "even", x | lead, labels))
    return layouts


def diag_weights(c, n: int) -> np.ndarray:
    """Weights of the Z-only labels: ``out[z] = sum_p (-1)**(z.p) * c[p]``."""
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    if c.shape[0] != 1 << n:
        raise ValueError(f"diagonal has {c.shape[0]} entries, expected {1 << n}")
    return kernels.walsh_transform(c)


def offdiag_weights(a, b, m: int, n: int) -> np.ndarray:
    """Weights of the labels ``(V_m, z)`` indexed by ``z``, from super/sub diagonals."""
    if not 1 <= m <= n:
        raise ValueError(f"set index m={m} out of range 1..{n}")
    a = np.asarray(a, dtype=np.complex128).reshape(-1)
    b = np.asarray(b, dtype=np.complex128).reshape(-1)
    if a.shape[0] != (1 << n) - 1 or b.shape[0] != (1 << n) - 1:
        raise ValueError(f"off-diagonals must have {(1 << n) - 1} entries")
    return kernels.offdiag_weights(a, b, m, n)


def _prune(values: Iterable[complex], tol: float) -> list[bool]:
    return [abs(v) > tol for v in values]


def decompose(spec: TridiagonalSpec, tol: float | None = None) -> Decomposition:
    """Closed-form decomposition of ``spec`` with zero weights pruned."""
    spec.validate()
    n = spec.n
    tol = spec.prune_tolerance() if tol is None else tol
    weights = {0: diag_weights(spec.c, n)}
    for m in range(1, n + 1):
        weights[(1 << m) - 1] = offdiag_weights(spec.a, spec.b, m, n)
    sets = []
    for layout in generate_sets(n, spec.symmetry_class):
        row = weights[layout.x_selector]
        terms = tuple(PauliTerm(lab, complex(row[lab.z])) for lab in layout.labels
                      if abs(row[lab.z]) > tol)
        sets.append(CommutingSet(layout.m, layout.parity, layout.x_selector, terms))
    return Decomposition(n, spec.symmetry_class, tuple(sets), 1.0 / (1 << n))


def embed_hermitian(decomp: Decomposition) -> Decomposition:
    """Decomposition of ``[[0, B], [B^T, 0]]`` from that of a real ``B``.

    The block-selecting factor is the most significant qubit (position
    ``n + 1``), so the dense rendering has ``B`` in the upper-right block.
    Even-parity terms get a leading X with weight ``Re(beta)``; odd-parity
    terms a leading Y with weight ``-Im(beta)``.
    """
    if decomp.matrix_class not in (MatrixClass.REAL, MatrixClass.SYMMETRIC):
        raise ValidationError(
            f"embedding needs a real matrix decomposition, got {decomp.matrix_class.value}")
    n = decomp.n
    lead = 1 << n
    by_m: dict[int, list[tuple[int, PauliTerm]]] = {m: [] for m in range(n + 1)}
    for s in decomp.sets:
        for t in s.terms:
            x, z = t.label.x, t.label.z
            w = complex(t.weight)
            if parity(x & z):
                new = PauliTerm(WalshLabel(x | lead, z | lead, n + 1), -w.imag)
            else:
                new = PauliTerm(WalshLabel(x | lead, z, n + 1), w.real)
            by_m[s.m].append((z, new))
    sets = tuple(
        CommutingSet(m, "even", ((1 << m) - 1) | lead, tuple(t for _, t in sorted(by_m[m], key=lambda p: p[0])))
        for m in range(n + 1)
    )
    return Decomposition(n + 1, MatrixClass.EMBEDDED, sets, decomp.prefactor, source_n=n)


class WaveSpeedWarning(UserWarning):
    pass


def wave_matrix(speeds: Sequence[float], n: int) -> TridiagonalSpec:
    """Upper-bidiagonal wave operator with explicit Dirichlet rows (unscaled by ``1/h``).

    Row ``k`` for ``1 <= k <= N-2`` holds ``-c[k]`` on the diagonal and
    ``c[k+1]`` to its right (0-based speeds); the first and last rows are zero.
    """
    speeds = np.asarray(speeds, dtype=np.float64).reshape(-1)
    size = 1 << n
    if speeds.shape[0] != size:
        raise ValueError(f"need {size} speed samples for n={n}, got {speeds.shape[0]}")
    bad = np.flatnonzero(speeds <= 0)
    if bad.size:
        warnings.warn(f"non-positive wave speeds at indices {bad.tolist()}", WaveSpeedWarning, stacklevel=2)
    c = np.zeros(size)
    a = np.zeros(size - 1)
    c[1:size - 1] = -speeds[1:size - 1]
    a[1:size - 1] = speeds[2:size]
    return TridiagonalSpec(n, c, a, np.zeros(size - 1), MatrixClass.REAL)


def wave_weights(speeds: Sequence[float], n: int) -> dict[int, np.ndarray]:
    """Weights of the unscaled wave ``B`` summed directly over the grid rows.

    Returns a map from X-selector to the weight array over ``z``. This path
    works on the speed samples themselves and is kept separate from
    :func:`decompose` so the two can be compared.
    """
    speeds = np.asarray(speeds, dtype=np.float64).reshape(-1)
    size = 1 << n
    k = np.arange(1, size - 1, dtype=np.uint64)
    z = np.arange(size, dtype=np.uint64)
    signs = 1 - 2 * (np.bitwise_count(z[:, None] & k[None, :]) & 1).astype(np.int64)
    out = {0: -(signs @ speeds[1:size - 1]).astype(np.complex128)}
    for m in range(1, n + 1):
        x = np.uint64((1 << m) - 1)
        hit = (k + np.uint64(1)) == (k ^ x)
        xz = np.bitwise_count(z & x).astype(np.int64)
        phase = np.array(_I_POWERS, dtype=np.complex128)[xz & 3]
        out[int(x)] = phase * (signs @ np.where(hit, speeds[2:size], 0.0))
    return out


WAVE_CROSSCHECK_MAX_N = 10


def wave_hamiltonian(speeds: Sequence[float], n: int, h: float) -> tuple[TridiagonalSpec, Decomposition]:
    """Wave operator ``B / h`` and the decomposition of ``H = [[0, B], [B^T, 0]] / h``.

    The generic weights are checked against :func:`wave_weights` for
    ``n <= WAVE_CROSSCHECK_MAX_N``.
    """
    if not h > 0:
        raise ValueError(f"grid step must be positive, got {h}")
    raw = wave_matrix(speeds, n)
    base = decompose(raw)
    if n <= WAVE_CROSSCHECK_MAX_N:
        direct = wave_weights(speeds, n)
        generic = {0: diag_weights(raw.c, n)}
        for m in range(1, n + 1):
            generic[(1 << m) - 1] = offdiag_weights(raw.a, raw.b, m, n)
        scale = max(1.0, float(np.max(np.abs(speeds))))
        worst = max(float(np.max(np.abs(direct[x] - generic[x]))) for x in direct)
        if worst > 1e-12 * scale * (1 << n):
            raise AssertionError(f"wave weight paths disagree by {worst}")
    scaled = TridiagonalSpec(n, raw.c / h, raw.a / h, raw.b / h, MatrixClass.REAL)
    inv_h = 1.0 / h
    sets = tuple(
        CommutingSet(s.m, s.parity, s.x_selector, tuple(PauliTerm(t.label, t.weight * inv_h) for t in s.terms))
        for s in base.sets
    )
    ham = embed_hermitian(Decomposition(n, MatrixClass.REAL, sets, base.prefactor))
    return scaled, ham


# Upper l-diagonal generalisation (internal). For l = 0 and l = 1 this
# reproduces the selectors and weights used above.

def _band_selectors(l: int, n: int) -> list[int]:
    """X-parts ``x`` with some row ``p`` satisfying ``p + l == p ^ x``."""
    size = 1 << n
    if not 0 <= l < size:
        raise ValueError(f"band offset {l} out of range for n={n}")
    return sorted({p ^ (p + l) for p in range(size - l)})


def _band_weights(values, l: int, n: int) -> dict[int, np.ndarray]:
    """Weights of an upper ``l``-diagonal matrix with ``values[p]`` at ``(p, p + l)``."""
    size = 1 << n
    values = np.asarray(values, dtype=np.complex128).reshape(-1)
    if values.shape[0] != size - l:
        raise ValueError(f"need {size - l} band values, got {values.shape[0]}")
    out = {}
    for x in _band_selectors(l, n):
        row = np.zeros(size, dtype=np.complex128)
        for z in range(size):
            acc = 0j
            for p in range(size - l):
                if p + l == p ^ x:
                    acc += (-1) ** dot(z, p) * values[p]
            row[z] = _I_POWERS[dot(x, z) & 3] * acc
        out[x] = row
    return out
