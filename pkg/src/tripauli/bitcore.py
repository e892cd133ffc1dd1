"""Bit-string arithmetic and the (x, z) labelling of Pauli strings.

Bit strings are stored as plain integers: position ``j`` (1-based, leftmost
when printed) is bit ``j - 1`` of the integer, so the leftmost printed bit is
the least significant one. With this layout the encoding of a non-negative
integer ``p`` *is* ``p`` itself, and Pauli label arithmetic reduces to
``&``, ``^`` and popcounts.

A label ``(x, z)`` denotes the Hermitian Pauli string ``i**(x.z) X**x Z**z``:
position ``j`` holds I, X, Z or Y for ``(x_j, z_j)`` equal to (0,0), (1,0),
(0,1) or (1,1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "BitString",
    "WalshLabel",
    "apply_x_mask",
    "bin_decode",
    "bin_encode",
    "commutes",
    "dot",
    "parity",
    "selector",
    "y_parity",
]

_CHAR_TO_XZ = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_XZ_TO_CHAR = {v: k for k, v in _CHAR_TO_XZ.items()}


def parity(v: int) -> int:
    """Parity of the number of set bits of ``v``."""
    return v.bit_count() & 1


def dot(x: int, y: int) -> int:
    """Integer inner product of two bit strings (not reduced mod 2)."""
    return (x & y).bit_count()


def _check_width(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"width must be a non-negative integer, got {n!r}")


@dataclass(frozen=True)
class BitString:
    """Fixed-width bit string, leftmost bit least significant."""

    value: int
    width: int

    def __post_init__(self):
        _check_width(self.width)
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_str(cls, bits: str) -> "BitString":
        if any(ch not in "01" for ch in bits):
            raise ValueError(f"not a bit string: {bits!r}")
        value = sum(1 << j for j, ch in enumerate(bits) if ch == "1")
        return cls(value, len(bits))

    def __str__(self) -> str:
        return "".join("1" if (self.value >> j) & 1 else "0" for j in range(self.width))

    def __int__(self) -> int:
        return self.value

    def __getitem__(self, j: int) -> int:
        """Bit at 0-based position ``j``."""
        if not 0 <= j < self.width:
            raise IndexError(j)
        return (self.value >> j) & 1

    def _same(self, other: "BitString") -> None:
        if not isinstance(other, BitString):
            raise TypeError(f"expected BitString, got {type(other).__name__}")
        if other.width != self.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")

    def __xor__(self, other: "BitString") -> "BitString":
        self._same(other)
        return BitString(self.value ^ other.value, self.width)

    def __invert__(self) -> "BitString":
        return BitString(self.value ^ ((1 << self.width) - 1), self.width)

    def __pow__(self, other: "BitString") -> "BitString":
        # per-bit x**y = x XOR (NOT y)
        self._same(other)
        return self ^ ~other

    def dot(self, other: "BitString") -> int:
        self._same(other)
        return dot(self.value, other.value)


def bin_encode(p: int, n: int) -> BitString:
    """Encode ``p`` as an ``n``-bit string with the leftmost bit least significant.

    >>> str(bin_encode(11, 4))
    '1101'
    """
    _check_width(n)
    if not 0 <= p < (1 << n):
        raise ValueError(f"{p} is out of range for {n} bits")
    return BitString(p, n)


def bin_decode(bits: BitString) -> int:
    return bits.value


def selector(m: int, n: int) -> BitString:
    """Bit string whose first ``m`` positions are one and the rest zero."""
    _check_width(n)
    if not 0 <= m <= n:
        raise ValueError(f"selector index {m} out of range 0..{n}")
    return BitString((1 << m) - 1, n)


@dataclass(frozen=True, order=True)
class WalshLabel:
    """Pauli string of ``n`` qubits given by its X-part and Z-part bit masks."""

    x: int
    z: int
    n: int

    def __post_init__(self):
        _check_width(self.n)
        limit = 1 << self.n
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"label ({self.x}, {self.z}) does not fit in {self.n} qubits")

    @classmethod
    def from_pauli(cls, text: str) -> "WalshLabel":
        """Parse ``"XYZI"``-style text, leftmost character on qubit 1."""
        x = z = 0
        for j, ch in enumerate(text.upper()):
            try:
                xb, zb = _CHAR_TO_XZ[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r} in {text!r}") from None
            x |= xb << j
            z |= zb << j
        return cls(x, z, len(text))

    @classmethod
    def from_bits(cls, x: BitString, z: BitString) -> "WalshLabel":
        if x.width != z.width:
            raise ValueError(f"width mismatch: {x.width} vs {z.width}")
        return cls(x.value, z.value, x.width)

    @property
    def pauli(self) -> str:
        return "".join(
            _XZ_TO_CHAR[((self.x >> j) & 1, (self.z >> j) & 1)] for j in range(self.n)
        )

    @property
    def y_count(self) -> int:
        return dot(self.x, self.z)

    @property
    def is_diagonal(self) -> bool:
        return self.x == 0

    def __str__(self) -> str:
        return self.pauli


LabelLike = Union[WalshLabel, str]


def _as_label(p: LabelLike) -> WalshLabel:
    return WalshLabel.from_pauli(p) if isinstance(p, str) else p


def commutes(p: LabelLike, q: LabelLike) -> bool:
    """True iff the two Pauli strings commute (symplectic form vanishes mod 2)."""
    p, q = _as_label(p), _as_label(q)
    if p.n != q.n:
        raise ValueError(f"width mismatch: {p.n} vs {q.n}")
    return parity((p.x & q.z) ^ (q.x & p.z)) == 0


def y_parity(p: LabelLike) -> int:
    p = _as_label(p)
    return parity(p.x & p.z)


def apply_x_mask(p: BitString | int, x: BitString | int) -> BitString | int:
    """Basis state reached by applying ``X**x`` to ``|p>``: simply ``p XOR x``.

    Integers in, integer out; bit strings must share a width.
    """
    if isinstance(p, BitString) or isinstance(x, BitString):
        if not (isinstance(p, BitString) and isinstance(x, BitString)):
            raise TypeError("mixing BitString and int arguments")
        return p ^ x
    return p ^ x
