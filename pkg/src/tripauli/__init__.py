"""Pauli decompositions of tridiagonal matrices and Trotterised circuits built from them."""

__version__ = "0.1.0"

from tripauli.bitcore import BitString, WalshLabel, commutes
from tripauli.decomposer import (Decomposition, MatrixClass, TridiagonalSpec, decompose,
                                 embed_hermitian, generate_sets, wave_hamiltonian)
from tripauli.diagonalizer import diagonalize_set
from tripauli.circuit import TrotterPlan, count_gates, estimate_trotter_steps, trotter_circuit
from tripauli.kernels import BACKEND

__all__ = [
    "BACKEND",
    "BitString",
    "Decomposition",
    "MatrixClass",
    "TridiagonalSpec",
    "TrotterPlan",
    "WalshLabel",
    "commutes",
    "count_gates",
    "decompose",
    "diagonalize_set",
    "embed_hermitian",
    "estimate_trotter_steps",
    "generate_sets",
    "trotter_circuit",
    "wave_hamiltonian",
]
