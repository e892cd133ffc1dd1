# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Signatures mirror :mod:`tripauli._ext.pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int8_t, int32_t

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

DEF GATE_H = 0
DEF GATE_S = 1
DEF GATE_CX = 2
DEF GATE_CZ = 3
DEF GATE_X = 4


cdef inline int _par(uint64_t v) noexcept nogil:
    return __builtin_popcountll(v) & 1


cdef void _fwht(double complex[:] v) noexcept nogil:
    cdef Py_ssize_t size = v.shape[0], h = 1, i, j
    cdef double complex u, w
    while h < size:
        i = 0
        while i < size:
            for j in range(i, i + h):
                u = v[j]
                w = v[j + h]
                v[j] = u + w
                v[j + h] = u - w
            i += 2 * h
        h *= 2


def walsh_transform(values):
    """Unnormalised Walsh-Hadamard transform, ``out[z] = sum_p (-1)**(z.p) v[p]``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.array(values, dtype=np.complex128)
    cdef Py_ssize_t size = out.shape[0]
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    cdef double complex[:] v = out
    with nogil:
        _fwht(v)
    return out


def offdiag_weights(a, b, int m, int n):
    """Weights of the labels ``(V_m, z)`` for all ``z`` of a 1-band pair (a, b).

    Only rows ``p = q * 2**m + 2**(m-1) - 1`` contribute, so the row sum is a
    length ``2**(n-m)`` transform over ``q`` read at ``z >> m``.
    """
    cdef const double complex[:] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef const double complex[:] bv = np.ascontiguousarray(b, dtype=np.complex128)
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t blocks = (<Py_ssize_t>1) << (n - m)
    cdef uint64_t x = ((<uint64_t>1) << m) - 1
    cdef uint64_t off = ((<uint64_t>1) << (m - 1)) - 1
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(size, dtype=np.complex128)
    cdef double complex[:] o = out
    cdef double complex[:] ws = np.empty(blocks, dtype=np.complex128)
    cdef double complex[:] wd = np.empty(blocks, dtype=np.complex128)
    cdef Py_ssize_t z, q
    cdef uint64_t p
    cdef double complex acc
    cdef int xz
    with nogil:
        for q in range(blocks):
            p = (<uint64_t>q << m) + off
            ws[q] = av[p] + bv[p]
            wd[q] = av[p] - bv[p]
        _fwht(ws)
        _fwht(wd)
        for z in range(size):
            xz = __builtin_popcountll(<uint64_t>z & x)
            acc = wd[z >> m] if xz & 1 else ws[z >> m]
            if _par(<uint64_t>z & off):
                acc = -acc
            xz = xz & 3
            if xz == 0:
                o[z] = acc
            elif xz == 1:
                o[z] = -acc.imag + 1j * acc.real
            elif xz == 2:
                o[z] = -acc
            else:
                o[z] = acc.imag - 1j * acc.real
    return out


def propagate(xs, zs, signs, gates):
    """Conjugate each label (x, z, sign) through a Clifford gate list in place.

    ``gates`` is an ``(k, 3)`` int array of ``(code, q0, q1)`` rows.
    """
    cdef uint64_t[:] xv = xs
    cdef uint64_t[:] zv = zs
    cdef int8_t[:] sv = signs
    cdef const int32_t[:, :] gv = np.ascontiguousarray(gates, dtype=np.int32).reshape(-1, 3)
    cdef Py_ssize_t count = xv.shape[0], ngates = gv.shape[0], i, g
    cdef int code
    cdef uint64_t x, z, xa, za, xb, zb, ma, mb, tmp
    cdef int8_t r
    with nogil:
        for i in range(count):
            x = xv[i]
            z = zv[i]
            r = sv[i]
            for g in range(ngates):
                code = gv[g, 0]
                ma = (<uint64_t>1) << gv[g, 1]
                if code == GATE_H:
                    xa = (x & ma) != 0
                    za = (z & ma) != 0
                    r ^= <int8_t>(xa & za)
                    if xa != za:
                        x ^= ma
                        z ^= ma
                elif code == GATE_S:
                    xa = (x & ma) != 0
                    za = (z & ma) != 0
                    r ^= <int8_t>(xa & za)
                    if xa:
                        z ^= ma
                elif code == GATE_X:
                    r ^= <int8_t>((z & ma) != 0)
                else:
                    mb = (<uint64_t>1) << gv[g, 2]
                    if code == GATE_CZ:
                        # H(b) CX(a, b) H(b)
                        xb = (x & mb) != 0
                        zb = (z & mb) != 0
                        r ^= <int8_t>(xb & zb)
                        if xb != zb:
                            x ^= mb
                            z ^= mb
                    xa = (x & ma) != 0
                    za = (z & ma) != 0
                    xb = (x & mb) != 0
                    zb = (z & mb) != 0
                    r ^= <int8_t>(xa & zb & (xb ^ za ^ 1))
                    if xa:
                        x ^= mb
                    if zb:
                        z ^= ma
                    if code == GATE_CZ:
                        xb = (x & mb) != 0
                        zb = (z & mb) != 0
                        r ^= <int8_t>(xb & zb)
                        if xb != zb:
                            x ^= mb
                            z ^= mb
            xv[i] = x
            zv[i] = z
            sv[i] = r
