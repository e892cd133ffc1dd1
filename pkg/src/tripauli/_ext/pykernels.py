"""Numpy implementations of the hot kernels, used when the compiled module is absent."""

import numpy as np

GATE_H, GATE_S, GATE_CX, GATE_CZ, GATE_X = range(5)

_I_POWERS = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def walsh_transform(values):
    out = np.array(values, dtype=np.complex128)
    size = out.shape[0]
    if size & (size - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < size:
        v = out.reshape(-1, 2, h)
        u, w = v[:, 0, :].copy(), v[:, 1, :].copy()
        v[:, 0, :] = u + w
        v[:, 1, :] = u - w
        h *= 2
    return out


def offdiag_weights(a, b, m, n):
    # contributing rows are p = q * 2**m + off, so the sum over p is a
    # length 2**(n-m) transform in q evaluated at z >> m
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    x = np.uint64((1 << m) - 1)
    off = np.uint64((1 << (m - 1)) - 1)
    rows = (np.arange(1 << (n - m), dtype=np.uint64) << np.uint64(m)) + off
    w_sum = walsh_transform(a[rows] + b[rows])
    w_diff = walsh_transform(a[rows] - b[rows])
    z = np.arange(1 << n, dtype=np.uint64)
    hi = (z >> np.uint64(m)).astype(np.intp)
    xz = np.bitwise_count(z & x).astype(np.int64)
    sign = 1 - 2 * (np.bitwise_count(z & off) & 1).astype(np.int64)
    return _I_POWERS[xz & 3] * sign * np.where(xz & 1, w_diff[hi], w_sum[hi])


def propagate(xs, zs, signs, gates):
    gates = np.asarray(gates, dtype=np.int32).reshape(-1, 3)
    x = xs.copy()
    z = zs.copy()
    r = signs.astype(np.uint64)
    one = np.uint64(1)

    def bits(q):
        s = np.uint64(q)
        return (x >> s) & one, (z >> s) & one

    def hadamard(q):
        nonlocal x, z, r
        xa, za = bits(q)
        r ^= xa & za
        flip = (xa ^ za) << np.uint64(q)
        x ^= flip
        z ^= flip

    for code, qa, qb in gates:
        if code == GATE_H:
            hadamard(qa)
        elif code == GATE_S:
            xa, za = bits(qa)
            r ^= xa & za
            z ^= xa << np.uint64(qa)
        elif code == GATE_X:
            _, za = bits(qa)
            r ^= za
        else:
            if code == GATE_CZ:
                hadamard(qb)
            xa, za = bits(qa)
            xb, zb = bits(qb)
            r ^= xa & zb & (xb ^ za ^ one)
            x ^= xa << np.uint64(qb)
            z ^= zb << np.uint64(qa)
            if code == GATE_CZ:
                hadamard(qb)
    xs[:] = x
    zs[:] = z
    signs[:] = r.astype(np.int8)
