"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``TRIPAULI_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

import numpy as np

from tripauli._ext import pykernels

GATE_CODES = {"H": pykernels.GATE_H, "S": pykernels.GATE_S, "CX": pykernels.GATE_CX,
              "CZ": pykernels.GATE_CZ, "X": pykernels.GATE_X}

if os.environ.get("TRIPAULI_PURE_PYTHON", "") not in ("", "0"):
    _impl = pykernels
else:
    try:
        from tripauli._ext import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = pykernels

BACKEND = "cython" if _impl is not pykernels else "python"

walsh_transform = _impl.walsh_transform
offdiag_weights = _impl.offdiag_weights


def propagate_labels(xs, zs, signs, gates, impl=None):
    """Push labels through ``gates`` (sequence of ``(name, q0, q1)``); returns new arrays."""
    impl = impl or _impl
    xs = np.array(xs, dtype=np.uint64)
    zs = np.array(zs, dtype=np.uint64)
    signs = np.array(signs, dtype=np.int8)
    table = np.array([(GATE_CODES[g[0]], g[1], g[2] if len(g) > 2 else 0) for g in gates],
                     dtype=np.int32).reshape(-1, 3)
    impl.propagate(xs, zs, signs, table)
    return xs, zs, signs
