"""Compare the compiled kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py [--max-n 14] [--repeat 5]``.
Prints one row per (kernel, n) with the best-of-repeat time of each backend.
"""

import argparse
import timeit

import numpy as np

from tripauli import kernels
from tripauli._ext import pykernels
from tripauli.decomposer import generate_sets
from tripauli.diagonalizer import synthesize_diagonalizer

try:
    from tripauli._ext import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def cases(max_n, rng):
    for n in range(4, max_n + 1, 2):
        size = 1 << n
        c = rng.normal(size=size) + 1j * rng.normal(size=size)
        a = rng.normal(size=size - 1) + 0j
        b = rng.normal(size=size - 1) + 0j
        yield "walsh", n, lambda impl, c=c: impl.walsh_transform(c)
        yield "offdiag (all m)", n, lambda impl, a=a, b=b, n=n: [impl.offdiag_weights(a, b, m, n)
                                                                  for m in range(1, n + 1)]
        layout = generate_sets(n)[-1]
        gates = synthesize_diagonalizer(layout.labels, n).gates
        xs = [lab.x for lab in layout.labels]
        zs = [lab.z for lab in layout.labels]
        yield "propagate", n, lambda impl, xs=xs, zs=zs, g=gates: kernels.propagate_labels(
            xs, zs, np.zeros(len(xs)), g, impl=impl)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=14)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'kernel':<18}{'n':>3}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for name, n, fn in cases(args.max_n, np.random.default_rng(0)):
        py = _best(lambda: fn(pykernels), args.repeat) * 1e3
        if _ckernels is None:
            print(f"{name:<18}{n:>3}{py:>14.3f}{'-':>14}{'-':>10}")
            continue
        cy = _best(lambda: fn(_ckernels), args.repeat) * 1e3
        print(f"{name:<18}{n:>3}{py:>14.3f}{cy:>14.3f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
