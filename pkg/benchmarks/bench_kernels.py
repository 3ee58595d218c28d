"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--size N] [--repeat R]

Each case runs on both backends with identical inputs; the outputs are
checked for agreement before timings are reported.
"""

import argparse
import timeit

import numpy as np

from gll import _pykernels
from gll._quad import quad

try:
    from gll import _kernels
except ImportError:
    _kernels = None

THETA, LAM, P = 1.7, 0.6, 2.4
IG = (2, 2.5, 0.5)


def cases(size):
    x = np.linspace(1e-6, 1 - 1e-6, size)
    return {
        "cdf_array (non-integer p)": lambda k: k.cdf_array(x, THETA, LAM, P),
        "cdf_array (integer p)": lambda k: k.cdf_array(x, THETA, LAM, 2.0),
        "sf_array": lambda k: k.sf_array(x, THETA, LAM, P),
        "sample_gll": lambda k: k.sample_gll(np.random.PCG64(7), size, THETA, LAM, P),
        "gamma_variates (shape 1.5)": lambda k: k.gamma_variates(np.random.PCG64(7), size, 1.5, 1.0),
        "distorted premium (IG risk)": lambda k: np.array([quad(
            k.distorted_integrand, 0.0, 1.0, epsabs=1e-10, epsrel=1e-10, limit=2000,
            points=(0.5, 0.9, 0.99), args=IG + (0.3, 1.5, 1.0))]),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _kernels is None:
        print("compiled extension not built; timing the Python backend only")
    print(f"{'case':32s} {'python (s)':>12s} {'cython (s)':>12s} {'speed-up':>9s}  agree")
    for name, fn in cases(args.size).items():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:32s} {t_py:12.4f}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        a, b = fn(_pykernels), fn(_kernels)
        agree = np.allclose(a, b, rtol=1e-13, atol=1e-15)
        print(f"{name:32s} {t_py:12.4f} {t_cy:12.4f} {t_py / t_cy:8.1f}x  {agree}")


if __name__ == "__main__":
    main()
