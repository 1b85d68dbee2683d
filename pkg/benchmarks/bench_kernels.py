"""Compiled vs pure-Python exterior-algebra kernels.

    python3 benchmarks/bench_kernels.py [--dims 4 6 8] [--repeat 5]

Prints the best time per call for each kernel, backend and dimension, and the
speedup of the compiled backend.
"""

import argparse
import timeit

import numpy as np

from genk import _kernels_py

try:
    from genk import _kernels
except ImportError:
    _kernels = None


def cases(m, rng):
    n = 1 << m
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = rng.standard_normal(m)
    return {
        "wedge": lambda mod: mod.wedge(a, b, m),
        "contract": lambda mod: mod.contract(x, a, m),
        "wedge_matrix": lambda mod: mod.wedge_matrix(a, m),
    }


def best(fn, repeat):
    t = timeit.Timer(fn)
    number, _ = t.autorange()
    return min(t.repeat(repeat, number)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the Python backend is timed")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<13}{'m':>3}{'python [us]':>14}{'compiled [us]':>16}{'speedup':>10}")
    for m in args.dims:
        for name, call in cases(m, rng).items():
            t_py = best(lambda: call(_kernels_py), args.repeat)
            if _kernels is None:
                print(f"{name:<13}{m:>3}{t_py * 1e6:>14.1f}{'-':>16}{'-':>10}")
                continue
            assert np.allclose(call(_kernels), call(_kernels_py))
            t_c = best(lambda: call(_kernels), args.repeat)
            print(f"{name:<13}{m:>3}{t_py * 1e6:>14.1f}{t_c * 1e6:>16.1f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
