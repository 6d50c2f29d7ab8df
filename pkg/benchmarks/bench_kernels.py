"""Compare the compiled kernels with the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--sizes 10000 100000 1000000] [--repeat 3]

Prints the best wall time of each kernel per input size and the speed-up of
the compiled backend. Results of both backends are checked for equality.
"""
import argparse
import timeit

import numpy as np

from zipfcode import _pykernels

try:
    from zipfcode import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_time(func, repeat):
    return min(timeit.repeat(func, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10_000, 100_000, 1_000_000])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if _ckernels is None:
        print("compiled extension not available; timing the Python backend only")
    rng = np.random.default_rng(args.seed)
    header = f"{'kernel':<22}{'n':>10}{'python [s]':>14}{'cython [s]':>14}{'speed-up':>10}"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        # a Zipf-like frequency vector against integer lengths, with many ties
        x = np.floor(1e6 / np.arange(1, n + 1))
        y = rng.integers(1, 15, n).astype(np.float64)
        ranks = np.arange(1, n + 1, dtype=np.int64)
        cases = [
            ("kendall_counts", lambda m: m.kendall_counts(x, y)),
            ("nonsingular_lengths", lambda m: m.nonsingular_lengths(ranks, 26)),
        ]
        for name, call in cases:
            t_py = best_time(lambda: call(_pykernels), args.repeat)
            if _ckernels is None:
                print(f"{name:<22}{n:>10}{t_py:>14.4f}{'-':>14}{'-':>10}")
                continue
            t_c = best_time(lambda: call(_ckernels), args.repeat)
            a, b = call(_pykernels), call(_ckernels)
            same = np.array_equal(a, b) if isinstance(a, np.ndarray) else tuple(a) == tuple(b)
            if not same:
                raise SystemExit(f"backends disagree on {name} at n={n}")
            print(f"{name:<22}{n:>10}{t_py:>14.4f}{t_c:>14.4f}{t_py / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
