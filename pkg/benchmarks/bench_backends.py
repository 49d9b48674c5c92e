"""Benchmark the jitted eigenvalue kernels against the pure numpy fallback.

The hot path of the package is the Hessenberg reduction plus shifted-QR
eigenvalue iteration, called thousands of times by the coordinate round
trips.  This script times one full eigensolve per backend and a complete
extract/reconstruct round trip under the active backend.

Usage:
    python3 benchmarks/bench_backends.py [--sizes 4,8,12] [--repeats 200]

Set RITZFIBER_BACKEND=numpy to force the fallback for the whole process.
"""

import argparse
import time

import numpy as np

from ritzfiber import _kernels, extract_coords, genericity_report, reconstruct, ritz_values


def _timeit(func, args_list, repeats):
    func(*args_list[0])  # warm up (triggers jit compilation)
    t0 = time.perf_counter()
    for i in range(repeats):
        func(*args_list[i % len(args_list)])
    return (time.perf_counter() - t0) / repeats


def eigensolve_variants():
    """(label, callable) pairs for the available kernel paths."""
    def jitted(a):
        h = _kernels.hessenberg_reduce(a)
        return _kernels.hessenberg_eigvalues(h, 1e-14, 60)

    variants = [(_kernels.backend_name(), jitted)]
    if _kernels.backend_name() == "numba":
        def fallback(a):
            h = _kernels.hessenberg_reduce.py_func(a)
            return _kernels.hessenberg_eigvalues.py_func(h, 1e-14, 60)

        variants.append(("numpy", fallback))
    return variants


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8,12")
    ap.add_argument("--repeats", type=int, default=200)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(0)
    print(f"active backend: {_kernels.backend_name()}")
    print(f"{'n':>4}  " + "".join(f"{label:>14}" for label, _ in eigensolve_variants())
          + f"{'speedup':>10}")
    for n in sizes:
        mats = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                for _ in range(32)]
        times = []
        for _, func in eigensolve_variants():
            times.append(_timeit(func, [(m,) for m in mats], args.repeats))
        speedup = times[-1] / times[0] if len(times) > 1 else float("nan")
        print(f"{n:>4}  " + "".join(f"{t * 1e6:>12.1f}us" for t in times)
              + f"{speedup:>9.1f}x")

    # end-to-end round trip under the active backend
    n = 8
    xs = []
    while len(xs) < 8:
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if genericity_report(ritz_values(x)).generic:
            xs.append(x)
    per = _timeit(lambda x: reconstruct(extract_coords(x).coords), [(x,) for x in xs],
                  max(16, args.repeats // 8))
    print(f"\nextract+reconstruct round trip, n={n}: {per * 1e3:.2f} ms "
          f"({_kernels.backend_name()} backend)")


if __name__ == "__main__":
    main()
