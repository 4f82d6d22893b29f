"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel and size with the best-of-repeat wall time of
each backend and the speedup.  Both backends must return identical results.
"""
import argparse
import time

import numpy as np

from genericlab import _pykernels

try:
    from genericlab import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases(rng):
    for n in (10_000, 1_000_000):
        p = rng.permutation(n)
        yield "cycle_labels", n, (lambda m: (lambda: m.cycle_labels(p)))
    for n in (12, 16):
        p = rng.permutation(n).tolist()
        w = [1] * n
        yield "max_sym_diff", n, (lambda m, p=p, w=w: (lambda: m.max_sym_diff(p, w)))
        for h in (3,):
            yield f"max_tower[n={h}]", n, (lambda m, p=p, w=w, h=h: (lambda: m.max_tower(p, h, w)))


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not available; only the fallback can run")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<16}{'size':>10}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for name, size, make in cases(rng):
        tp, outp = best_of(make(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:<16}{size:>10}{tp:>12.5f}{'-':>12}{'-':>10}")
            continue
        tc, outc = best_of(make(_ckernels), args.repeat)
        if not np.array_equal(np.asarray(outp), np.asarray(outc)):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<16}{size:>10}{tp:>12.5f}{tc:>12.5f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
