"""Compare the compiled and pure-Python row-reduction backends.

Builds the same truncations with each backend, using the frames engine
(the one that spends its time in row reduction), checks that the dimension
tables agree and prints wall-clock times.

    python3 benchmarks/bench_reduce.py [--repeat 3] [--quick]
"""
import argparse
import time

from quiveralg import kernel
from quiveralg.preproj import build_truncation
from quiveralg.quiver import double, dynkin_catalog

CASES = [("A~1", 14), ("A~2", 12), ("A~3", 10), ("D~4", 10), ("E~6", 10)]
QUICK = [("A~1", 10), ("D~4", 8)]


def best_time(label, N, backend, repeat):
    dq = double(dynkin_catalog(label).quiver)
    best, tq = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        tq = build_truncation(dq, None, N, engine="frames", backend=backend)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, tq


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args(argv)
    try:
        kernel.module("cython")
    except ImportError:
        print("compiled extension not built; only the Python backend is available")
        return 1
    print(f"{'case':<10}{'N':>4}{'cython s':>12}{'python s':>12}{'speedup':>10}")
    for label, N in (QUICK if args.quick else CASES):
        tc, a = best_time(label, N, "cython", args.repeat)
        tp, b = best_time(label, N, "python", args.repeat)
        if not a.same_tables(b):
            raise SystemExit(f"backends disagree on {label} N={N}")
        print(f"{label:<10}{N:>4}{tc:>12.3f}{tp:>12.3f}{tp / tc:>9.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
