"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 4096]

Both paths run on the same inputs; the script also reports the largest
relative disagreement so a regression in either path shows up here.
"""

import argparse
import time

import numpy as np

from morcamp import _kernels as K
from morcamp.young import PowerLogYoung


def timed(fn, repeat):
    fn()                         # warm-up (compilation for numba)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=4096)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    A = PowerLogYoung(2.0, 1.0)
    tab = A.table
    values = np.sort(rng.lognormal(0.0, 2.0, args.size))[::-1].copy()
    widths = rng.dirichlet(np.ones(args.size))
    s = np.exp(rng.uniform(-20, 20, args.size))
    t = np.exp(rng.uniform(-300, 300, 20 * args.size))

    cases = {
        "table_eval": lambda accel: K.table_eval(t, tab, accel=accel),
        "luxemburg": lambda accel: K.luxemburg_solve(values, widths, tab,
                                                     accel=accel),
        "amemiya": lambda accel: K.amemiya_solve(values, widths, tab,
                                                 accel=accel),
        "legendre": lambda accel: K.legendre_sup(s[:256], -40.0, 40.0, tab,
                                                 accel=accel),
    }
    print(f"numba available: {K.HAVE_NUMBA}")
    print(f"{'kernel':<12}{'numpy [ms]':>12}{'numba [ms]':>12}"
          f"{'speedup':>10}{'max rel diff':>15}")
    for name, fn in cases.items():
        t_np, out_np = timed(lambda: fn(False), args.repeat)
        t_nb, out_nb = timed(lambda: fn(True), args.repeat)
        a, b = np.asarray(out_np, float), np.asarray(out_nb, float)
        diff = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
        print(f"{name:<12}{1e3 * t_np:>12.3f}{1e3 * t_nb:>12.3f}"
              f"{t_np / t_nb:>10.1f}{diff:>15.2e}")


if __name__ == "__main__":
    main()
