"""Compare the compiled kernels with the NumPy reference.

    python3 bench/bench_kernels.py [--repeat 5]

Times each kernel on solver-sized inputs and one full fixed-point solve
(default config) with each backend, and prints a table plus the speed-up.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from breather import _kernels_py as ref
from breather import hs_solver
from breather.hs_solver import GOdd, SolverConfig, solve_fixed_point

try:
    from breather import _kernels as ext
except ImportError:
    ext = None

NAMES = ("cos_mul_batch", "scan_exp_forward", "scan_exp_backward", "scan_rot_backward")


def cases(rng):
    n = 1201
    a, b = rng.normal(size=(n, 10)), rng.normal(size=(n, 10))
    f = rng.normal(size=n)
    F = rng.normal(size=(4, n))
    R = rng.normal(size=(4, 2, 2)) * 0.5
    p = rng.normal(size=(4, 2))
    return {
        "cos_mul_batch": (a, b),
        "scan_exp_forward": (f, 0.99, 0.1, 0.2, 0.0),
        "scan_exp_backward": (f, 0.99, 0.1, 0.2, 0.0),
        "scan_rot_backward": (F, R, p, p, p),
    }


def best(fn, args, repeat):
    t = timeit.Timer(lambda: fn(*args))
    n, _ = t.autorange()
    return min(t.repeat(repeat, n)) / n


def solve_time(mod, repeat):
    saved = {k: getattr(hs_solver.kernels, k) for k in NAMES}
    try:
        for k in NAMES:
            setattr(hs_solver.kernels, k, getattr(mod, k))
        g, cfg = GOdd.preset("sinh"), SolverConfig()
        return min(timeit.repeat(lambda: solve_fixed_point(g, cfg), number=1, repeat=repeat))
    finally:
        for k, v in saved.items():
            setattr(hs_solver.kernels, k, v)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if ext is None:
        print("compiled kernels not built; only the reference backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'python [s]':>12} {'cython [s]':>12} {'speed-up':>9}")
    rows = list(cases(rng).items())
    for name, a in rows:
        tp = best(getattr(ref, name), a, args.repeat)
        if ext is None:
            print(f"{name:<20} {tp:12.3e} {'-':>12} {'-':>9}")
            continue
        tc = best(getattr(ext, name), a, args.repeat)
        assert np.array_equal(getattr(ext, name)(*a), getattr(ref, name)(*a))
        print(f"{name:<20} {tp:12.3e} {tc:12.3e} {tp / tc:9.1f}")
    tp = solve_time(ref, args.repeat)
    if ext is None:
        print(f"{'solve (default)':<20} {tp:12.3e}")
    else:
        tc = solve_time(ext, args.repeat)
        print(f"{'solve (default)':<20} {tp:12.3e} {tc:12.3e} {tp / tc:9.1f}")


if __name__ == "__main__":
    main()
