"""Compare the numba and numpy backends of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the color-subset scan (via is_p_centered) and the realized-structure
count (via monte_carlo_x) under both backends and checks that they agree.
"""

import argparse
import time

import numpy as np

from pcentered import _kernels
from pcentered.centered import Coloring, is_p_centered
from pcentered.generators import FamilyParams, debski_subdivided, gnp
from pcentered.random_lb import PairFamily, monte_carlo_x


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases():
    rng = np.random.default_rng(0)
    g = gnp(400, 0.02, 1)
    fg = Coloring(tuple(int(c) for c in rng.integers(0, 12, g.n)), 12)
    yield "scan gnp(400,0.02) k=12 p=3", lambda b: is_p_centered(g, fg, 3, backend=b)
    h = debski_subdivided(FamilyParams(2, 1, 2))
    f = Coloring(tuple(v % 9 for v in range(h.n)), 9)
    yield f"scan family n={h.n} k=9 p=4", lambda b: is_p_centered(h, f, 4, backend=b)
    pf = PairFamily(tuple((2 * j, 2 * j + 1) for j in range(6)))
    yield "count m=6 p=3, 20000 samples", lambda b: monte_carlo_x(pf, 3, 0.5, 20_000, 1, backend=b).mean


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'case':<34} {'numba s':>10} {'numpy s':>10} {'speedup':>8}  agree")
    for name, fn in cases():
        fn("numba")  # compile outside the timing
        tn, a = best_of(lambda: fn("numba"), args.repeat)
        tp, b = best_of(lambda: fn("numpy"), args.repeat)
        print(f"{name:<34} {tn:>10.4f} {tp:>10.4f} {tp / tn:>8.1f}  {a == b}")


if __name__ == "__main__":
    main()
