"""Time the hot kernels under the numba and numpy backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row is the best of ``--repeat`` runs after one warm-up call (the
warm-up absorbs numba compilation).  The last column is the largest
relative difference between the two backends on the same inputs.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from twisted_eisenstein import eisenstein as E
from twisted_eisenstein import kernels
from twisted_eisenstein._backend import HAVE_NUMBA, set_backend


def _best(fn, repeat):
    fn()
    ts = []
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t)
    return min(ts), out


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def cases(quick):
    rng = np.random.default_rng(1)
    s_arr = rng.uniform(2, 8, 4000) + 1j * rng.uniform(-3, 3, 4000)
    a_arr = rng.uniform(0.2, 50, 4000)
    E_, D_ = (16, 24) if quick else (30, 40)
    mats = kernels.enumerate_matrices(E_, D_)
    zs = np.arange(64 if quick else 256) / (64 if quick else 256) + 0.8j
    c_max = 60 if quick else 200
    pt = E.DomainPoint(12, 4.5, 2.2)
    tr = E.Truncation(c_max=c_max)

    def term3():
        E._term3_cached.cache_clear()
        return E.corollary22_c1(pt, tr).value

    return [
        ("hurwitz a^s zeta(s,a), 4000 pts", lambda: kernels.hurwitz_scaled_batch(s_arr, a_arr)),
        (f"matrix enumeration E={E_} D={D_}", lambda: kernels.enumerate_matrices(E_, D_)),
        (f"matrix sum {len(mats)} x {len(zs)}", lambda: kernels.matrix_sum(mats, zs, 12, 4.5, 2.0)),
        (f"c(1) series, c_max={c_max}", term3),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    print(f"{'kernel':<38}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}{'max rel diff':>14}")
    for name, fn in cases(args.quick):
        times, outs = [], []
        for b in backends:
            set_backend(b)
            t, out = _best(fn, args.repeat)
            times.append(t)
            outs.append(out)
        diff = _rel(outs[0], outs[-1]) if len(outs) > 1 else 0.0
        speed = times[-1] / times[0] if len(times) > 1 else 1.0
        print(f"{name:<38}" + "".join(f"{t:>11.4f}s" for t in times) + f"{speed:>9.1f}x{diff:>14.2e}")


if __name__ == "__main__":
    main()
