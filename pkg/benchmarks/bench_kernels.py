"""Benchmark the numba-compiled hot kernels against their numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py [--n 600] [--repeat 5]

Each hot kernel exists in two variants (see kernelsmith._kernels); this
script times both on identical inputs and reports the speedup. The library
itself picks a variant at import time via the KERNELSMITH_NUMBA env flag.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from kernelsmith import _kernels
from kernelsmith._accel import NUMBA_AVAILABLE


def timeit(fn, *args, repeat: int) -> float:
    fn(*args)  # warm up (first call may JIT-compile)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_gower(n: int, repeat: int):
    rng = np.random.default_rng(0)
    num = rng.uniform(0, 1, (n, 6))
    cat = rng.integers(0, 4, (n, 3)).astype(np.int64)
    inv = rng.uniform(0.5, 2.0, 6)
    return (
        timeit(_kernels.gower_numpy, num, inv, cat, repeat=repeat),
        timeit(_kernels.gower_loops, num, inv, cat, repeat=repeat),
    )


def bench_pam_swap(n: int, repeat: int):
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 1, (n, 4))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    medoids = np.sort(rng.choice(n, 8, replace=False)).astype(np.int64)
    sub = dist[:, medoids]
    nearest = np.argmin(sub, axis=1).astype(np.int64)
    dn = sub[np.arange(n), nearest]
    ds = np.partition(sub, 1, axis=1)[:, 1]
    args = (dist, medoids, dn, ds, nearest)
    return (
        timeit(_kernels.pam_best_swap_numpy, *args, repeat=repeat),
        timeit(_kernels.pam_best_swap_loops, *args, repeat=repeat),
    )


def bench_dda_epoch(n: int, repeat: int):
    rng = np.random.default_rng(2)
    X = rng.uniform(0, 1, (n, 8))
    y = rng.integers(0, 3, n).astype(np.int64)
    shrink = 1.0 / np.log(1.0 / 0.2)

    def run(epoch):
        centers = np.zeros((n, 8))
        sigma2 = np.zeros(n)
        classes = np.zeros(n, dtype=np.int64)
        weights = np.zeros(n, dtype=np.int64)
        epoch(X, y, centers, sigma2, classes, weights, 0, 0.4, shrink, 1.0, 1e-12)

    return (
        timeit(run, _kernels.dda_epoch_numpy, repeat=repeat),
        timeit(run, _kernels.dda_epoch_loops, repeat=repeat),
    )


def bench_best_split(n: int, repeat: int):
    rng = np.random.default_rng(3)
    X = rng.uniform(0, 1, (n, 12))
    y = rng.integers(0, 3, n).astype(np.int64)
    rows = np.arange(n, dtype=np.int64)
    feats = np.arange(12, dtype=np.int64)
    args = (X, y, rows, feats, 3)
    return (
        timeit(_kernels.best_split_numpy, *args, repeat=repeat),
        timeit(_kernels.best_split_loops, *args, repeat=repeat),
    )


BENCHES = {
    "gower matrix": bench_gower,
    "pam swap scan": bench_pam_swap,
    "dda epoch": bench_dda_epoch,
    "forest split": bench_best_split,
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=600, help="problem size")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    mode = "numba" if NUMBA_AVAILABLE else "plain python loops (numba missing)"
    print(f"loop path compiled with: {mode}; n={args.n}\n")
    print(f"{'kernel':<16}{'numpy':>12}{'loops':>12}{'speedup':>10}")
    for name, bench in BENCHES.items():
        t_numpy, t_loops = bench(args.n, args.repeat)
        ratio = t_numpy / t_loops if t_loops > 0 else float("inf")
        print(f"{name:<16}{t_numpy * 1e3:>10.2f}ms{t_loops * 1e3:>10.2f}ms{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
