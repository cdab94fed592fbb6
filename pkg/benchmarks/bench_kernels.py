"""Time the numba and pure-numpy variants of each counting kernel.

    python3 benchmarks/bench_kernels.py [--length N] [--repeat R]

Both variants are called directly, so the COMPNET_DISABLE_NUMBA flag does
not matter here. Results are checked for agreement before timing.
"""
import argparse
import timeit

import numpy as np

from compnet import kernels
from compnet._accel import USE_NUMBA


def cases(length, rng):
    k = 16
    codes = rng.integers(k, size=length).astype(np.int64)
    other = rng.integers(k, size=length).astype(np.int64)
    counts = np.bincount(codes, minlength=k).astype(np.float64)
    return {
        "entropy_from_counts": ((counts,), "_entropy_from_counts"),
        "symbol_counts": ((codes, k), "_symbol_counts"),
        "sliding_entropy(w=64)": ((codes, k, 64), "_sliding_entropy"),
        "sliding_entropy(w=1024)": ((codes, k, 1024), "_sliding_entropy"),
        "joint_counts": ((codes, other, k, k), "_joint_counts"),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not USE_NUMBA:
        print("numba unavailable or disabled; the nb column runs uncompiled python")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<26}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, (call_args, stem) in cases(args.length, rng).items():
        nb, npy = getattr(kernels, stem + "_nb"), getattr(kernels, stem + "_np")
        a, b = nb(*call_args), npy(*call_args)  # also triggers compilation
        if not np.allclose(a, b, atol=1e-9):
            raise SystemExit(f"{name}: variants disagree")
        number = 3
        t_nb = min(timeit.repeat(lambda: nb(*call_args), number=number, repeat=args.repeat)) / number
        t_np = min(timeit.repeat(lambda: npy(*call_args), number=number, repeat=args.repeat)) / number
        print(f"{name:<26}{t_nb * 1e3:>10.3f}{t_np * 1e3:>10.3f}{t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
