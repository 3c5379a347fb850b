"""Compare the compiled kernels against the pure-Python fallback.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

from __future__ import annotations

import argparse
import random
import timeit

from padic_eisenstein import _fallback, kernels

MOD = 5**6


def cases(rng: random.Random):
    a = [1] + [rng.randrange(MOD) for _ in range(255)]
    b = [rng.randrange(MOD) for _ in range(256)]
    vec = [rng.randrange(MOD) for _ in range(243)]
    vals = [rng.randrange(MOD) for _ in range(200)]
    return {
        "mul_trunc(256)": lambda m: m.mul_trunc(a, b, 256, MOD),
        "inv_trunc(256)": lambda m: m.inv_trunc(a, 256, MOD, 1),
        "pascal_apply(243)": lambda m: m.pascal_apply(vec, MOD),
        "pascal_inverse_apply(243)": lambda m: m.pascal_inverse_apply(vec, MOD),
        "forward_differences(200)": lambda m: m.forward_differences(vals, MOD),
        "theta_values(128)": lambda m: m.theta_values(a[:128], 127, MOD),
    }


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    compiled = kernels._compiled
    print(f"backend: {kernels.BACKEND}")
    print(f"{'kernel':28} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases(random.Random(0)).items():
        py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:28} {py:10.2f} {'-':>10} {'-':>8}")
            continue
        if fn(compiled) != fn(_fallback):
            raise SystemExit(f"{name}: backends disagree")
        cy = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28} {py:10.2f} {cy:10.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
