"""Compare the numba and numpy containment kernels on a real fan.

Usage: python benchmarks/bench_containment.py [--samples N] [--repeat R]
"""

import argparse
import time

import numpy as np

from amplifiber import affine_forms, build_Z_moment_curve, sample_frame
from amplifiber._kernels import (HAVE_NUMBA, containment_codes_numba,
                                 containment_codes_numpy)
from amplifiber.fans import _ConeTable, random_directions, ray_system


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("-n", type=int, default=8)
    ap.add_argument("-k", type=int, default=1)
    ap.add_argument("-m", type=int, default=4)
    args = ap.parse_args()

    inst = build_Z_moment_curve(args.n, args.m, args.k)
    table = _ConeTable(ray_system(affine_forms(sample_frame(inst, 0))))
    inv = table.float_inverses()
    dirs = random_directions(inv.shape[1], args.samples, 0).astype(np.float64)
    tol = 1e-9 * np.abs(inv).max(axis=(1, 2)) * np.abs(dirs).max() * inv.shape[1]
    print(f"instance (n,k,m)=({args.n},{args.k},{args.m}): {len(table.cones)} cones, "
          f"r={inv.shape[1]}, {args.samples} directions")

    t_np, ref = best_of(lambda: containment_codes_numpy(inv, dirs, tol), args.repeat)
    print(f"numpy : {t_np * 1e3:9.2f} ms")
    if HAVE_NUMBA:
        t0 = time.perf_counter()
        containment_codes_numba(inv, dirs[:10], tol)
        print(f"numba compile/load: {(time.perf_counter() - t0) * 1e3:.1f} ms")
        t_nb, out = best_of(lambda: containment_codes_numba(inv, dirs, tol), args.repeat)
        print(f"numba : {t_nb * 1e3:9.2f} ms  (speedup x{t_np / t_nb:.1f})")
        assert np.array_equal(out, ref), "kernels disagree"
        print("outputs identical")
    else:
        print("numba not installed; numpy path only")


if __name__ == "__main__":
    main()
