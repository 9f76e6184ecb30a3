"""Compare the numba and numpy box-scan kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times a raw ``scan_box`` over growing cubes and a few full
``enumerate_at_most`` calls, checks both kernels agree, and prints a table.
"""

import argparse
import time

from toricb import ZERO, BrauerRule, CTriple, Fan, enumerate_at_most, matrix_from_c
from toricb._kernels import BACKENDS, scan_box
from toricb.lattice import independent_frame


def best_of(repeat, fn):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def raw_cases():
    gens = [(1, 0, 0), (-1, 5, 0), (0, 0, 1)]
    rows, adj, det = independent_frame(gens)
    for side in (16, 32, 64, 96):
        yield (f"scan_box cube {side}^3", ([-side] * 3, [side] * 3, rows, adj, det, gens,
                                           [1, 1, 1], 3))


def enum_cases():
    a3 = Fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])
    cyc = Fan(3, [(1, 0, 0), (-1, 6, 0), (0, 0, 1)], [(0, 1, 2)])
    p2 = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    yield "enumerate A3, zero rule, b <= 25", (a3, ZERO, 25)
    rule = BrauerRule(matrix_from_c(CTriple(5, (1, 2, 3))))
    yield "enumerate 1/6(1,1,0), c=(1,2,3) p=5, b <= 4", (cyc, rule, 4)
    yield "enumerate P2, zero rule, b <= 60", (p2, ZERO, 60)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    # compile outside the timings
    for kernel in BACKENDS:
        scan_box([0, 0], [1, 1], (0, 1), [[1, 0], [0, 1]], 1, [(1, 0), (0, 1)], [1, 1], 1,
                 kernel=kernel)

    print(f"{'case':48s} {'numba s':>9s} {'numpy s':>9s} {'ratio':>7s} {'hits':>7s}")
    for name, call in raw_cases():
        times, outs = {}, {}
        for kernel in BACKENDS:
            times[kernel], outs[kernel] = best_of(
                args.repeat, lambda: scan_box(*call, primitive=True, kernel=kernel))
        assert outs["numba"] == outs["numpy"], name
        print(f"{name:48s} {times['numba']:9.4f} {times['numpy']:9.4f} "
              f"{times['numpy'] / times['numba']:7.1f} {len(outs['numba']):7d}")
    for name, (fan, rule, t) in enum_cases():
        times, outs = {}, {}
        for kernel in BACKENDS:
            times[kernel], outs[kernel] = best_of(
                args.repeat, lambda: enumerate_at_most(fan, rule, t, kernel=kernel))
        assert outs["numba"] == outs["numpy"], name
        print(f"{name:48s} {times['numba']:9.4f} {times['numpy']:9.4f} "
              f"{times['numpy'] / times['numba']:7.1f} {len(outs['numba']):7d}")


if __name__ == "__main__":
    main()
