"""Time each hot kernel under every available backend.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

The first numba call compiles (or loads the on-disk cache); one warm-up call
per kernel keeps that out of the numbers. Results must agree across backends,
so each row also reports whether they did.
"""

import argparse
import random
import statistics
import time

from sidonkit import available_backends, use_backend
from sidonkit import kernels


def workloads(quick: bool):
    rng = random.Random(7)
    n_ms = 60 if quick else 150
    A = sorted(rng.sample(range(1, 10**6), n_ms))
    prof = {x: 1 for x in rng.sample(range(1, 10**5), 400 if quick else 1500)}
    xs = sorted(rng.sample(range(-300, 300), 40 if quick else 80))
    ys = sorted(rng.sample(range(-300, 300), 40 if quick else 80))
    M = [[1, 2, -1, -2], [3, -1, 2, 0]]
    elems = sorted(rng.sample(range(-50, 50), 14 if quick else 24))
    return [
        (f"multiset_value_counts |A|={n_ms} h=3", lambda: kernels.multiset_value_counts(A, 3, False)),
        (f"first_violation |A|={n_ms} h=3 g=2", lambda: kernels.first_violation(A, 3, False, 2)),
        (f"convolve {len(prof)}x{len(prof)} add", lambda: kernels.convolve(prof, prof, False)),
        (f"hyperbolic_brute {len(xs)}x{len(ys)}", lambda: kernels.hyperbolic_brute(xs, ys, 6, 1)),
        (f"linear_count n=4 |A|={len(elems)}", lambda: kernels.linear_count(M, [0, 0], elems)),
    ]


def timed(fn, repeat):
    samples = []
    result = None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - t)
    return statistics.median(samples), result


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    ap.add_argument("--backends", nargs="*", default=None)
    args = ap.parse_args()
    names = args.backends or available_backends()
    print(f"{'kernel':40s} " + " ".join(f"{b:>10s}" for b in names) + "  agree")
    for label, fn in workloads(args.quick):
        times, results = [], []
        for b in names:
            with use_backend(b):
                fn()  # warm-up / JIT
                t, r = timed(fn, args.repeat)
            times.append(t)
            results.append(r)
        agree = all(r == results[0] for r in results)
        print(f"{label:40s} " + " ".join(f"{t * 1e3:9.2f}ms" for t in times) + f"  {agree}")


if __name__ == "__main__":
    main()
