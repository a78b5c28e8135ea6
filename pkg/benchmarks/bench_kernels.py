"""Compare the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-N time per call for each kernel and the speedup.
"""

import argparse
import timeit

import numpy as np

from advisory_miner._kernels import compiled, pure


def cases():
    rng = np.random.default_rng(0)
    n = 2000
    train = rng.normal(size=(n, 8))
    nominal = np.array([0, 0, 0, 0, 0, 1, 1, 1], dtype=np.uint8)
    train[:, 5:] = rng.integers(0, 3, size=(n, 3))
    scale = np.ones(8)
    query = train[17].copy()
    values = np.sort(rng.integers(0, 200, size=n).astype(np.float64))
    labels = rng.integers(0, 3, size=n).astype(np.intp)
    return {
        "betacf(a=12.5, b=30, x=0.2)": lambda k: k.betacf(12.5, 30.0, 0.2),
        "betacf(a=400, b=500, x=0.44)": lambda k: k.betacf(400.0, 500.0, 0.44),
        f"sq_distances({n}x8)": lambda k: k.sq_distances(query, train, nominal, scale),
        f"best_numeric_split(n={n})": lambda k: k.best_numeric_split(values, labels, 3, 2),
    }


def best_time(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the pure kernels are timed")
    print(f"{'kernel':34} {'python':>12} {'cython':>12} {'speedup':>8}")
    for name, call in cases().items():
        t_py = best_time(lambda: call(pure), args.repeat)
        if compiled is None:
            print(f"{name:34} {t_py * 1e6:10.1f}us")
            continue
        t_c = best_time(lambda: call(compiled), args.repeat)
        print(f"{name:34} {t_py * 1e6:10.1f}us {t_c * 1e6:10.1f}us {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
