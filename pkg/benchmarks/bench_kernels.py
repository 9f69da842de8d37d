"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from charge2.kernels import available_backends
from charge2.orthopoly import LaguerreBasis


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    for n in (200, 1000, 2000):
        diag, offsq = LaguerreBasis(n).jacobi_matrix()
        yield f"eigvalsh n={n}", lambda m, d=diag, o=offsq, n=n: m.tridiag_eigvalsh(d, o, 1e-14, 100 * n)
    for n in (1000, 5000):
        probs = rng.uniform(0.01, 0.99, n)
        yield f"bernoulli_pmf n={n}", lambda m, p=probs: m.bernoulli_pmf(p)
    xs = np.sort(rng.uniform(0.1, 4000.0, 2000))
    yield "newton_deltas n=2000", lambda m: m.laguerre_newton_deltas(2000, -0.5, xs)
    ys = rng.uniform(0.1, 1e4, 200)
    yield "laguerre_log_neg n=2000 x200", lambda m: [m.laguerre_log_neg(2000, -0.5, float(y)) for y in ys]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = available_backends()
    names = sorted(backends)
    print(f"{'kernel':32s}" + "".join(f"{k:>12s}" for k in names) + ("     speedup" if len(names) == 2 else ""))
    for label, fn in cases():
        t = {k: best_of(lambda: fn(backends[k]), args.repeat) for k in names}
        line = f"{label:32s}" + "".join(f"{t[k] * 1e3:10.2f}ms" for k in names)
        if len(names) == 2:
            line += f"{t['python'] / t['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
