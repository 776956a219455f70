"""Time the numba and pure-numpy kernel paths side by side.

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported in-process regardless of HYDROGRAN_DISABLE_NUMBA;
each kernel is warmed up once (JIT compile) before timing, and outputs of
the two paths are compared.
"""

import argparse
import timeit

import numpy as np

from hydrogran import kernels
from hydrogran.som import SomMap


def _cases(rng):
    smap = SomMap(6, 6, rng.random((36, 5)))
    data = rng.random((150, 5))
    order = rng.permutation(150).astype(np.int64)
    queries = rng.random((10_000, 5))
    centers, widths = rng.random((8, 4)), rng.uniform(0.1, 0.5, (8, 4))
    X = rng.random((5_000, 4))

    def som_epoch(k):
        cb = smap.codebook.copy()
        k.som_epoch(cb, smap.grid, data, order, 0.3, 1.5)
        return cb

    return {
        "som_epoch (36 units, 150 samples)": som_epoch,
        "bmu (36 units, 10k queries)": lambda k: k.bmu(smap.codebook, queries)[0],
        "firing (8 rules, 5k points)": lambda k: k.firing(centers, widths, X),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    backends = [kernels.numba_kernels, kernels.numpy_kernels]
    rng = np.random.default_rng(0)
    print(f"{'kernel':<36} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}  max|diff|")
    for name, fn in _cases(rng).items():
        outs = [fn(k) for k in backends]  # warm-up and agreement
        diff = float(np.max(np.abs(np.asarray(outs[0], float) - np.asarray(outs[1], float))))
        times = [min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) * 1e3
                 for k in backends]
        print(f"{name:<36} {times[0]:>10.3f} {times[1]:>10.3f} {times[1] / times[0]:>7.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
