"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

import numpy as np

from interleavings import _kernels
from interleavings.metricgh import random_metric_space
from interleavings.pipeline import grid_complex, sublevel_filtration, FilterFunction


def _columns(grid, seed):
    K = grid_complex(grid)
    rng = np.random.default_rng(seed)
    F = sublevel_filtration(FilterFunction(rng.uniform(0, 1, K.n_vertices)), K)
    pos = {c: i for i, c in enumerate(F.order)}
    return [sorted(pos[f] for f in K.faces(c)) for c in F.order]


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    py, cy = _kernels.python_backend, _kernels.compiled_backend
    if cy is None:
        print("compiled backend not available; build with `pip install -e . --no-build-isolation`")
        return 1
    rng = random.Random(0)
    cases = [
        ("reduce_boundary grid 10x10", (_columns(10, 0),), "reduce_boundary"),
        ("reduce_boundary grid 30x30", (_columns(30, 0),), "reduce_boundary"),
        ("gh_minima 3 vs 4 points", (random_metric_space(3, rng).dist, random_metric_space(4, rng).dist),
         "gh_minima"),
        ("gh_minima 4 vs 4 points", (random_metric_space(4, rng).dist, random_metric_space(4, rng).dist),
         "gh_minima"),
        ("gh_minima 5 vs 5 points", (random_metric_space(5, rng).dist, random_metric_space(5, rng).dist),
         "gh_minima"),
    ]
    print(f"{'kernel':32s} {'python (ms)':>12s} {'compiled (ms)':>14s} {'speedup':>8s}")
    for name, a, fn in cases:
        ref = getattr(py, fn)(*a)
        out = getattr(cy, fn)(*a)
        assert list(ref) == list(out), name
        tp = min(timeit.repeat(lambda: getattr(py, fn)(*a), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: getattr(cy, fn)(*a), number=1, repeat=args.repeat))
        print(f"{name:32s} {tp * 1e3:12.3f} {tc * 1e3:14.3f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
