import numpy as np
import pytest

from interleavings import _kernels
from interleavings._kernels import python_backend as py

compiled = _kernels.compiled_backend
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _random_columns(rng, n):
    cols = []
    for j in range(n):
        cols.append(sorted(rng.sample(range(j), rng.randint(0, min(j, 4)))) if j else [])
    return cols


def _dense_reduce(cols):
    # textbook column reduction on a dense matrix, independent of the bitset code
    n = len(cols)
    D = np.zeros((n, n), dtype=np.uint8)
    for j, c in enumerate(cols):
        D[c, j] = 1
    low = []
    for j in range(n):
        while True:
            nz = np.nonzero(D[:, j])[0]
            lj = int(nz[-1]) if len(nz) else -1
            k = next((i for i in range(j) if low[i] == lj), None) if lj >= 0 else None
            if k is None:
                break
            D[:, j] ^= D[:, k]
        low.append(lj)
    return low


def test_reduce_boundary_matches_dense_oracle(rng):
    for _ in range(30):
        cols = _random_columns(rng, rng.randint(1, 40))
        assert py.reduce_boundary(cols) == _dense_reduce(cols)


@needs_compiled
def test_backends_agree_on_reduction(rng):
    for _ in range(50):
        cols = _random_columns(rng, rng.randint(0, 80))
        assert list(compiled.reduce_boundary(cols)) == py.reduce_boundary(cols)


@needs_compiled
def test_backends_agree_on_gh_minima(rng):
    for _ in range(40):
        nx, ny = rng.randint(1, 4), rng.randint(1, 4)
        dx = np.array([[0 if i == j else 0 for j in range(nx)] for i in range(nx)], float)
        for i in range(nx):
            for j in range(i + 1, nx):
                dx[i, j] = dx[j, i] = rng.randint(1, 3)
        dy = np.zeros((ny, ny))
        for i in range(ny):
            for j in range(i + 1, ny):
                dy[i, j] = dy[j, i] = rng.uniform(1, 2)
        assert tuple(compiled.gh_minima(dx, dy)) == tuple(py.gh_minima(dx, dy))


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")


def test_env_var_forces_python_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, INTERLEAVINGS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import interleavings; print(interleavings.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
