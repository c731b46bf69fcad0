"""Pure-Python/numpy versions of the hot loops.

These are the reference implementations; the compiled module must agree
with them exactly (checked in tests/test_kernels.py).
"""
from __future__ import annotations

import numpy as np


def reduce_boundary(columns: list[list[int]]) -> list[int]:
    """Column reduction over F2.

    ``columns[j]`` lists the row indices of the nonzero entries of column j
    (rows index the same cell ordering as columns).  Returns ``low`` with
    ``low[j]`` the pivot row of reduced column j, or -1 if it reduced to 0.
    Columns are stored as Python int bitsets so xor is a single operation.
    """
    n = len(columns)
    bits = []
    for col in columns:
        b = 0
        for r in col:
            b ^= 1 << r
        bits.append(b)
    low = [-1] * n
    owner = {}
    for j in range(n):
        b = bits[j]
        while b:
            piv = b.bit_length() - 1
            k = owner.get(piv)
            if k is None:
                owner[piv] = j
                low[j] = piv
                break
            b ^= bits[k]
        bits[j] = b
    return low


def gh_minima(dx: np.ndarray, dy: np.ndarray) -> tuple[float, float, float]:
    """Brute-force minima of the three GH objectives (no 1/2 applied).

    Returns (min max(dis f, dis g, codis), min max(dis f, dis g, altcodis),
    min max(dis f, dis g)) over all f: X -> Y, g: Y -> X.
    """
    dx = np.asarray(dx, dtype=float)
    dy = np.asarray(dy, dtype=float)
    nx, ny = len(dx), len(dy)
    F = _all_maps(nx, ny)  # (ny**nx, nx)
    G = _all_maps(ny, nx)  # (nx**ny, ny)
    dis_f = np.abs(dx[None, :, :] - dy[F[:, :, None], F[:, None, :]]).max(axis=(1, 2))
    dis_g = np.abs(dy[None, :, :] - dx[G[:, :, None], G[:, None, :]]).max(axis=(1, 2))
    # dx[x, g(y)] for every g: (ng, nx, ny)
    dxg = dx[:, G].transpose(1, 0, 2)
    best = [np.inf, np.inf, np.inf]
    for i in range(len(F)):
        f = F[i]
        dyf = dy[:, f].T  # (nx, ny): dy[y, f(x)] at [x, y]
        codis = np.abs(dxg - dyf[None]).max(axis=(1, 2))
        gf = G[:, f]  # (ng, nx)
        back_x = dx[np.arange(nx)[None, :], gf].max(axis=1)
        fg = f[G]  # (ng, ny)
        back_y = dy[np.arange(ny)[None, :], fg].max(axis=1)
        base = np.maximum(dis_f[i], dis_g)
        best[0] = min(best[0], float(np.maximum(base, codis).min()))
        best[1] = min(best[1], float(np.maximum(base, np.maximum(back_x, back_y)).min()))
        best[2] = min(best[2], float(base.min()))
    return best[0], best[1], best[2]


def _all_maps(n_src: int, n_tgt: int) -> np.ndarray:
    if n_src == 0:
        return np.zeros((1, 0), dtype=np.intp)
    grids = np.indices((n_tgt,) * n_src).reshape(n_src, -1).T
    return np.ascontiguousarray(grids[:, ::-1], dtype=np.intp)
