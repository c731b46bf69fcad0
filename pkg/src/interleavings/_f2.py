"""Dense linear algebra over F2 on numpy uint8 arrays."""
from __future__ import annotations

import numpy as np


def as_f2(a) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) % 2).astype(np.uint8)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    return ((a.astype(np.int64) @ b.astype(np.int64)) % 2).astype(np.uint8)


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = as_f2(a).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if len(hits) == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if len(others):
            m[others] ^= m[r]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(a: np.ndarray, ncols: int | None = None) -> np.ndarray:
    """Basis of {x : a x = 0} as rows of a (k, n) array."""
    a = np.asarray(a)
    n = a.shape[1] if ncols is None else ncols
    if a.size == 0:
        return np.eye(n, dtype=np.uint8)
    r, piv = rref(a)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, p in enumerate(piv):
            basis[k, p] = r[i, f]
    return basis


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution of a x = b, or None if inconsistent."""
    a = as_f2(a)
    b = as_f2(b).reshape(-1)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.zeros(n, dtype=np.uint8)
    aug = np.concatenate([a, b[:, None]], axis=1)
    r, piv = rref(aug)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for i, p in enumerate(piv):
        x[p] = r[i, n]
    return x


def rank(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a)[1])
