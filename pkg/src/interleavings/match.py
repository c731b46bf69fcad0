"""Exact bottleneck distance between barcodes."""
from __future__ import annotations

import math

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .pmod import Barcode
from .weights import INF


def _as_bars(B) -> list[tuple[float, float]]:
    if isinstance(B, Barcode):
        return list(B.nonempty())
    return [(float(a), float(b)) for a, b in B if a != b]


def _perfect(cost: np.ndarray, diagA: np.ndarray, diagB: np.ndarray, t: float) -> bool:
    """Is there a perfect matching using only edges of cost <= t?

    Left vertices are the bars of A followed by one diagonal slot per bar of
    B; right vertices are the bars of B followed by one slot per bar of A.
    """
    n, m = cost.shape
    size = n + m
    dense = np.zeros((size, size), dtype=bool)
    dense[:n, :m] = cost <= t
    dense[np.arange(n), m + np.arange(n)] = diagA <= t
    dense[n + np.arange(m), np.arange(m)] = diagB <= t
    dense[n:, m:] = True
    match = maximum_bipartite_matching(csr_matrix(dense.astype(np.int8)), perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(A, B) -> float:
    n, m = len(A), len(B)
    if n == 0 and m == 0:
        return 0.0
    a = np.array(A, dtype=float).reshape(n, 2)
    b = np.array(B, dtype=float).reshape(m, 2)
    cost = np.maximum(np.abs(a[:, None, 0] - b[None, :, 0]), np.abs(a[:, None, 1] - b[None, :, 1]))
    diagA = (a[:, 1] - a[:, 0]) / 2
    diagB = (b[:, 1] - b[:, 0]) / 2
    cands = np.unique(np.concatenate([cost.ravel(), diagA, diagB, [0.0]]))
    lo, hi = 0, len(cands) - 1
    # the largest candidate always admits a matching (everything to the diagonal)
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect(cost, diagA, diagB, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck(B1, B2) -> float:
    """Bottleneck distance; bars with infinite death match only each other."""
    A, B = _as_bars(B1), _as_bars(B2)
    infA = sorted(a for a, d in A if math.isinf(d))
    infB = sorted(a for a, d in B if math.isinf(d))
    if len(infA) != len(infB):
        return INF
    # optimal matching of points on a line under |.|: sort both sides
    ess = max((abs(x - y) for x, y in zip(infA, infB)), default=0.0)
    finA = [bar for bar in A if not math.isinf(bar[1])]
    finB = [bar for bar in B if not math.isinf(bar[1])]
    return max(ess, _finite_bottleneck(finA, finB))


__all__ = ["bottleneck"]
