"""Finite metric spaces and brute-force Gromov-Hausdorff distances."""
from __future__ import annotations

import csv
import io
import itertools
import random
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import ParseError, SizeCap
from .twocat import Finite2Category
from .weights import Lawvere2Weight

MAP_PAIR_CAP = 10 ** 7


class FiniteMetricSpace:
    """n points with a symmetric distance matrix (validated on construction)."""

    def __init__(self, dist, validate: bool = True, tol: float = 1e-12):
        d = np.array(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        self.dist = d
        if validate:
            problems = self.problems(tol)
            if problems:
                raise ValueError("not a metric: " + problems[0])

    @property
    def n(self) -> int:
        return len(self.dist)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, FiniteMetricSpace) and np.array_equal(self.dist, other.dist)

    def __hash__(self):
        return hash(self.dist.tobytes())

    def __repr__(self):
        return f"FiniteMetricSpace({self.dist.tolist()})"

    def problems(self, tol: float = 1e-12) -> list[str]:
        d, out = self.dist, []
        if np.any(d < 0) or not np.all(np.isfinite(d)):
            out.append("entries must be finite and nonnegative")
        if np.any(np.abs(np.diag(d)) > tol):
            out.append("nonzero diagonal")
        if np.any(np.abs(d - d.T) > tol):
            out.append("not symmetric")
        if self.n and np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + tol):
            out.append("triangle inequality fails")
        return out

    def diameter(self) -> float:
        return float(self.dist.max()) if self.n else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in self.dist:
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FiniteMetricSpace":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        try:
            d = [[float(c) for c in r] for r in rows]
            return cls(d)
        except ValueError as exc:
            raise ParseError(f"bad metric CSV: {exc}") from exc


def _maps(n_src: int, n_tgt: int):
    return itertools.product(range(n_tgt), repeat=n_src)


def distortion(f: Sequence[int], X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """sup |d_X(x, x') - d_Y(f x, f x')|."""
    f = np.asarray(f, dtype=np.intp)
    if X.n == 0:
        return 0.0
    return float(np.abs(X.dist - Y.dist[np.ix_(f, f)]).max())


def codistortion(f, g, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """sup over (x, y) of |d_X(x, g y) - d_Y(y, f x)|."""
    f = np.asarray(f, dtype=np.intp)
    g = np.asarray(g, dtype=np.intp)
    if X.n == 0 or Y.n == 0:
        return 0.0
    a = X.dist[:, g]          # [x, y] -> d_X(x, g y)
    b = Y.dist[:, f].T        # [x, y] -> d_Y(y, f x)
    return float(np.abs(a - b).max())


def altered_codistortion(f, g, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> float:
    """max(sup_x d_X(x, g f x), sup_y d_Y(y, f g y))."""
    f = np.asarray(f, dtype=np.intp)
    g = np.asarray(g, dtype=np.intp)
    bx = X.dist[np.arange(X.n), g[f]].max() if X.n else 0.0
    by = Y.dist[np.arange(Y.n), f[g]].max() if Y.n else 0.0
    return float(max(bx, by))


def _check_cap(X, Y, cap):
    pairs = (Y.n ** X.n) * (X.n ** Y.n)
    if pairs > cap:
        raise SizeCap(f"{pairs} map pairs exceed the cap of {cap}")


def gh_all(X: FiniteMetricSpace, Y: FiniteMetricSpace, cap: int = MAP_PAIR_CAP) -> tuple[float, float, float]:
    """(gh, altered_gh, modified_gh) in one brute-force pass."""
    _check_cap(X, Y, cap)
    if X.n == 0 or Y.n == 0:
        raise ValueError("metric spaces must be nonempty")
    a, b, c = _kernels.gh_minima(X.dist, Y.dist)
    return 0.5 * a, 0.5 * b, 0.5 * c


def gh(X, Y, cap: int = MAP_PAIR_CAP) -> float:
    """1/2 min over (f, g) of max(dis f, dis g, codis(f, g))."""
    return gh_all(X, Y, cap)[0]


def altered_gh(X, Y, cap: int = MAP_PAIR_CAP) -> float:
    """1/2 min over (f, g) of max(dis f, dis g, altered codis(f, g))."""
    return gh_all(X, Y, cap)[1]


def modified_gh(X, Y, cap: int = MAP_PAIR_CAP) -> float:
    """1/2 min over (f, g) of max(dis f, dis g).

    Normalized with the same 1/2 as the other two; without it the value can
    exceed gh (one point against two points at distance d gives d vs d/2).
    ``modified_gh_unnormalized`` returns the raw minimum.
    """
    return gh_all(X, Y, cap)[2]


def modified_gh_unnormalized(X, Y, cap: int = MAP_PAIR_CAP) -> float:
    return 2.0 * modified_gh(X, Y, cap)


def gh_reference(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> tuple[float, float, float]:
    """Slow loop over map pairs using the public distortion functions."""
    best = [np.inf] * 3
    F = list(_maps(X.n, Y.n))
    G = list(_maps(Y.n, X.n))
    dg = {g: distortion(g, Y, X) for g in G}
    for f in F:
        df = distortion(f, X, Y)
        for g in G:
            base = max(df, dg[g])
            best[0] = min(best[0], max(base, codistortion(f, g, X, Y)))
            best[1] = min(best[1], max(base, altered_codistortion(f, g, X, Y)))
            best[2] = min(best[2], base)
    return tuple(0.5 * v for v in best)


def gh_fragment_2cat(X: FiniteMetricSpace, Y: FiniteMetricSpace, scale: float = 0.5,
                     ) -> tuple[Finite2Category, Lawvere2Weight]:
    """Two objects, all maps between them, and the hat 2-morphisms 1 => g on self-maps.

    W1(f) = scale * dis(f) and W2(hat g) = scale * sup_x d(x, g x).  With
    scale 1/2 the interleaving distance of the two objects is altered_gh.
    Horizontal composites that whisker a hat by a non-identity map have no
    2-morphism to land in and are left undefined.
    """
    spaces = {"X": X, "Y": Y}
    mor1 = {}
    for A, B in itertools.product("XY", repeat=2):
        for f in _maps(spaces[A].n, spaces[B].n):
            mor1[(A, B, f)] = (A, B)
    id1 = {A: (A, A, tuple(range(spaces[A].n))) for A in "XY"}

    def c1(second, first):
        A, B, f = first
        B2, C, g = second
        if B2 != B:
            return None
        return (A, C, tuple(g[i] for i in f))
    mor2 = {("1", f): (f, f) for f in mor1}
    for f in mor1:
        A, B, _ = f
        if A == B and f != id1[A]:
            mor2[("hat", f)] = (id1[A], f)
    id2 = {f: ("1", f) for f in mor1}

    def is_unit(a):
        return a[0] == "1" and a[1] == id1[a[1][0]]

    def v(b, a):
        if a[0] == "1":
            return b
        if b[0] == "1":
            return a
        return None

    def hc(b, a):
        if a[0] == "1" and b[0] == "1":
            return ("1", c1(b[1], a[1]))
        if is_unit(a):
            return b
        if is_unit(b):
            return a
        if a[0] == "hat" and b[0] == "hat":
            t = c1(b[1], a[1])
            return ("1", t) if t == id1[t[0]] else ("hat", t)
        return None
    C = Finite2Category(["X", "Y"], mor1, id1, c1, mor2, id2, v, hc, "GH-fragment")

    def w1(f):
        A, B, m = f
        return scale * distortion(m, spaces[A], spaces[B])

    def w2(a):
        if a[0] == "1":
            return 0.0
        A, _, g = a[1]
        S = spaces[A]
        return scale * float(S.dist[np.arange(S.n), list(g)].max())
    return C, Lawvere2Weight(w1, w2)


def integer_metric_corpus(max_points: int = 3, values: Sequence[int] = (1, 2, 3)) -> list[FiniteMetricSpace]:
    """Every metric on 1..max_points points with off-diagonal entries in ``values``."""
    out = []
    for n in range(1, max_points + 1):
        slots = list(itertools.combinations(range(n), 2))
        for entries in itertools.product(values, repeat=len(slots)):
            d = np.zeros((n, n))
            for (i, j), v in zip(slots, entries):
                d[i, j] = d[j, i] = v
            if not FiniteMetricSpace(d, validate=False).problems():
                out.append(FiniteMetricSpace(d))
    return out


def random_metric_space(n: int, rng: random.Random, low: float = 1.0, high: float = 3.0,
                        integer: bool = False) -> FiniteMetricSpace:
    """Random entries in [low, high]; for low > 0 and high <= 2 low every such
    matrix is a metric, otherwise the shortest-path closure is taken."""
    d = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        d[i, j] = d[j, i] = rng.randint(int(low), int(high)) if integer else rng.uniform(low, high)
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return FiniteMetricSpace(d)


__all__ = [
    "FiniteMetricSpace", "distortion", "codistortion", "altered_codistortion", "gh", "altered_gh",
    "modified_gh", "modified_gh_unnormalized", "gh_all", "gh_reference", "gh_fragment_2cat",
    "integer_metric_corpus", "random_metric_space", "MAP_PAIR_CAP",
]
