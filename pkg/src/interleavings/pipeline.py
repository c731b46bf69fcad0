"""Sublevel-set persistence and the function-space stability experiment."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import NonSublevelClosed, ParseError, ShapeMismatch, UnsupportedAction, UnsupportedDegree
from .interleave import DistanceResult
from .match import bottleneck
from .pmod import Barcode
from .posets import FinitePoset, MonoidAction, maps_leq, compose_maps
from .weights import INF


class FiniteComplex:
    """Simplicial complex of dimension <= 2 on vertices 0..n-1.

    Cells are sorted vertex tuples; vertices are always present as 1-tuples.
    """

    def __init__(self, n_vertices: int, simplices: Sequence[Sequence[int]] = (), validate: bool = True):
        self.n_vertices = int(n_vertices)
        cells = {(v,) for v in range(self.n_vertices)}
        for s in simplices:
            t = tuple(sorted(int(v) for v in s))
            if len(set(t)) != len(t) or not 1 <= len(t) <= 3:
                raise ValueError(f"bad simplex {s!r}")
            cells.add(t)
        self.cells = sorted(cells, key=lambda c: (len(c), c))
        self.index = {c: i for i, c in enumerate(self.cells)}
        if validate:
            for c in self.cells:
                if any(v >= self.n_vertices for v in c):
                    raise ValueError(f"simplex {c!r} uses an unknown vertex")
                for f in self.faces(c):
                    if f not in self.index:
                        raise ValueError(f"face {f!r} of {c!r} is missing")

    @staticmethod
    def faces(c) -> list[tuple]:
        if len(c) == 1:
            return []
        return [c[:i] + c[i + 1:] for i in range(len(c))]

    def dim(self, c) -> int:
        return len(c) - 1

    def boundary_matrix(self) -> np.ndarray:
        n = len(self.cells)
        B = np.zeros((n, n), dtype=np.uint8)
        for j, c in enumerate(self.cells):
            for f in self.faces(c):
                B[self.index[f], j] = 1
        return B

    def boundary_squared_is_zero(self) -> bool:
        B = self.boundary_matrix().astype(np.int64)
        return not np.any((B @ B) % 2)

    def to_text(self) -> str:
        higher = [c for c in self.cells if len(c) > 1]
        lines = [f"{self.n_vertices} {len(higher)}"] + [" ".join(map(str, c)) for c in higher]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FiniteComplex":
        rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        rows = [r for r in rows if r]
        try:
            nv, nc = int(rows[0][0]), int(rows[0][1])
            cells = [[int(x) for x in r] for r in rows[1:]]
        except (IndexError, ValueError) as exc:
            raise ParseError(f"bad complex header or cell: {exc}") from exc
        if len(cells) != nc:
            raise ParseError(f"expected {nc} cells, found {len(cells)}")
        try:
            return cls(nv, cells)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def grid_complex(rows: int, cols: int | None = None) -> FiniteComplex:
    """Freudenthal triangulation of a rows x cols vertex grid."""
    cols = rows if cols is None else cols
    vid = lambda i, j: i * cols + j  # noqa: E731
    cells = []
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                cells.append((vid(i, j), vid(i, j + 1)))
            if i + 1 < rows:
                cells.append((vid(i, j), vid(i + 1, j)))
            if i + 1 < rows and j + 1 < cols:
                a, b, c, d = vid(i, j), vid(i, j + 1), vid(i + 1, j), vid(i + 1, j + 1)
                cells += [(a, d), (a, b, d), (a, c, d)]
    return FiniteComplex(rows * cols, cells)


def cycle_complex(n: int) -> FiniteComplex:
    return FiniteComplex(n, [(i, (i + 1) % n) for i in range(n)])


@dataclass
class FilterFunction:
    """Vertex values in R (shape (n,)) or R^k (shape (n, k))."""

    values: np.ndarray
    cell_values: dict | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim not in (1, 2):
            raise ShapeMismatch("values must be (n,) or (n, k)")

    @property
    def vector(self) -> bool:
        return self.values.ndim == 2

    def value(self, c):
        if self.cell_values is not None and c in self.cell_values:
            return self.cell_values[c]
        v = self.values[list(c)]
        return v.max(axis=0) if self.vector else float(v.max())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for i, v in enumerate(self.values):
            w.writerow([i] + [repr(float(x)) for x in np.atleast_1d(v)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "FilterFunction":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        try:
            pairs = sorted((int(r[0]), [float(x) for x in r[1:]]) for r in rows)
        except (ValueError, IndexError) as exc:
            raise ParseError(f"bad function CSV: {exc}") from exc
        if [i for i, _ in pairs] != list(range(len(pairs))):
            raise ParseError("vertex ids must be 0..n-1")
        vals = [v for _, v in pairs]
        arr = np.array(vals, dtype=float)
        return cls(arr[:, 0] if arr.shape[1] == 1 else arr)


@dataclass
class Filtration:
    complex: FiniteComplex
    order: list            # cells in entrance order
    values: list           # entrance values, same order

    def sublevel(self, p) -> set:
        p = np.asarray(p, dtype=float)
        return {c for c, v in zip(self.order, self.values) if np.all(np.asarray(v) <= p)}


def sublevel_filtration(phi: FilterFunction, K: FiniteComplex) -> Filtration:
    """Cells ordered by (value, dimension, cell id); vector values use the
    lexicographic order of the componentwise max as the tie-breaking total order."""
    if len(phi.values) != K.n_vertices:
        raise ShapeMismatch("function and complex have different vertex counts")
    vals = {c: phi.value(c) for c in K.cells}
    for c in K.cells:
        for f in K.faces(c):
            if np.any(np.asarray(vals[f]) > np.asarray(vals[c])):
                raise NonSublevelClosed(f"cell {c!r} enters before its face {f!r}")

    def key(c):
        v = vals[c]
        return (tuple(np.atleast_1d(v)), len(c), K.index[c])
    order = sorted(K.cells, key=key)
    return Filtration(K, order, [vals[c] for c in order])


def persistent_homology(F: Filtration, degree: int) -> Barcode:
    """Barcode of H_degree over F2 (standard column reduction); zero-length bars dropped."""
    if degree not in (0, 1):
        raise UnsupportedDegree(f"degree {degree} not supported (only 0 and 1)")
    if any(np.ndim(v) for v in F.values):
        raise ShapeMismatch("persistent homology needs a real-valued filtration")
    pos = {c: i for i, c in enumerate(F.order)}
    cols = [sorted(pos[f] for f in F.complex.faces(c)) for c in F.order]
    low = _kernels.reduce_boundary(cols)
    dims = [len(c) - 1 for c in F.order]
    killed = {}
    for j, l in enumerate(low):
        if l >= 0:
            killed[l] = j
    paired_death = set(killed.values())
    bars = []
    for i, c in enumerate(F.order):
        if dims[i] != degree or i in paired_death:
            continue
        b = F.values[i]
        if i in killed:
            d = F.values[killed[i]]
            if d > b:
                bars.append((b, d))
        else:
            bars.append((b, math.inf))
    return Barcode(bars)


def union_find_barcode_0(phi: FilterFunction, K: FiniteComplex) -> Barcode:
    """Degree-0 barcode by the elder rule (independent of the matrix reduction)."""
    vals = phi.values
    parent = list(range(K.n_vertices))
    birth = [float(v) for v in vals]

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    edges = sorted((max(vals[a], vals[b]), a, b) for c in K.cells if len(c) == 2 for a, b in [c])
    bars = []
    for w, a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        # younger root dies; ties broken by vertex id for determinism
        if (birth[ra], ra) > (birth[rb], rb):
            ra, rb = rb, ra
        if w > birth[rb]:
            bars.append((birth[rb], float(w)))
        parent[rb] = ra
    roots = {find(v) for v in range(K.n_vertices)}
    bars += [(birth[r], math.inf) for r in roots]
    return Barcode(bars)


# ---------------------------------------------------------------- function distances

def _flow_closed(phi, psi) -> float:
    if len(phi) == 0:
        return 0.0
    return float(np.abs(phi - psi).max())


def function_interleaving_distance(phi: FilterFunction, psi: FilterFunction, action="flow",
                                   p: float = 2.0) -> DistanceResult:
    """inf max(W(g), W(h)) over pairs with phi <= g(psi) and psi <= h(phi) pointwise.

    ``action`` is "flow", "mult" (positive values, weight |log c|), "vector"
    (R^k values, shift vectors with p-norm weight) or a finite MonoidAction
    whose poset holds the function values.
    """
    a, b = phi.values, psi.values
    if a.shape != b.shape:
        raise ShapeMismatch("functions live on different vertex sets")
    if action == "flow":
        v = _flow_closed(a, b)
        return DistanceResult(v, v, v, None, "flow")
    if action in ("mult", "multiplicative"):
        if np.any(a <= 0) or np.any(b <= 0):
            raise UnsupportedAction("multiplicative action needs positive values")
        v = float(np.abs(np.log(a) - np.log(b)).max()) if len(a) else 0.0
        return DistanceResult(v, v, v, None, "mult")
    if action == "vector":
        if a.ndim != 2:
            raise ShapeMismatch("vector action needs (n, k) values")
        g = np.maximum(0, (a - b).max(axis=0))
        h = np.maximum(0, (b - a).max(axis=0))
        v = float(max(np.linalg.norm(g, ord=p), np.linalg.norm(h, ord=p)))
        return DistanceResult(v, v, v, None, f"vector(p={p:g})")
    if isinstance(action, MonoidAction) and action.elements is not None:
        return _finite_function_distance(a, b, action)
    raise UnsupportedAction(f"unsupported action {action!r}")


def _finite_function_distance(a, b, action: MonoidAction) -> DistanceResult:
    P: FinitePoset = action.poset
    av, bv = [int(x) for x in a], [int(x) for x in b]
    ident = action.act(action.identity)
    best = INF
    for g in action.elements:
        G = action.act(g)
        if not all(P.leq(x, G(y)) for x, y in zip(av, bv)):
            continue
        for h in action.elements:
            H = action.act(h)
            w = max(action.weight(g), action.weight(h))
            if w >= best or not all(P.leq(y, H(x)) for x, y in zip(av, bv)):
                continue
            if maps_leq(ident, compose_maps(H, G)) and maps_leq(ident, compose_maps(G, H)):
                best = w
    return DistanceResult(best, best, best, None, action.kind)


def function_distance_bisect(phi: FilterFunction, psi: FilterFunction, action: str = "flow",
                             tol: float = 1e-9) -> DistanceResult:
    """Bisection on the symmetric pair (g_u, g_u) using only the pointwise test."""
    a, b = phi.values, psi.values
    if action == "flow":
        ok = lambda u: bool(np.all(a <= b + u) and np.all(b <= a + u))  # noqa: E731
        span = float(np.abs(a).max() + np.abs(b).max()) if len(a) else 0.0
    elif action in ("mult", "multiplicative"):
        ok = lambda u: bool(np.all(a <= math.exp(u) * b) and np.all(b <= math.exp(u) * a))  # noqa: E731
        span = float(np.abs(np.log(a)).max() + np.abs(np.log(b)).max()) if len(a) else 0.0
    else:
        raise UnsupportedAction(f"no bisection oracle for {action!r}")
    if ok(0.0):
        return DistanceResult(0.0, 0.0, 0.0, None, action)
    lo, hi = 0.0, max(span, 1.0)
    while not ok(hi):
        hi *= 2
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return DistanceResult(hi, lo, hi, None, action)


# ---------------------------------------------------------------- stability experiment

@dataclass
class StabilityReport:
    rows: list = field(default_factory=list)   # (trial, degree, lhs, rhs, margin)
    violations: int = 0
    union_find_mismatches: int = 0
    trials: int = 0
    eps: float = 1e-9

    @property
    def max_ratio(self) -> float:
        r = [lhs / rhs for _, _, lhs, rhs, _ in self.rows if rhs > 0]
        return max(r, default=0.0)

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.union_find_mismatches == 0

    def satisfied_trials(self) -> int:
        bad = {t for t, _, lhs, rhs, _ in self.rows if lhs > rhs + self.eps}
        return self.trials - len(bad)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "degree", "lhs", "rhs", "margin"])
        for row in self.rows:
            w.writerow([row[0], row[1], repr(row[2]), repr(row[3]), repr(row[4])])
        return buf.getvalue()


def stability_experiment(trials: int = 200, grid: int = 10, noise: float = 0.1, action: str = "flow",
                         seed: int = 0, degrees: Sequence[int] = (0, 1), eps: float = 1e-9) -> StabilityReport:
    """Random phi on a grid, psi = phi + uniform noise; check d_B <= d(phi, psi) + eps.

    For the multiplicative action values are drawn in [1, 2], noise is
    multiplicative, and barcodes are compared on a log scale.
    """
    rng = np.random.default_rng(seed)
    K = grid_complex(grid)
    rep = StabilityReport(trials=trials, eps=eps)
    for t in range(trials):
        if action == "flow":
            a = rng.uniform(0, 1, K.n_vertices)
            b = a + rng.uniform(-noise, noise, K.n_vertices)
        elif action in ("mult", "multiplicative"):
            a = rng.uniform(1, 2, K.n_vertices)
            b = a * np.exp(rng.uniform(-noise, noise, K.n_vertices))
        else:
            raise UnsupportedAction(f"stability experiment supports flow or mult, not {action!r}")
        phi, psi = FilterFunction(a), FilterFunction(b)
        rhs = function_interleaving_distance(phi, psi, action).value
        Fa, Fb = sublevel_filtration(phi, K), sublevel_filtration(psi, K)
        for n in degrees:
            Ba, Bb = persistent_homology(Fa, n), persistent_homology(Fb, n)
            if action != "flow":
                Ba, Bb = Ba.map(math.log), Bb.map(math.log)
            lhs = bottleneck(Ba, Bb)
            rep.rows.append((t, n, lhs, rhs, rhs - lhs))
            if lhs > rhs + eps:
                rep.violations += 1
        if 0 in degrees:
            if persistent_homology(Fa, 0) != union_find_barcode_0(phi, K):
                rep.union_find_mismatches += 1
            if persistent_homology(Fb, 0) != union_find_barcode_0(psi, K):
                rep.union_find_mismatches += 1
    return rep


__all__ = [
    "FiniteComplex", "grid_complex", "cycle_complex", "FilterFunction", "Filtration",
    "sublevel_filtration", "persistent_homology", "union_find_barcode_0",
    "function_interleaving_distance", "function_distance_bisect", "StabilityReport",
    "stability_experiment",
]
