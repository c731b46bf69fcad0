"""Posets, monotone maps and monoid actions on posets.

Finite posets are explicit relation matrices over points ``0..n-1``.  The
parametric posets (the real line, the nonnegative half line and R^n with
the product order) only appear through tagged closed-form maps, so that
pointwise comparisons of maps can be decided exactly.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DomainMismatch, ParseError, Undecidable
from .weights import AuditReport, MonoidalWeight, additive_weight, log_weight, pnorm_weight


# ---------------------------------------------------------------- finite posets

class FinitePoset:
    """Finite preordered set on points 0..n-1.

    ``leq`` is closed reflexively and transitively on construction.
    Antisymmetry is not required.
    """

    def __init__(self, n: int, relations: Iterable[tuple[int, int]] = (), labels=None):
        self.n = int(n)
        m = np.eye(self.n, dtype=bool)
        for i, j in relations:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise DomainMismatch(f"relation {i} <= {j} outside 0..{self.n - 1}")
            m[i, j] = True
        # transitive closure (Warshall)
        for k in range(self.n):
            m |= m[:, k:k + 1] & m[k:k + 1, :]
        m.setflags(write=False)
        self._leq = m
        self.labels = list(labels) if labels is not None else list(range(self.n))
        self._covers = None
        self._hasse = None

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def matrix(self) -> np.ndarray:
        return self._leq

    def leq(self, p: int, q: int) -> bool:
        return bool(self._leq[p, q])

    def contains(self, p) -> bool:
        return isinstance(p, (int, np.integer)) and 0 <= p < self.n

    def is_antisymmetric(self) -> bool:
        both = self._leq & self._leq.T
        return bool((both == np.eye(self.n, dtype=bool)).all())

    def comparable_pairs(self) -> list[tuple[int, int]]:
        return [(int(p), int(q)) for p, q in zip(*np.nonzero(self._leq)) if p != q]

    def covers(self) -> list[tuple[int, int]]:
        """Generating pairs p < q: every comparable pair is a chain of these.

        For a genuine preorder we also keep pairs inside an equivalence class
        so that the generated relation is the whole order.
        """
        if self._covers is None:
            L = self._leq
            out = []
            for p, q in self.comparable_pairs():
                if L[q, p]:
                    out.append((p, q))
                    continue
                between = L[p, :] & L[:, q] & ~L[:, p] & ~L[q, :]
                if not between.any():
                    out.append((p, q))
            self._covers = out
        return self._covers

    def hasse_distance(self) -> np.ndarray:
        """Length of the shortest chain of strict covers from p up to q (inf if p not <= q)."""
        if self._hasse is None:
            n = self.n
            d = np.full((n, n), np.inf)
            np.fill_diagonal(d, 0.0)
            for p, q in self.covers():
                d[p, q] = min(d[p, q], 0.0 if self._leq[q, p] else 1.0)
            for k in range(n):
                d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
            d.setflags(write=False)
            self._hasse = d
        return self._hasse

    def join(self, ps: Sequence[int]) -> int:
        """Least upper bound of ``ps`` (unique up to equivalence; lowest id returned)."""
        ups = [u for u in range(self.n) if all(self._leq[p, u] for p in ps)]
        least = [u for u in ups if all(self._leq[u, v] for v in ups)]
        if not least:
            raise DomainMismatch(f"points {list(ps)} have no join")
        return least[0]

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.n == other.n and bool((self._leq == other._leq).all())

    def __hash__(self):
        return hash((self.n, self._leq.tobytes()))

    def __repr__(self):
        return f"FinitePoset(n={self.n}, covers={self.covers()})"

    # -- text format
    def to_text(self) -> str:
        lines = [f"POSET {self.n}"]
        lines += [f"{p} <= {q}" for p, q in self.covers()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FinitePoset":
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ParseError("empty poset description")
        head = lines[0].split()
        if len(head) != 2 or head[0] != "POSET":
            raise ParseError(f"expected 'POSET n', got {lines[0]!r}")
        try:
            n = int(head[1])
        except ValueError as exc:
            raise ParseError(f"bad point count {head[1]!r}") from exc
        rels = []
        for ln in lines[1:]:
            m = re.fullmatch(r"(\d+)\s*(?:<=|≤)\s*(\d+)", ln)
            if not m:
                raise ParseError(f"bad relation line {ln!r}")
            rels.append((int(m.group(1)), int(m.group(2))))
        try:
            return cls(n, rels)
        except DomainMismatch as exc:
            raise ParseError(str(exc)) from exc


def chain(n: int) -> FinitePoset:
    """The totally ordered set 0 < 1 < ... < n-1."""
    return FinitePoset(n, [(i, i + 1) for i in range(n - 1)])


def grid_poset(shape: Sequence[int]) -> FinitePoset:
    """Product of chains, points numbered in C order."""
    shape = tuple(int(s) for s in shape)
    idx = np.arange(int(np.prod(shape))).reshape(shape)
    rels = []
    for axis in range(len(shape)):
        lo = [slice(None)] * len(shape)
        hi = [slice(None)] * len(shape)
        lo[axis] = slice(0, shape[axis] - 1)
        hi[axis] = slice(1, None)
        rels += list(zip(idx[tuple(lo)].ravel().tolist(), idx[tuple(hi)].ravel().tolist()))
    return FinitePoset(len(idx.ravel()), rels)


# ---------------------------------------------------------------- parametric posets

@dataclass(frozen=True)
class ParamPoset:
    kind: str  # "real", "nonneg" or "product"
    n: int = 1

    def contains(self, p) -> bool:
        a = np.asarray(p, dtype=float)
        if self.kind == "product":
            return a.shape == (self.n,) and bool(np.isfinite(a).all())
        if a.ndim != 0 or not math.isfinite(float(a)):
            return False
        return self.kind == "real" or float(a) >= 0

    def leq(self, p, q) -> bool:
        return bool(np.all(np.asarray(p, dtype=float) <= np.asarray(q, dtype=float)))


REAL = ParamPoset("real")
NONNEG = ParamPoset("nonneg")


def product_poset(n: int) -> ParamPoset:
    return ParamPoset("product", int(n))


# ---------------------------------------------------------------- monotone maps

class MonotoneMap:
    domain = None
    tag = "generic"

    def __call__(self, p):
        raise NotImplementedError

    def compose(self, other: "MonotoneMap") -> "MonotoneMap":
        """self after other."""
        return compose_maps(self, other)


class FiniteMap(MonotoneMap):
    tag = "finite"

    def __init__(self, poset: FinitePoset, table: Sequence[int]):
        table = tuple(int(x) for x in table)
        if len(table) != poset.n or any(not 0 <= x < poset.n for x in table):
            raise DomainMismatch("map table must send every point into the poset")
        self.domain = poset
        self.table = table

    def __call__(self, p):
        if not self.domain.contains(p):
            raise DomainMismatch(f"{p!r} is not a point of the poset")
        return self.table[p]

    def is_translation(self) -> bool:
        return all(self.domain.leq(p, q) for p, q in enumerate(self.table))

    def __eq__(self, other):
        return isinstance(other, FiniteMap) and other.table == self.table and other.domain == self.domain

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteMap({list(self.table)})"


@dataclass(frozen=True)
class Shift(MonotoneMap):
    """p -> p + t on the real line."""

    t: float
    tag = "shift"

    @property
    def domain(self):
        return REAL

    def __call__(self, p):
        return p + self.t

    def inverse_point(self, x):
        return x - self.t


@dataclass(frozen=True)
class Scale(MonotoneMap):
    """p -> c p on the nonnegative half line (c > 0)."""

    c: float
    tag = "scale"

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("multiplicative factor must be positive")

    @property
    def domain(self):
        return NONNEG

    def __call__(self, p):
        return self.c * p

    def inverse_point(self, x):
        return x / self.c


class VectorShift(MonotoneMap):
    """r -> r + v on R^n with the product order."""

    tag = "vshift"

    def __init__(self, v):
        self.v = np.asarray(v, dtype=float).ravel()
        self.v.setflags(write=False)
        self.domain = product_poset(len(self.v))

    def __call__(self, p):
        return np.asarray(p, dtype=float) + self.v

    def inverse_point(self, x):
        return np.asarray(x, dtype=float) - self.v

    def __eq__(self, other):
        return isinstance(other, VectorShift) and np.array_equal(self.v, other.v)

    def __hash__(self):
        return hash(self.v.tobytes())

    def __repr__(self):
        return f"VectorShift({self.v.tolist()})"


class PLMap(MonotoneMap):
    """Nondecreasing piecewise-linear map R -> R.

    Given by breakpoints ``xs`` (strictly increasing) and values ``ys``
    (nondecreasing); outside the breakpoints the end segments are extended
    with ``left_slope`` and ``right_slope`` (default 1, i.e. a translation).
    """

    tag = "pl"
    domain = REAL

    def __init__(self, xs, ys, left_slope: float = 1.0, right_slope: float = 1.0):
        self.xs = tuple(float(x) for x in xs)
        self.ys = tuple(float(y) for y in ys)
        if len(self.xs) != len(self.ys) or not self.xs:
            raise ValueError("need matching nonempty breakpoint lists")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("breakpoints must increase strictly")
        if any(b < a for a, b in zip(self.ys, self.ys[1:])) or left_slope < 0 or right_slope < 0:
            raise ValueError("PL map must be nondecreasing")
        self.left_slope = float(left_slope)
        self.right_slope = float(right_slope)

    def __call__(self, p):
        p = float(p)
        xs, ys = self.xs, self.ys
        if p <= xs[0]:
            return ys[0] + self.left_slope * (p - xs[0])
        if p >= xs[-1]:
            return ys[-1] + self.right_slope * (p - xs[-1])
        return float(np.interp(p, xs, ys))

    def __repr__(self):
        return f"PLMap({list(self.xs)}, {list(self.ys)})"


def as_pl(m) -> PLMap | None:
    if isinstance(m, PLMap):
        return m
    if isinstance(m, Shift):
        return PLMap([0.0], [m.t])
    return None


class _Composite(MonotoneMap):
    tag = "composite"

    def __init__(self, outer, inner):
        self.outer, self.inner = outer, inner
        self.domain = inner.domain

    def __call__(self, p):
        return self.outer(self.inner(p))


class CallableMap(MonotoneMap):
    """An arbitrary monotone function, trusted but not decidable."""

    tag = "generic"

    def __init__(self, domain, fn: Callable):
        self.domain = domain
        self.fn = fn

    def __call__(self, p):
        return self.fn(p)


def compose_maps(outer: MonotoneMap, inner: MonotoneMap) -> MonotoneMap:
    if isinstance(outer, Shift) and isinstance(inner, Shift):
        return Shift(outer.t + inner.t)
    if isinstance(outer, Scale) and isinstance(inner, Scale):
        return Scale(outer.c * inner.c)
    if isinstance(outer, VectorShift) and isinstance(inner, VectorShift):
        return VectorShift(outer.v + inner.v)
    if isinstance(outer, FiniteMap) and isinstance(inner, FiniteMap):
        return FiniteMap(inner.domain, [outer.table[x] for x in inner.table])
    return _Composite(outer, inner)


def identity_map(domain) -> MonotoneMap:
    if isinstance(domain, FinitePoset):
        return FiniteMap(domain, range(domain.n))
    if domain == REAL:
        return Shift(0.0)
    if domain == NONNEG:
        return Scale(1.0)
    return VectorShift(np.zeros(domain.n))


def translations(poset: FinitePoset) -> list[FiniteMap]:
    """All monotone maps g with p <= g(p) for every p (the monoid Trans_P)."""
    n = poset.n
    L = poset.matrix
    ups = [[q for q in range(n) if L[p, q]] for p in range(n)]
    out = []
    for table in itertools.product(*ups):
        if all(L[table[p], table[q]] for p, q in poset.covers()):
            out.append(FiniteMap(poset, table))
    return out


def omega_weight(poset: FinitePoset) -> MonoidalWeight:
    """Sublinear projection omega(g) = max_p hasse_distance(p, g(p))."""
    d = poset.hasse_distance()

    def w(g: FiniteMap) -> float:
        return float(max((d[p, q] for p, q in enumerate(g.table)), default=0.0))
    return MonoidalWeight(w, "omega")


# ---------------------------------------------------------------- actions

class MonoidAction:
    """A monoid acting on a poset by monotone maps.

    ``elements`` is a finite list for finite actions and None for parametric
    families.  ``mul(h, g)`` is the element acting as act(h) after act(g).
    """

    def __init__(self, kind: str, poset, act: Callable, mul: Callable, identity,
                 weight: MonoidalWeight, elements: Sequence | None = None):
        self.kind = kind
        self.poset = poset
        self.act = act
        self.mul = mul
        self.identity = identity
        self.weight = weight
        self.elements = list(elements) if elements is not None else None

    def __repr__(self):
        return f"MonoidAction({self.kind!r})"


def flow_action() -> MonoidAction:
    """(R>=0, +) acting on R by shifts."""
    return MonoidAction("flow", REAL, Shift, lambda h, g: h + g, 0.0, additive_weight)


def flow_group_action() -> MonoidAction:
    """(R, +) acting on R by shifts, weight |t|."""
    return MonoidAction("flow_group", REAL, Shift, lambda h, g: h + g, 0.0,
                        MonoidalWeight(lambda t: abs(float(t)), "|t|"))


def multiplicative_action() -> MonoidAction:
    """(R>0, x) acting on R>=0 by scaling, weight |log c|."""
    return MonoidAction("mult", NONNEG, Scale, lambda h, g: h * g, 1.0, log_weight)


def vector_shift_action(n: int, p: float = 2.0) -> MonoidAction:
    """(R^n>=0, +) acting on R^n by shifts, weight the p-norm."""
    return MonoidAction("vshift", product_poset(n), VectorShift,
                        lambda h, g: np.asarray(h, dtype=float) + np.asarray(g, dtype=float),
                        np.zeros(n), pnorm_weight(p))


def finite_action(poset: FinitePoset, maps: Sequence[FiniteMap], weight: MonoidalWeight) -> MonoidAction:
    """Action whose elements are the given maps themselves, under composition."""
    return MonoidAction("finite", poset, lambda g: g, compose_maps, identity_map(poset), weight, maps)


def translation_action(poset: FinitePoset) -> MonoidAction:
    return finite_action(poset, translations(poset), omega_weight(poset))


# ---------------------------------------------------------------- checks

def _check_point(domain, p):
    if domain is not None and not domain.contains(p):
        raise DomainMismatch(f"{p!r} is not a point of {domain!r}")


def verify_monotone(m: MonotoneMap, sample: Iterable[tuple]) -> AuditReport:
    rep = AuditReport()
    dom = m.domain
    for p, q in sample:
        _check_point(dom, p)
        _check_point(dom, q)
        if not dom.leq(p, q):
            continue
        rep.checked += 1
        if not dom.leq(m(p), m(q)):
            rep.add("MONOTONE", (p, q), 1.0, 0.0)
    return rep


def verify_action(a: MonoidAction, element_sample: Sequence, point_sample: Sequence) -> AuditReport:
    """Check e(p) = p and h(g(p)) = (hg)(p) on the sample grid."""
    rep = AuditReport()
    e = a.act(a.identity)
    for p in point_sample:
        rep.checked += 1
        if not _point_eq(e(p), p):
            rep.add("IDENTITY_ACTS", p, 1.0, 0.0)
    for g in element_sample:
        for h in element_sample:
            hg = a.act(a.mul(h, g))
            ag, ah = a.act(g), a.act(h)
            for p in point_sample:
                rep.checked += 1
                lhs, rhs = ah(ag(p)), hg(p)
                if not _point_eq(lhs, rhs):
                    rep.add("COMPATIBLE", (h, g, p), 1.0, 0.0)
    return rep


def _point_eq(a, b) -> bool:
    return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-12, atol=1e-12))


def maps_leq(g: MonotoneMap, h: MonotoneMap, sample_points=None) -> bool:
    """Decide g(p) <= h(p) for all p, exactly where a closed form exists."""
    if isinstance(g, Shift) and isinstance(h, Shift):
        return g.t <= h.t
    if isinstance(g, Scale) and isinstance(h, Scale):
        return g.c <= h.c
    if isinstance(g, VectorShift) and isinstance(h, VectorShift):
        return bool(np.all(g.v <= h.v))
    if isinstance(g, FiniteMap) and isinstance(h, FiniteMap):
        P = g.domain
        return all(P.leq(g.table[p], h.table[p]) for p in range(P.n))
    pg, ph = as_pl(g), as_pl(h)
    if pg is not None and ph is not None:
        # h - g is piecewise linear: check every breakpoint and both tails
        xs = sorted(set(pg.xs) | set(ph.xs))
        if any(pg(x) > ph(x) + 1e-12 for x in xs):
            return False
        return pg.left_slope >= ph.left_slope and pg.right_slope <= ph.right_slope
    if isinstance(g.domain, FinitePoset):
        P = g.domain
        return all(P.leq(g(p), h(p)) for p in range(P.n))
    if sample_points is None:
        raise Undecidable("no closed form for this pair of maps; supply sample points")
    dom = g.domain
    return all(dom.leq(g(p), h(p)) for p in sample_points)


def two_morphism_exists(a: MonoidAction, g, h, sample_points=None) -> bool:
    """True iff there is a 2-morphism g => h, i.e. g(p) <= h(p) for every p."""
    return maps_leq(a.act(g), a.act(h), sample_points)


__all__ = [
    "FinitePoset", "chain", "grid_poset", "ParamPoset", "REAL", "NONNEG", "product_poset",
    "MonotoneMap", "FiniteMap", "Shift", "Scale", "VectorShift", "PLMap", "CallableMap",
    "compose_maps", "identity_map", "translations", "omega_weight", "MonoidAction",
    "flow_action", "flow_group_action", "multiplicative_action", "vector_shift_action",
    "finite_action", "translation_action", "verify_monotone", "verify_action",
    "maps_leq", "two_morphism_exists",
]
