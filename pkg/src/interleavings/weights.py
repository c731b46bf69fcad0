"""Weights on monoids and 2-categories, and audits of metric axioms.

Weight values are nonnegative floats or ``math.inf``.  IEEE infinity is
saturating under addition and ordered correctly under max/min, which is
all the arithmetic the library needs.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import MalformedCategory

INF = math.inf
DEFAULT_TOL = 1e-9
EXHAUSTIVE_LIMIT = 30
DEFAULT_SAMPLES = 10_000


def wadd(a: float, b: float) -> float:
    """Saturating sum of two weight values."""
    if a == INF or b == INF:
        return INF
    return a + b


def check_weight_value(v) -> float:
    v = float(v)
    if math.isnan(v) or v < 0:
        raise ValueError(f"weight values must be nonnegative or +inf, got {v!r}")
    return v


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: str
    lhs: float
    rhs: float

    def to_line(self) -> str:
        return f"{self.axiom}\t{self.witness}\t{self.lhs!r}\t{self.rhs!r}"


@dataclass
class AuditReport:
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    def add(self, axiom, witness, lhs, rhs):
        self.violations.append(Violation(axiom, str(witness), float(lhs), float(rhs)))

    def extend(self, other: "AuditReport"):
        self.violations.extend(other.violations)
        self.checked += other.checked

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        # truthy when there is something to report
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def to_text(self) -> str:
        return "".join(v.to_line() + "\n" for v in self.violations)

    @classmethod
    def from_text(cls, text: str) -> "AuditReport":
        rep = cls()
        for line in text.splitlines():
            if not line.strip():
                continue
            axiom, witness, lhs, rhs = line.split("\t")
            rep.add(axiom, witness, float(lhs), float(rhs))
        return rep


def _leq(a: float, b: float, tol: float) -> bool:
    if a == INF:
        return b == INF
    if b == INF:
        return True
    return a <= b + tol


# ---------------------------------------------------------------- monoidal weights

@dataclass(frozen=True)
class MonoidalWeight:
    """A named weight function on monoid elements."""

    fn: Callable[[Any], float]
    name: str = "W"

    def __call__(self, g) -> float:
        return float(self.fn(g))


def _additive(t):
    return float(t)


def _log_abs(t):
    return abs(math.log(t))


additive_weight = MonoidalWeight(_additive, "t")
log_weight = MonoidalWeight(_log_abs, "|log t|")


def pnorm_weight(p: float = 2.0) -> MonoidalWeight:
    def w(v):
        return float(np.linalg.norm(np.asarray(v, dtype=float).ravel(), ord=p))
    return MonoidalWeight(w, f"||v||_{p:g}")


def table_weight(values: Mapping[Hashable, float], name="table") -> MonoidalWeight:
    values = dict(values)
    return MonoidalWeight(values.__getitem__, name)


def _same(a, b) -> bool:
    try:
        return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=0, atol=1e-12))
    except (TypeError, ValueError):
        return a == b


def _find_identity(elements, mul):
    for e in elements:
        if all(_same(mul(e, x), x) and _same(mul(x, e), x) for x in elements):
            return e
    return None


def _pairs(n: int, samples: int, seed: int):
    if n <= EXHAUSTIVE_LIMIT:
        return itertools.product(range(n), repeat=2)
    rng = random.Random(seed)
    return ((rng.randrange(n), rng.randrange(n)) for _ in range(samples))


def audit_monoidal_weight(W, elements: Sequence, mul: Callable, identity=None,
                          tol: float = DEFAULT_TOL, samples: int = DEFAULT_SAMPLES,
                          seed: int = 0) -> AuditReport:
    """Check W(e) = 0, W >= 0 and W(g*f) <= W(g) + W(f) on the sample."""
    rep = AuditReport()
    elements = list(elements)
    if identity is None:
        identity = _find_identity(elements, mul)
    if identity is not None:
        we = W(identity)
        rep.checked += 1
        if abs(we) > tol:
            rep.add("IDENTITY_ZERO", identity, we, 0.0)
    for x in elements:
        wx = W(x)
        rep.checked += 1
        if wx < -tol or math.isnan(wx):
            rep.add("NONNEGATIVE", x, wx, 0.0)
    for i, j in _pairs(len(elements), samples, seed):
        g, f = elements[i], elements[j]
        lhs = W(mul(g, f))
        rhs = wadd(W(g), W(f))
        rep.checked += 1
        if not _leq(lhs, rhs, tol):
            rep.add("SUBADDITIVE", (g, f), lhs, rhs)
    return rep


# ---------------------------------------------------------------- pseudometrics

def audit_pseudometric(d: Callable[[Any, Any], float], points: Sequence,
                       tol: float = DEFAULT_TOL, samples: int = DEFAULT_SAMPLES,
                       seed: int = 0) -> AuditReport:
    """Check d(x,x)=0, symmetry and the triangle inequality.

    Exhaustive over all triples when there are at most 30 points, otherwise a
    seeded sample of ``samples`` triples.  Distances are cached by index.
    """
    points = list(points)
    n = len(points)
    cache: dict[tuple[int, int], float] = {}

    def dist(i, j):
        key = (i, j)
        if key not in cache:
            cache[key] = float(d(points[i], points[j]))
        return cache[key]

    rep = AuditReport()
    if n <= EXHAUSTIVE_LIMIT:
        triples: Iterable = itertools.product(range(n), repeat=3)
        singles: Iterable = range(n)
        pairs: Iterable = itertools.combinations(range(n), 2)
    else:
        rng = random.Random(seed)
        triples = [(rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples)]
        singles = sorted({t[0] for t in triples})
        pairs = sorted({(min(a, b), max(a, b)) for a, b, _ in triples if a != b})
    for i in singles:
        v = dist(i, i)
        rep.checked += 1
        if not (abs(v) <= tol):
            rep.add("IDENTITY", i, v, 0.0)
    for i, j in pairs:
        a, b = dist(i, j), dist(j, i)
        rep.checked += 1
        if not (a == b or abs(a - b) <= tol):
            rep.add("SYMMETRY", (i, j), a, b)
    for i, j, k in triples:
        if i == k or j in (i, k):
            continue
        lhs = dist(i, k)
        rhs = wadd(dist(i, j), dist(j, k))
        rep.checked += 1
        if not _leq(lhs, rhs, tol):
            rep.add("TRIANGLE", (i, j, k), lhs, rhs)
    return rep


# ---------------------------------------------------------------- Lawvere 2-weights

def _lookup(w):
    if callable(w):
        return w
    return w.__getitem__


class Lawvere2Weight:
    """Pair (w1, w2) of weights on 1- and 2-morphisms (dicts or callables)."""

    def __init__(self, w1, w2=None):
        self._w1 = _lookup(w1)
        self._w2 = _lookup(w2) if w2 is not None else (lambda a: 0.0)

    def w1(self, f) -> float:
        return float(self._w1(f))

    def w2(self, a) -> float:
        return float(self._w2(a))

    def scaled(self, c: float) -> "Lawvere2Weight":
        return Lawvere2Weight(lambda f: c * self.w1(f), lambda a: c * self.w2(a))

    @classmethod
    def zero(cls):
        return cls(lambda f: 0.0, lambda a: 0.0)


def audit_lawvere_2_weight(W: Lawvere2Weight, cat, tol: float = DEFAULT_TOL,
                           strict: bool = True) -> AuditReport:
    """Exhaustive check of the Lawvere 2-weight axioms on a finite 2-category.

    With ``strict`` a missing composite of a composable pair raises
    MalformedCategory; otherwise such pairs are skipped.
    """
    rep = AuditReport()

    def missing(kind, pair):
        if strict:
            raise MalformedCategory(f"{kind} undefined on composable pair {pair!r}")

    for A in cat.objects:
        v = W.w1(cat.id1(A))
        rep.checked += 1
        if abs(v) > tol:
            rep.add("W1_IDENTITY", cat.id1(A), v, 0.0)
    for f in cat.mor1:
        v = W.w2(cat.id2(f))
        rep.checked += 1
        if abs(v) > tol:
            rep.add("W2_IDENTITY", cat.id2(f), v, 0.0)
        if W.w1(f) < -tol:
            rep.add("NONNEGATIVE", f, W.w1(f), 0.0)
    for a in cat.mor2:
        if W.w2(a) < -tol:
            rep.add("NONNEGATIVE", a, W.w2(a), 0.0)
    for g in cat.mor1:
        for f in cat.into(cat.src1(g)):
            gf = cat.comp1(g, f)
            if gf is None:
                missing("compose1", (g, f))
                continue
            lhs, rhs = W.w1(gf), wadd(W.w1(g), W.w1(f))
            rep.checked += 1
            if not _leq(lhs, rhs, tol):
                rep.add("W1_COMPOSE", (g, f), lhs, rhs)
    for b in cat.mor2:
        for a in cat.cells_into(cat.src2(b)):
            ba = cat.vcomp(b, a)
            if ba is None:
                missing("vcompose", (b, a))
                continue
            lhs, rhs = W.w2(ba), wadd(W.w2(b), W.w2(a))
            rep.checked += 1
            if not _leq(lhs, rhs, tol):
                rep.add("W2_VERTICAL", (b, a), lhs, rhs)
    for b in cat.mor2:
        for a in cat.cells_between_into(cat.src1(cat.src2(b))):
            ba = cat.hcomp(b, a)
            if ba is None:
                missing("hcompose", (b, a))
                continue
            lhs, rhs = W.w2(ba), wadd(W.w2(b), W.w2(a))
            rep.checked += 1
            if not _leq(lhs, rhs, tol):
                rep.add("W2_HORIZONTAL", (b, a), lhs, rhs)
    return rep


__all__ = [
    "INF", "DEFAULT_TOL", "wadd", "Violation", "AuditReport", "MonoidalWeight",
    "additive_weight", "log_weight", "pnorm_weight", "table_weight",
    "audit_monoidal_weight", "audit_pseudometric", "Lawvere2Weight",
    "audit_lawvere_2_weight",
]
