"""Finite 2-categories with Lawvere 2-weights and their interleaving distances.

A ``Finite2Category`` is a set of tables.  Composites may be given as dicts
or as callables; ``None`` means "undefined", which the validator reports.
Labels of cells are arbitrary hashables.
"""
from __future__ import annotations

import heapq
import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import MalformedCategory, MalformedLPC, NotAFunctor, ParseError, ShapeMismatch, SizeCap
from .interleave import DistanceResult
from .posets import FinitePoset
from .weights import INF, AuditReport, Lawvere2Weight, MonoidalWeight

ACTION_GROUPOID_CAP = 10_000


def _table(t):
    if t is None:
        return lambda *k: None
    if callable(t):
        return t
    return lambda *k: t.get(k)


class Finite2Category:
    """Strict 2-category given by finite tables.

    mor1: {f: (source, target)}, id1: {A: f}, compose1[(g, f)] = g.f,
    mor2: {a: (f, g)} meaning a: f => g, id2: {f: a},
    vcompose[(b, a)] = b.a (a first), hcompose[(b, a)] = b * a with a
    between 1-morphisms A -> B and b between B -> C.
    """

    def __init__(self, objects: Iterable, mor1: Mapping, id1: Mapping, compose1,
                 mor2: Mapping, id2: Mapping, vcompose, hcompose, name: str = ""):
        self.objects = list(objects)
        self._mor1 = dict(mor1)
        self._id1 = dict(id1)
        self._mor2 = dict(mor2)
        self._id2 = dict(id2)
        self._c1 = _table(compose1)
        self._v = _table(vcompose)
        self._h = _table(hcompose)
        self.name = name
        self._hom = defaultdict(list)
        self._into = defaultdict(list)
        self._out = defaultdict(list)
        for f, (A, B) in self._mor1.items():
            self._hom[(A, B)].append(f)
            self._into[B].append(f)
            self._out[A].append(f)
        self._cells = defaultdict(list)
        self._cells_into = defaultdict(list)
        self._cells_from = defaultdict(list)
        self._between_into = defaultdict(list)
        self._between_from = defaultdict(list)
        for a, (f, g) in self._mor2.items():
            self._cells[(f, g)].append(a)
            self._cells_into[g].append(a)
            self._cells_from[f].append(a)
            self._between_into[self._mor1[f][1]].append(a)
            self._between_from[self._mor1[f][0]].append(a)
        self._min_cell: dict = {}
        self._weights_seen: dict = {}

    # the interface used by the weight audits
    @property
    def mor1(self):
        return list(self._mor1)

    @property
    def mor2(self):
        return list(self._mor2)

    def id1(self, A):
        return self._id1[A]

    def id2(self, f):
        return self._id2[f]

    def src1(self, f):
        return self._mor1[f][0]

    def tgt1(self, f):
        return self._mor1[f][1]

    def src2(self, a):
        return self._mor2[a][0]

    def tgt2(self, a):
        return self._mor2[a][1]

    def hom(self, A, B) -> list:
        return self._hom.get((A, B), [])

    def cells(self, f, g) -> list:
        return self._cells.get((f, g), [])

    def into(self, B) -> list:
        return self._into.get(B, [])

    def cells_into(self, f) -> list:
        return self._cells_into.get(f, [])

    def cells_from(self, f) -> list:
        return self._cells_from.get(f, [])

    def cells_between_into(self, B) -> list:
        return self._between_into.get(B, [])

    def out_of(self, A) -> list:
        return self._out.get(A, [])

    def cells_between_from(self, A) -> list:
        return self._between_from.get(A, [])

    def comp1(self, g, f):
        if g not in self._mor1 or f not in self._mor1 or self.src1(g) != self.tgt1(f):
            return None
        return self._c1(g, f)

    def vcomp(self, b, a):
        if b not in self._mor2 or a not in self._mor2 or self.src2(b) != self.tgt2(a):
            return None
        return self._v(b, a)

    def hcomp(self, b, a):
        if b not in self._mor2 or a not in self._mor2 or self.src1(self.src2(b)) != self.tgt1(self.src2(a)):
            return None
        return self._h(b, a)

    def size(self) -> tuple[int, int, int]:
        return len(self.objects), len(self._mor1), len(self._mor2)

    def __repr__(self):
        o, m, c = self.size()
        return f"Finite2Category({self.name!r}, {o} objects, {m} 1-morphisms, {c} 2-morphisms)"

    # ---------------------------------------------------------- text format

    def to_text(self, W: Lawvere2Weight | None = None) -> str:
        W = W or Lawvere2Weight.zero()
        on = {A: f"o{i}" for i, A in enumerate(self.objects)}
        mn = {f: f"f{i}" for i, f in enumerate(self._mor1)}
        cn = {a: f"a{i}" for i, a in enumerate(self._mor2)}
        lines = ["OBJECTS"]
        lines += [f"{on[A]} {mn[self._id1[A]]}" for A in self.objects]
        lines.append("MOR1")
        for f, (A, B) in self._mor1.items():
            lines.append(f"{mn[f]} {on[A]} {on[B]} {W.w1(f)!r} {cn[self._id2[f]]}")
        lines.append("COMPOSE1")
        for g in self._mor1:
            for f in self.into(self.src1(g)):
                gf = self.comp1(g, f)
                if gf is not None:
                    lines.append(f"{mn[g]} {mn[f]} {mn[gf]}")
        lines.append("MOR2")
        for a, (f, g) in self._mor2.items():
            lines.append(f"{cn[a]} {mn[f]} {mn[g]} {W.w2(a)!r}")
        lines.append("VCOMP")
        for b in self._mor2:
            for a in self.cells_into(self.src2(b)):
                ba = self.vcomp(b, a)
                if ba is not None:
                    lines.append(f"{cn[b]} {cn[a]} {cn[ba]}")
        lines.append("HCOMP")
        for b in self._mor2:
            for a in self.cells_between_into(self.src1(self.src2(b))):
                ba = self.hcomp(b, a)
                if ba is not None:
                    lines.append(f"{cn[b]} {cn[a]} {cn[ba]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple["Finite2Category", Lawvere2Weight]:
        sections = {"OBJECTS": [], "MOR1": [], "COMPOSE1": [], "MOR2": [], "VCOMP": [], "HCOMP": []}
        cur = None
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line in sections:
                cur = line
                continue
            if cur is None:
                raise ParseError(f"content before first section: {line!r}")
            sections[cur].append(line.split())
        try:
            objects = [r[0] for r in sections["OBJECTS"]]
            id1 = {r[0]: r[1] for r in sections["OBJECTS"]}
            mor1 = {r[0]: (r[1], r[2]) for r in sections["MOR1"]}
            w1 = {r[0]: float(r[3]) for r in sections["MOR1"]}
            id2 = {r[0]: r[4] for r in sections["MOR1"]}
            comp = {(r[0], r[1]): r[2] for r in sections["COMPOSE1"]}
            mor2 = {r[0]: (r[1], r[2]) for r in sections["MOR2"]}
            w2 = {r[0]: float(r[3]) for r in sections["MOR2"]}
            vc = {(r[0], r[1]): r[2] for r in sections["VCOMP"]}
            hc = {(r[0], r[1]): r[2] for r in sections["HCOMP"]}
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed 2-category text: {exc}") from exc
        for f, (A, B) in mor1.items():
            if A not in id1 or B not in id1:
                raise ParseError(f"1-morphism {f} has unknown endpoints")
        for a, (f, g) in mor2.items():
            if f not in mor1 or g not in mor1:
                raise ParseError(f"2-morphism {a} has unknown endpoints")
        C = cls(objects, mor1, id1, comp, mor2, id2, vc, hc)
        return C, Lawvere2Weight(w1, w2)


# ---------------------------------------------------------------- validation

def validate_2category(C: Finite2Category) -> AuditReport:
    """Exhaustive check of the strict 2-category axioms.

    Undefined composites of composable pairs are reported as
    UNDEFINED_COMPOSE1 / UNDEFINED_VCOMP / UNDEFINED_HCOMP.
    """
    rep = AuditReport()

    def bad(axiom, witness):
        rep.add(axiom, witness, 1.0, 0.0)

    for A in C.objects:
        i = C.id1(A)
        rep.checked += 1
        if C._mor1.get(i) != (A, A):
            bad("ID1_TYPE", A)
    for f in C.mor1:
        A, B = C._mor1[f]
        rep.checked += 1
        if C.comp1(f, C.id1(A)) != f or C.comp1(C.id1(B), f) != f:
            bad("ID1_UNIT", f)
        e = C._id2.get(f)
        if e is None or C._mor2.get(e) != (f, f):
            bad("ID2_TYPE", f)
    # 1-composition: typing and associativity
    for g in C.mor1:
        for f in C.into(C.src1(g)):
            gf = C.comp1(g, f)
            rep.checked += 1
            if gf is None:
                bad("UNDEFINED_COMPOSE1", (g, f))
                continue
            if C._mor1.get(gf) != (C.src1(f), C.tgt1(g)):
                bad("COMPOSE1_TYPE", (g, f))
                continue
            for h in C.out_of(C.tgt1(g)):
                hg, hgf = C.comp1(h, g), C.comp1(h, gf)
                if hg is None or hgf is None:
                    continue
                rep.checked += 1
                if C.comp1(hg, f) != hgf:
                    bad("ASSOC1", (h, g, f))
    # vertical composition
    for b in C.mor2:
        rep.checked += 1
        f, g = C._mor2[b]
        if C.vcomp(b, C._id2.get(f)) != b or C.vcomp(C._id2.get(g), b) != b:
            bad("ID2_UNIT", b)
        for a in C.cells_into(f):
            ba = C.vcomp(b, a)
            rep.checked += 1
            if ba is None:
                bad("UNDEFINED_VCOMP", (b, a))
                continue
            if C._mor2.get(ba) != (C.src2(a), g):
                bad("VCOMP_TYPE", (b, a))
                continue
            for c in C.cells_from(g):
                cb, cba = C.vcomp(c, b), C.vcomp(c, ba)
                if cb is None or cba is None:
                    continue
                rep.checked += 1
                if C.vcomp(cb, a) != cba:
                    bad("ASSOC_V", (c, b, a))
    # horizontal composition
    for b in C.mor2:
        for a in C.cells_between_into(C.src1(C.src2(b))):
            ba = C.hcomp(b, a)
            rep.checked += 1
            if ba is None:
                bad("UNDEFINED_HCOMP", (b, a))
                continue
            s = C.comp1(C.src2(b), C.src2(a))
            t = C.comp1(C.tgt2(b), C.tgt2(a))
            if C._mor2.get(ba) != (s, t):
                bad("HCOMP_TYPE", (b, a))
    for f in C.mor1:
        for g in C.into(C.src1(f)):
            rep.checked += 1
            fg = C.comp1(f, g)
            if fg is None or C.hcomp(C._id2.get(f), C._id2.get(g)) != C._id2.get(fg):
                bad("HCOMP_IDENTITY", (f, g))
    for b in C.mor2:
        B = C.src1(C.src2(b))
        for a in C.cells_between_into(B):
            ba = C.hcomp(b, a)
            if ba is None:
                continue
            for c in _cells_from_object(C, C.tgt1(C.src2(b))):
                cb, cba = C.hcomp(c, b), C.hcomp(c, ba)
                if cb is None or cba is None:
                    continue
                rep.checked += 1
                if C.hcomp(cb, a) != cba:
                    bad("ASSOC_H", (c, b, a))
    # interchange: (b2 . b1) * (a2 . a1) = (b2 * a2) . (b1 * a1)
    for b1 in C.mor2:
        for a1 in C.cells_between_into(C.src1(C.src2(b1))):
            for a2 in C.cells_from(C.tgt2(a1)):
                for b2 in C.cells_from(C.tgt2(b1)):
                    left_b, left_a = C.vcomp(b2, b1), C.vcomp(a2, a1)
                    r2, r1 = C.hcomp(b2, a2), C.hcomp(b1, a1)
                    if None in (left_b, left_a, r2, r1):
                        continue
                    lhs, rhs = C.hcomp(left_b, left_a), C.vcomp(r2, r1)
                    rep.checked += 1
                    if lhs is None or lhs != rhs:
                        bad("INTERCHANGE", (b2, b1, a2, a1))
    return rep


def _from(C: Finite2Category, A) -> list:
    return C.out_of(A)


def _cells_from_object(C: Finite2Category, A) -> list:
    return C.cells_between_from(A)


# ---------------------------------------------------------------- interleavings

@dataclass
class TwoCellCertificate:
    """(g, h, alpha, beta) with g: A -> B, h: B -> A, alpha: 1_A => hg, beta: 1_B => gh."""

    A: Any
    B: Any
    g: Any
    h: Any
    alpha: Any
    beta: Any
    weight: float

    def describe(self) -> dict:
        return {"g": repr(self.g), "h": repr(self.h), "alpha": repr(self.alpha),
                "beta": repr(self.beta), "weight": self.weight}


def _min_cell(C: Finite2Category, W: Lawvere2Weight, f, g):
    key = (id(W), f, g)
    C._weights_seen[id(W)] = W
    if key not in C._min_cell:
        best, arg = INF, None
        for a in C.cells(f, g):
            w = W.w2(a)
            if arg is None or w < best:
                best, arg = w, a
        C._min_cell[key] = (best, arg)
    return C._min_cell[key]


def all_certificates(C: Finite2Category, W: Lawvere2Weight, A, B) -> list[TwoCellCertificate]:
    """One lightest certificate for every interleavable pair (g, h)."""
    out = []
    iA, iB = C.id1(A), C.id1(B)
    for g in C.hom(A, B):
        wg = W.w1(g)
        for h in C.hom(B, A):
            hg, gh = C.comp1(h, g), C.comp1(g, h)
            if hg is None or gh is None:
                continue
            wa, a = _min_cell(C, W, iA, hg)
            if a is None:
                continue
            wb, b = _min_cell(C, W, iB, gh)
            if b is None:
                continue
            out.append(TwoCellCertificate(A, B, g, h, a, b, max(wg, W.w1(h), wa, wb)))
    return out


def two_cat_interleaving(C: Finite2Category, W: Lawvere2Weight, A, B) -> DistanceResult:
    """Minimum weight of a (g, h, alpha, beta)-interleaving of A and B."""
    best = None
    for cert in all_certificates(C, W, A, B):
        if best is None or cert.weight < best.weight:
            best = cert
    if best is None:
        return DistanceResult(INF, INF, INF, None, "2cat")
    return DistanceResult(best.weight, best.weight, best.weight, best, "2cat")


def distance_function(C: Finite2Category, W: Lawvere2Weight) -> Callable[[Any, Any], float]:
    cache: dict = {}

    def d(A, B):
        if (A, B) not in cache:
            cache[(A, B)] = two_cat_interleaving(C, W, A, B).value
        return cache[(A, B)]
    return d


def whisker_compose(C: Finite2Category, g, beta, h, alpha):
    """(1_g * beta * 1_h) . alpha for h: A -> B, g: B -> A, alpha: 1_A => gh, beta: 1_B => X.

    The result is a 2-morphism 1_A => g X h.
    """
    A, B = C.src1(h), C.tgt1(h)
    if C.src1(g) != B or C.tgt1(g) != A:
        raise ShapeMismatch("g must go B -> A when h goes A -> B")
    if C.src2(alpha) != C.id1(A) or C.tgt2(alpha) != C.comp1(g, h):
        raise ShapeMismatch("alpha must be 1_A => gh")
    if C.src2(beta) != C.id1(B):
        raise ShapeMismatch("beta must start at 1_B")
    left = C.hcomp(C.id2(g), beta)
    whisk = C.hcomp(left, C.id2(h)) if left is not None else None
    out = C.vcomp(whisk, alpha) if whisk is not None else None
    if out is None:
        raise MalformedCategory("whiskered composite is undefined in this 2-category")
    return out


def compose_certificates(C: Finite2Category, W: Lawvere2Weight, c1: TwoCellCertificate,
                         c2: TwoCellCertificate) -> TwoCellCertificate:
    """Certificate for (A, C) from certificates for (A, B) and (B, C)."""
    if c1.B != c2.A:
        raise ShapeMismatch("certificates are not composable")
    g, h, k, l = c1.g, c1.h, c2.g, c2.h
    G, H = C.comp1(k, g), C.comp1(h, l)
    alpha = whisker_compose(C, h, c2.alpha, g, c1.alpha)
    beta = whisker_compose(C, k, c1.beta, l, c2.beta)
    w = max(W.w1(G), W.w1(H), W.w2(alpha), W.w2(beta))
    return TwoCellCertificate(c1.A, c2.B, G, H, alpha, beta, w)


def verify_certificate(C: Finite2Category, W: Lawvere2Weight, cert: TwoCellCertificate,
                       bound: float | None = None, tol: float = 1e-12) -> bool:
    A, B = cert.A, cert.B
    if C._mor1.get(cert.g) != (A, B) or C._mor1.get(cert.h) != (B, A):
        return False
    if C._mor2.get(cert.alpha) != (C.id1(A), C.comp1(cert.h, cert.g)):
        return False
    if C._mor2.get(cert.beta) != (C.id1(B), C.comp1(cert.g, cert.h)):
        return False
    w = max(W.w1(cert.g), W.w1(cert.h), W.w2(cert.alpha), W.w2(cert.beta))
    if abs(w - cert.weight) > tol:
        return False
    return bound is None or w <= bound + tol


def lawvere_symmetrized(objects: Sequence, hom: Callable[[Any, Any], Iterable], w1: Callable) -> Callable:
    """max of min-weight arrows each way in a weighted 1-category."""
    def d_law(A, B):
        return min((float(w1(f)) for f in hom(A, B)), default=INF)

    def d(A, B):
        return max(d_law(A, B), d_law(B, A))
    return d


def lawvere_of(C: Finite2Category, W: Lawvere2Weight) -> Callable:
    return lawvere_symmetrized(C.objects, C.hom, W.w1)


# ---------------------------------------------------------------- constructions

def from_1category(objects, mor1: Mapping, id1: Mapping, compose1, name="") -> Finite2Category:
    """Locally discrete 2-category: only identity 2-morphisms."""
    c1 = _table(compose1)
    mor2 = {("id", f): (f, f) for f in mor1}
    id2 = {f: ("id", f) for f in mor1}

    def v(b, a):
        return b if b == a else None

    def h(b, a):
        gf = c1(b[1], a[1])
        return None if gf is None else ("id", gf)
    return Finite2Category(objects, mor1, id1, c1, mor2, id2, v, h, name or "locally-discrete")


def indiscrete(objects, mor1: Mapping, id1: Mapping, compose1, name="") -> Finite2Category:
    """A unique 2-morphism between any two parallel 1-morphisms."""
    c1 = _table(compose1)
    mor2 = {}
    for f, ef in mor1.items():
        for g, eg in mor1.items():
            if ef == eg:
                mor2[(f, g)] = (f, g)
    id2 = {f: (f, f) for f in mor1}

    def v(b, a):
        return (a[0], b[1]) if a[1] == b[0] else None

    def h(b, a):
        s, t = c1(b[0], a[0]), c1(b[1], a[1])
        return None if s is None or t is None else (s, t)
    return Finite2Category(objects, mor1, id1, c1, mor2, id2, v, h, name or "indiscrete")


def delooping(elements: Sequence, mul: Callable, identity, cells: Mapping | None = None,
              vcomp=None, hcomp=None, name="") -> Finite2Category:
    """One-object 2-category of a finite monoid; 2-morphisms default to identities.

    ``cells`` may supply extra 2-morphisms {label: (g, h)} with composition
    callables; e.g. the order relation of a monoid of monotone maps.
    """
    mor1 = {g: ("*", "*") for g in elements}
    if cells is None:
        return from_1category(["*"], mor1, {"*": identity}, lambda g, f: mul(g, f), name or "delooping")
    return Finite2Category(["*"], mor1, {"*": identity}, lambda g, f: mul(g, f), cells,
                           {g: next(a for a, st in cells.items() if st == (g, g)) for g in elements},
                           vcomp, hcomp, name or "delooping")


def delooping_of_translations(poset: FinitePoset, maps=None) -> Finite2Category:
    """Trans_P as a one-object 2-category with a 2-morphism g => h iff g <= h pointwise."""
    from .posets import translations
    maps = list(maps) if maps is not None else translations(poset)
    key = {m: tuple(m.table) for m in maps}
    elems = list(key.values())
    L = poset.matrix
    index = set(elems)

    def mul(g, f):
        out = tuple(g[x] for x in f)
        return out if out in index else None
    cells = {(g, h): (g, h) for g in elems for h in elems if all(L[g[p], h[p]] for p in range(poset.n))}

    def v(b, a):
        return (a[0], b[1]) if a[1] == b[0] else None

    def hc(b, a):
        s, t = mul(b[0], a[0]), mul(b[1], a[1])
        return (s, t) if (s, t) in cells else None
    ident = tuple(range(poset.n))
    return delooping(elems, mul, ident, cells, v, hc, "delooping(Trans_P)")


def proset_category(poset: FinitePoset, name="") -> tuple[list, dict, dict, Callable]:
    """1-category data of a finite proset: one arrow p -> q iff p <= q."""
    objects = list(range(poset.n))
    mor1 = {(p, q): (p, q) for p in objects for q in objects if poset.leq(p, q)}
    id1 = {p: (p, p) for p in objects}

    def c(g, f):
        return (f[0], g[1]) if f[1] == g[0] else None
    return objects, mor1, id1, c


def disjoint_union(C1: Finite2Category, C2: Finite2Category) -> Finite2Category:
    """Coproduct; labels are tagged with 0 or 1."""
    parts = (C1, C2)

    def tag(i, x):
        return (i, x)
    objects = [tag(i, A) for i, C in enumerate(parts) for A in C.objects]
    mor1 = {tag(i, f): (tag(i, A), tag(i, B)) for i, C in enumerate(parts) for f, (A, B) in C._mor1.items()}
    id1 = {tag(i, A): tag(i, C.id1(A)) for i, C in enumerate(parts) for A in C.objects}
    mor2 = {tag(i, a): (tag(i, f), tag(i, g)) for i, C in enumerate(parts) for a, (f, g) in C._mor2.items()}
    id2 = {tag(i, f): tag(i, C.id2(f)) for i, C in enumerate(parts) for f in C.mor1}

    def lift(op):
        def fn(y, x):
            if y[0] != x[0]:
                return None
            r = op(parts[x[0]])(y[1], x[1])
            return None if r is None else (x[0], r)
        return fn
    return Finite2Category(objects, mor1, id1, lift(lambda C: C.comp1), mor2, id2,
                           lift(lambda C: C.vcomp), lift(lambda C: C.hcomp),
                           f"{C1.name}+{C2.name}")


def union_weight(W1: Lawvere2Weight, W2: Lawvere2Weight) -> Lawvere2Weight:
    Ws = (W1, W2)
    return Lawvere2Weight(lambda f: Ws[f[0]].w1(f[1]), lambda a: Ws[a[0]].w2(a[1]))


def random_lawvere_2_weight(C: Finite2Category, rng: random.Random, m: float = 1.0,
                            integer: bool = False) -> Lawvere2Weight:
    """Random valid 2-weight: draws in [m, 2m] on non-identities, then the
    largest subadditive weight below the draw (fixpoint of w <- min(w, w + w)).
    """
    def draw():
        return float(rng.randint(int(m), int(2 * m))) if integer else rng.uniform(m, 2 * m)
    ids1 = {C.id1(A) for A in C.objects}
    ids2 = {C.id2(f) for f in C.mor1}
    w1 = {f: (0.0 if f in ids1 else draw()) for f in C.mor1}
    w2 = {a: (0.0 if a in ids2 else draw()) for a in C.mor2}
    pairs1 = [(g, f, C.comp1(g, f)) for g in C.mor1 for f in C.into(C.src1(g))]
    pairs1 = [p for p in pairs1 if p[2] is not None]
    pairs2 = [(b, a, C.vcomp(b, a)) for b in C.mor2 for a in C.cells_into(C.src2(b))]
    pairs2 += [(b, a, C.hcomp(b, a)) for b in C.mor2 for a in C.cells_between_into(C.src1(C.src2(b)))]
    pairs2 = [p for p in pairs2 if p[2] is not None]
    for w, pairs in ((w1, pairs1), (w2, pairs2)):
        changed = True
        while changed:
            changed = False
            for y, x, yx in pairs:
                s = w[y] + w[x]
                if s < w[yx] - 1e-15:
                    w[yx] = s
                    changed = True
    return Lawvere2Weight(w1, w2)


# ---------------------------------------------------------------- groups and actions

def word_metric(elements: Sequence, mul: Callable, generator_weights: Mapping) -> dict:
    """d(e, g): cheapest word in the generators (Dijkstra on the Cayley graph)."""
    elements = list(elements)
    e = next(x for x in elements if all(mul(x, y) == y for y in elements))
    dist = {e: 0.0}
    heap = [(0.0, 0, e)]
    tick = itertools.count(1)
    while heap:
        d, _, g = heapq.heappop(heap)
        if d > dist.get(g, INF):
            continue
        for s, w in generator_weights.items():
            nxt = mul(g, s)
            nd = d + float(w)
            if nd < dist.get(nxt, INF):
                dist[nxt] = nd
                heapq.heappush(heap, (nd, next(tick), nxt))
    return {g: dist.get(g, INF) for g in elements}


class WeightedGroupAction:
    """Finite group acting on a finite set, with a weight symmetric under inverse."""

    def __init__(self, elements: Sequence, mul: Callable, inverse: Callable, weight, points: Sequence,
                 act: Callable, validate: bool = True):
        self.elements = list(elements)
        self.mul = mul
        self.inverse = inverse
        self.weight = weight if isinstance(weight, MonoidalWeight) else MonoidalWeight(
            weight if callable(weight) else dict(weight).__getitem__, "W")
        self.points = list(points)
        self.act = act
        self.identity = next(x for x in self.elements if all(mul(x, y) == y == mul(y, x) for y in self.elements))
        if validate:
            self._validate()

    def _validate(self):
        E = self.elements
        for g in E:
            if self.mul(g, self.inverse(g)) != self.identity:
                raise MalformedCategory(f"{g!r} has no inverse")
            if abs(self.weight(g) - self.weight(self.inverse(g))) > 1e-12:
                raise MalformedCategory(f"weight not symmetric at {g!r}")
            for h in E:
                for k in E:
                    if self.mul(self.mul(g, h), k) != self.mul(g, self.mul(h, k)):
                        raise MalformedCategory("multiplication is not associative")
            for x in self.points:
                if self.act(self.identity, x) != x:
                    raise MalformedCategory("identity does not act trivially")
                for h in E:
                    if self.act(self.mul(g, h), x) != self.act(g, self.act(h, x)):
                        raise MalformedCategory("action is not compatible with multiplication")


def cyclic_action(n: int, m: int | None = None, generator_weights: Mapping | None = None) -> WeightedGroupAction:
    """Z/n acting on Z/m (m divides n) by translation, word-metric weights."""
    m = n if m is None else m
    if n % m:
        raise ValueError("Z/n acts on Z/m by translation only when m divides n")
    gw = generator_weights or {1 % n: 1.0, (n - 1) % n: 1.0}
    mul = lambda a, b: (a + b) % n  # noqa: E731
    W = word_metric(range(n), mul, gw)
    return WeightedGroupAction(range(n), mul, lambda a: (-a) % n, W, range(m), lambda g, x: (x + g) % m)


def action_groupoid_interleaving(G: WeightedGroupAction, x, y) -> float:
    """min weight(g) over g with g.x = y; +inf off the orbit."""
    return min((G.weight(g) for g in G.elements if G.act(g, x) == y), default=INF)


def _cdelta(G: WeightedGroupAction, xmor, xcomp, xid, tmor, alpha_cells, size_cap):
    """C^Delta for Delta = B(monoidal category of G) -> Cat with Delta(*) = X.

    xmor(x, y): morphisms of X; xcomp(q, p); xid(x); tmor(g, p) = T_g on
    morphisms; alpha_cells(x): list of (h, T(alpha_{e,h})_x) for the 2-cells
    e => h present in the monoidal category.
    """
    mul = G.mul
    mor1 = {}
    for x in G.points:
        for y in G.points:
            for g in G.elements:
                for p in xmor(x, G.act(g, y)):
                    mor1[(x, y, g, p)] = (x, y)
                    if len(mor1) > size_cap:
                        raise SizeCap(f"more than {size_cap} 1-morphisms")
    e = G.identity
    id1 = {x: (x, x, e, xid(x)) for x in G.points}

    def c1(second, first):
        x, y, g, p = first
        y2, z, h, q = second
        if y2 != y:
            return None
        return (x, z, mul(g, h), xcomp(tmor(g, q), p))
    mor2 = {("1", f): (f, f) for f in mor1}
    id2 = {f: ("1", f) for f in mor1}
    for x in G.points:
        for h, comp in alpha_cells(x):
            tgt = (x, x, h, comp)
            if tgt == id1[x] or tgt not in mor1:
                continue
            mor2[("hat", tgt)] = (id1[x], tgt)

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
            gf = c1(b[1], a[1])
            return None if gf is None else ("1", gf)
        if is_unit(a):
            return b
        if is_unit(b):
            return a
        if a[0] == "hat" and b[0] == "hat":
            tgt = c1(b[1], a[1])
            if tgt is None:
                return None
            if tgt == id1[tgt[0]]:
                return ("1", tgt)
            cell = ("hat", tgt)
            return cell if cell in mor2 else None
        return None
    C = Finite2Category(list(G.points), mor1, id1, c1, mor2, id2, v, hc, "C^Delta")
    W = Lawvere2Weight(lambda f: G.weight(f[2]), lambda a: 0.0)
    return C, W


def build_action_groupoid_2cat(G: WeightedGroupAction, variant: str = "discrete",
                               size_cap: int = ACTION_GROUPOID_CAP) -> tuple[Finite2Category, Lawvere2Weight]:
    """The 2-weighted 2-category C^Delta of a weighted group action.

    ``variant="discrete"`` takes X to be the discrete category on the set
    (only identity arrows) and the monoidal category of G to be discrete;
    this is the instance whose distance is min{W(g) : g.x = y}.
    ``variant="groupoid"`` takes X to be the full action groupoid and the
    monoidal category indiscrete.  There every pair in one orbit is
    (e, e)-interleaved through the arrows of X, so all distances within an
    orbit are 0.
    """
    act = G.act
    if variant == "discrete":
        return _cdelta(G,
                       lambda x, y: ["id"] if x == y else [],
                       lambda q, p: "id",
                       lambda x: "id",
                       lambda g, p: "id",
                       lambda x: [(G.identity, "id")],
                       size_cap)
    if variant == "groupoid":
        # arrows of the action groupoid are (k, x, y) with k.x = y
        def xmor(x, y):
            return [(k, x, y) for k in G.elements if act(k, x) == y]

        def xcomp(q, p):
            return (G.mul(q[0], p[0]), p[1], q[2])

        def tmor(g, p):
            k, x, y = p
            return (G.mul(G.mul(g, k), G.inverse(g)), act(g, x), act(g, y))
        return _cdelta(G, xmor, xcomp, lambda x: (G.identity, x, x), tmor,
                       lambda x: [(h, (h, x, act(h, x))) for h in G.elements], size_cap)
    raise ValueError(f"unknown variant {variant!r}")


def action_groupoid_category(G: WeightedGroupAction) -> tuple[list, dict, dict, Callable, Callable]:
    """The action groupoid as 1-category data plus the weight of each arrow."""
    mor1 = {}
    for x in G.points:
        for g in G.elements:
            mor1[(g, x)] = (x, G.act(g, x))
    id1 = {x: (G.identity, x) for x in G.points}

    def c(second, first):
        h, y = second
        g, x = first
        if G.act(g, x) != y:
            return None
        return (G.mul(h, g), x)
    return list(G.points), mor1, id1, c, (lambda f: G.weight(f[0]))


# ---------------------------------------------------------------- locally persistent categories

class FiniteLPC:
    """Category with hom sets graded by the grid {0, 1, ..., K}.

    Grades add with saturation at K, so grade K collects every composite
    of total grade >= K.  hom[(A, B, s)] lists morphism labels;
    compose(A, B, C, s, t, g, f) gives g.f in hom(A, C, min(s + t, K)) for
    f in hom(A, B, s), g in hom(B, C, t); shift(A, B, s, t, f) is S_{s,t}(f).
    """

    def __init__(self, objects: Sequence, K: int, hom: Mapping, compose: Callable, identity: Mapping,
                 shift: Callable | None = None, validate: bool = True):
        self.objects = list(objects)
        self.K = int(K)
        self.hom = {k: list(v) for k, v in hom.items()}
        self._compose = compose
        self.identity = dict(identity)
        self._shift = shift or (lambda A, B, s, t, f: f)
        if validate:
            problems = self.problems()
            if problems:
                raise MalformedLPC("; ".join(problems[:5]))

    @property
    def grades(self) -> range:
        return range(self.K + 1)

    def plus(self, s, t) -> int:
        return min(s + t, self.K)

    def homs(self, A, B, s) -> list:
        return self.hom.get((A, B, s), [])

    def compose(self, A, B, C, s, t, g, f):
        return self._compose(A, B, C, s, t, g, f)

    def shift(self, A, B, s, t, f):
        if s == t:
            return f
        return self._shift(A, B, s, t, f)

    def problems(self) -> list[str]:
        out = []
        O, G = self.objects, list(self.grades)
        for A in O:
            if self.identity.get(A) not in self.homs(A, A, 0):
                out.append(f"identity of {A!r} missing from grade 0")
        for A, B in itertools.product(O, O):
            for s in G:
                for f in self.homs(A, B, s):
                    for t in G:
                        if t < s:
                            continue
                        sf = self.shift(A, B, s, t, f)
                        if sf not in self.homs(A, B, t):
                            out.append(f"S_{s},{t}({f!r}) leaves hom({A!r},{B!r})_{t}")
                            continue
                        for u in G:
                            if u >= t and self.shift(A, B, t, u, sf) != self.shift(A, B, s, u, f):
                                out.append(f"shift maps do not compose at {f!r} ({s}<={t}<={u})")
                    if self.compose(A, B, B, s, 0, self.identity[B], f) != f:
                        out.append(f"left unit fails at {f!r}")
                    if self.compose(A, A, B, 0, s, f, self.identity[A]) != f:
                        out.append(f"right unit fails at {f!r}")
        for A, B, C in itertools.product(O, O, O):
            for s, t in itertools.product(G, G):
                for f in self.homs(A, B, s):
                    for g in self.homs(B, C, t):
                        gf = self.compose(A, B, C, s, t, g, f)
                        st = self.plus(s, t)
                        if gf not in self.homs(A, C, st):
                            out.append(f"composite of {g!r},{f!r} not in grade {st}")
                            continue
                        for s2 in G:
                            if s2 < s:
                                continue
                            lhs = self.compose(A, B, C, s2, t, g, self.shift(A, B, s, s2, f))
                            rhs = self.shift(A, C, st, self.plus(s2, t), gf)
                            if lhs != rhs:
                                out.append(f"composition not natural in shifts at {g!r},{f!r}")
                        for t2 in G:
                            if t2 < t:
                                continue
                            lhs = self.compose(A, B, C, s, t2, self.shift(B, C, t, t2, g), f)
                            rhs = self.shift(A, C, st, self.plus(s, t2), gf)
                            if lhs != rhs:
                                out.append(f"composition not natural in shifts at {g!r},{f!r}")
        return out


def lpc_interleaving(D: FiniteLPC, A, B) -> float:
    """min max(s, t) over f: A -> B in grade s, g: B -> A in grade t with
    gf = S_{0,s+t}(1_A) and fg = S_{0,s+t}(1_B)."""
    best = INF
    for s in D.grades:
        for t in D.grades:
            if max(s, t) >= best:
                continue
            st = D.plus(s, t)
            uA = D.shift(A, A, 0, st, D.identity[A])
            uB = D.shift(B, B, 0, st, D.identity[B])
            if any(D.compose(A, B, A, s, t, g, f) == uA and D.compose(B, A, B, t, s, f, g) == uB
                   for f in D.homs(A, B, s) for g in D.homs(B, A, t)):
                best = float(max(s, t))
    return best


def lpc_to_2cat(D: FiniteLPC) -> tuple[Finite2Category, Lawvere2Weight]:
    """1-morphisms (f, s); a unique 2-morphism (f, s) => (h, t) iff s <= t and S_{s,t}(f) = h."""
    mor1 = {}
    for (A, B, s), fs in D.hom.items():
        for f in fs:
            mor1[(A, B, s, f)] = (A, B)
    id1 = {A: (A, A, 0, D.identity[A]) for A in D.objects}

    def c1(second, first):
        A, B, s, f = first
        B2, C, t, g = second
        if B2 != B:
            return None
        return (A, C, D.plus(s, t), D.compose(A, B, C, s, t, g, f))
    mor2 = {}
    for f in mor1:
        A, B, s, lab = f
        for t in D.grades:
            if t >= s:
                h = (A, B, t, D.shift(A, B, s, t, lab))
                mor2[(f, h)] = (f, h)

    def v(b, a):
        return (a[0], b[1]) if a[1] == b[0] else None

    def hc(b, a):
        s, t = c1(b[0], a[0]), c1(b[1], a[1])
        if s is None or t is None:
            return None
        return (s, t) if (s, t) in mor2 else None
    C = Finite2Category(D.objects, mor1, id1, c1, mor2, {f: (f, f) for f in mor1}, v, hc, "LPC")
    return C, Lawvere2Weight(lambda f: float(f[2]), lambda a: 0.0)


def group_lpc(G: WeightedGroupAction, objects: Sequence, K: int) -> FiniteLPC:
    """hom(x, y)_s = {g : g.x = y, W(g) <= s} for s < K; shifts are inclusions.

    The top grade K holds every g with g.x = y, since it also receives the
    composites of total grade beyond K.
    """
    hom = {}
    for x in objects:
        for y in objects:
            for s in range(K + 1):
                hom[(x, y, s)] = [g for g in G.elements
                                  if G.act(g, x) == y and (s == K or G.weight(g) <= s)]
    return FiniteLPC(objects, K, hom, lambda A, B, C, s, t, g, f: G.mul(g, f),
                     {x: G.identity for x in objects})


def thin_lpc(dist: Mapping, objects: Sequence, K: int) -> FiniteLPC:
    """hom(A, B)_s = {*} iff dist[A, B] <= s (or s = K), for an integer Lawvere quasi-metric."""
    hom = {}
    for A in objects:
        for B in objects:
            for s in range(K + 1):
                hom[(A, B, s)] = ["*"] if (dist[(A, B)] <= s or s == K) else []
    return FiniteLPC(objects, K, hom, lambda A, B, C, s, t, g, f: "*", {A: "*" for A in objects})


def random_lpc(rng: random.Random, max_objects: int = 4, K: int = 3) -> FiniteLPC:
    """Random valid LPC: a thin quasi-metric one or a group-action one."""
    k = rng.randint(1, max_objects)
    if rng.random() < 0.5:
        objs = list(range(k))
        d = {(a, b): (0 if a == b else rng.choice([1, 2, 3, 4, 5])) for a in objs for b in objs}
        # Floyd-Warshall closure; grades above K are unreachable anyway
        for m in objs:
            for a in objs:
                for b in objs:
                    d[(a, b)] = min(d[(a, b)], d[(a, m)] + d[(m, b)])
        return thin_lpc(d, objs, K)
    n = rng.randint(max(k, 2), 8)
    w = rng.randint(1, 2)
    gens = {1: w, n - 1: w}
    if n > 3 and rng.random() < 0.5:
        j = rng.randint(2, n - 2)
        wj = rng.randint(1, 3)
        gens[j] = wj
        gens[(n - j) % n] = wj
    G = cyclic_action(n, generator_weights=gens)
    objs = rng.sample(list(G.points), k)
    return group_lpc(G, objs, K)


# ---------------------------------------------------------------- 2-functors

class Functor2:
    """Map between finite 2-weighted 2-categories, given on all three levels."""

    def __init__(self, source: Finite2Category, W: Lawvere2Weight, target: Finite2Category,
                 W_target: Lawvere2Weight, on_objects, on_mor1, on_mor2, name=""):
        self.source, self.W = source, W
        self.target, self.W_target = target, W_target
        self.F0 = _table_fn(on_objects)
        self.F1 = _table_fn(on_mor1)
        self.F2 = _table_fn(on_mor2)
        self.name = name

    def check_functoriality(self):
        C, D = self.source, self.target
        for A in C.objects:
            if self.F1(C.id1(A)) != D.id1(self.F0(A)):
                raise NotAFunctor(f"identity of {A!r} not preserved")
        for f in C.mor1:
            A, B = C._mor1[f]
            if D._mor1.get(self.F1(f)) != (self.F0(A), self.F0(B)):
                raise NotAFunctor(f"{f!r} mapped to an arrow with the wrong ends")
            if self.F2(C.id2(f)) != D.id2(self.F1(f)):
                raise NotAFunctor(f"identity 2-cell of {f!r} not preserved")
            for g in _from(C, B):
                gf = C.comp1(g, f)
                if gf is not None and self.F1(gf) != D.comp1(self.F1(g), self.F1(f)):
                    raise NotAFunctor(f"composition {g!r}.{f!r} not preserved")
        for a in C.mor2:
            f, g = C._mor2[a]
            if D._mor2.get(self.F2(a)) != (self.F1(f), self.F1(g)):
                raise NotAFunctor(f"{a!r} mapped to a 2-cell with the wrong ends")
            for b in C.cells_from(g):
                ba = C.vcomp(b, a)
                if ba is not None and self.F2(ba) != D.vcomp(self.F2(b), self.F2(a)):
                    raise NotAFunctor(f"vertical composite {b!r}.{a!r} not preserved")
            for b in _cells_from_object(C, C.tgt1(f)):
                ba = C.hcomp(b, a)
                if ba is not None and self.F2(ba) != D.hcomp(self.F2(b), self.F2(a)):
                    raise NotAFunctor(f"horizontal composite {b!r}*{a!r} not preserved")


def _table_fn(t):
    return t if callable(t) else dict(t).__getitem__


def check_lipschitz_2functor(F: Functor2, tol: float = 1e-12) -> AuditReport:
    """W'_1(F g) <= W_1(g) and W'_2(F a) <= W_2(a) on every cell."""
    F.check_functoriality()
    rep = AuditReport()
    for f in F.source.mor1:
        lhs, rhs = F.W_target.w1(F.F1(f)), F.W.w1(f)
        rep.checked += 1
        if lhs > rhs + tol:
            rep.add("LIPSCHITZ_1", f, lhs, rhs)
    for a in F.source.mor2:
        lhs, rhs = F.W_target.w2(F.F2(a)), F.W.w2(a)
        rep.checked += 1
        if lhs > rhs + tol:
            rep.add("LIPSCHITZ_2", a, lhs, rhs)
    return rep


def stability_test(F: Functor2, tol: float = 1e-12) -> AuditReport:
    """d'(F A, F B) <= d(A, B) on every pair of objects."""
    rep = AuditReport()
    d = distance_function(F.source, F.W)
    d2 = distance_function(F.target, F.W_target)
    for A, B in itertools.product(F.source.objects, F.source.objects):
        lhs, rhs = d2(F.F0(A), F.F0(B)), d(A, B)
        rep.checked += 1
        if lhs > rhs + tol and not (math.isinf(lhs) and math.isinf(rhs)):
            rep.add("STABILITY", (A, B), lhs, rhs)
    return rep


def identity_functor(C: Finite2Category, W: Lawvere2Weight, W_target: Lawvere2Weight | None = None) -> Functor2:
    ident = lambda x: x  # noqa: E731
    return Functor2(C, W, C, W_target or W, ident, ident, ident, "identity")


def terminal_2category() -> Finite2Category:
    return from_1category(["*"], {"1": ("*", "*")}, {"*": "1"}, {("1", "1"): "1"}, "terminal")


def collapse_functor(C: Finite2Category, W: Lawvere2Weight) -> Functor2:
    T = terminal_2category()
    return Functor2(C, W, T, Lawvere2Weight.zero(), lambda A: "*", lambda f: "1", lambda a: ("id", "1"), "collapse")


def quotient_action_functor(n: int, m: int, gen_n: Mapping | None = None, gen_m: Mapping | None = None,
                            ) -> Functor2:
    """Z/n acting on itself -> Z/m acting on itself (m | n), reduction mod m,
    between the discrete C^Delta instances."""
    Gn = cyclic_action(n, generator_weights=gen_n)
    Gm = cyclic_action(m, generator_weights=gen_m)
    C, W = build_action_groupoid_2cat(Gn)
    D, W2 = build_action_groupoid_2cat(Gm)

    def f1(f):
        x, y, g, p = f
        return (x % m, y % m, g % m, p)

    def f2(a):
        return (a[0], f1(a[1]))
    return Functor2(C, W, D, W2, lambda x: x % m, f1, f2, f"Z/{n}->Z/{m}")


__all__ = [
    "Finite2Category", "validate_2category", "TwoCellCertificate", "all_certificates",
    "two_cat_interleaving", "distance_function", "whisker_compose", "compose_certificates",
    "verify_certificate", "lawvere_symmetrized", "lawvere_of", "from_1category", "indiscrete",
    "delooping", "delooping_of_translations", "proset_category", "disjoint_union", "union_weight",
    "random_lawvere_2_weight", "word_metric", "WeightedGroupAction", "cyclic_action",
    "action_groupoid_interleaving", "build_action_groupoid_2cat", "action_groupoid_category",
    "FiniteLPC", "lpc_interleaving", "lpc_to_2cat", "group_lpc", "thin_lpc", "random_lpc",
    "Functor2", "check_lipschitz_2functor", "stability_test", "identity_functor",
    "terminal_2category", "collapse_functor", "quotient_action_functor",
]
