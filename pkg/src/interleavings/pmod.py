"""Persistence modules: finite F2 modules, interval/rectangle modules, barcodes."""
from __future__ import annotations

import csv
import io
import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _f2
from .errors import DomainMismatch, NotATranslation, NotFunctorial, NumericalRange, ParseError, ShapeMismatch
from .posets import (FiniteMap, FinitePoset, MonotoneMap, PLMap, Scale, Shift, VectorShift,
                     compose_maps)


# ---------------------------------------------------------------- finite modules

def _zeros(r, c):
    return np.zeros((r, c), dtype=np.uint8)


class FiniteModule:
    """A functor from a finite poset to finite-dimensional F2 vector spaces.

    ``maps`` gives structure matrices (shape dim(q) x dim(p)) for pairs p <= q;
    at least the generating pairs ``poset.covers()`` are needed (missing ones
    default to zero only when one side has dimension 0).  All other maps are
    obtained by composing along chains, and path-independence is checked.
    """

    def __init__(self, poset: FinitePoset, dims: Sequence[int], maps=None, validate: bool = True):
        dims = tuple(int(d) for d in dims)
        if len(dims) != poset.n or min(dims, default=0) < 0:
            raise ShapeMismatch("need one nonnegative dimension per point")
        self.poset = poset
        self.dims = dims
        given = {}
        for (p, q), m in (maps or {}).items():
            if not poset.leq(p, q):
                raise DomainMismatch(f"map given for incomparable pair {p}, {q}")
            m = _f2.as_f2(m)
            if m.size == dims[q] * dims[p]:
                m = m.reshape(dims[q], dims[p])
            if m.shape != (dims[q], dims[p]):
                raise ShapeMismatch(f"map {p}->{q} has shape {m.shape}, need {(dims[q], dims[p])}")
            given[(p, q)] = m
        gen = {}
        for p, q in poset.covers():
            if (p, q) in given:
                gen[(p, q)] = given[(p, q)]
            elif dims[p] == 0 or dims[q] == 0:
                gen[(p, q)] = _zeros(dims[q], dims[p])
            else:
                raise ShapeMismatch(f"missing structure map {p} <= {q}")
        self._maps = self._close(gen)
        if validate:
            bad = self.functoriality_defects(extra=given)
            if bad:
                raise NotFunctorial(f"structure maps not functorial at {bad[0]}")

    def _close(self, gen):
        P, dims = self.poset, self.dims
        out_edges = {p: [] for p in range(P.n)}
        for (p, q) in gen:
            out_edges[p].append(q)
        maps = {}
        for p in range(P.n):
            maps[(p, p)] = np.eye(dims[p], dtype=np.uint8)
            seen = {p}
            queue = deque([p])
            while queue:
                r = queue.popleft()
                for q in out_edges[r]:
                    if q in seen:
                        continue
                    seen.add(q)
                    maps[(p, q)] = _f2.matmul(gen[(r, q)], maps[(p, r)])
                    queue.append(q)
        return maps

    def functoriality_defects(self, extra=None) -> list:
        P = self.poset
        bad = []
        for p in range(P.n):
            if self._maps[(p, p)].shape[0] and not np.array_equal(self._maps[(p, p)], np.eye(self.dims[p], dtype=np.uint8)):
                bad.append((p, p))
        for r, q in P.covers():
            g = self.map((r, q)) if (r, q) in self._maps else None
            for p in range(P.n):
                if not P.leq(p, r):
                    continue
                if not np.array_equal(self._maps[(p, q)], _f2.matmul(g, self._maps[(p, r)])):
                    bad.append((p, r, q))
        for key, m in (extra or {}).items():
            if not np.array_equal(self._maps[key], m):
                bad.append(key)
        return bad

    @classmethod
    def _raw(cls, poset, dims, all_maps):
        obj = cls.__new__(cls)
        obj.poset, obj.dims, obj._maps = poset, tuple(dims), all_maps
        return obj

    @classmethod
    def indicator(cls, poset: FinitePoset, support: Iterable[int]) -> "FiniteModule":
        """Interval module: F2 on a convex support, identity maps inside."""
        S = set(int(s) for s in support)
        L = poset.matrix
        for p, q in itertools.product(S, S):
            if L[p, q]:
                for r in range(poset.n):
                    if L[p, r] and L[r, q] and r not in S:
                        raise NotFunctorial(f"support is not convex: {p} <= {r} <= {q}")
        dims = [1 if p in S else 0 for p in range(poset.n)]
        maps = {}
        for p, q in zip(*np.nonzero(L)):
            p, q = int(p), int(q)
            maps[(p, q)] = np.ones((1, 1), np.uint8) if (p in S and q in S) else _zeros(dims[q], dims[p])
        return cls._raw(poset, dims, maps)

    @classmethod
    def zero(cls, poset: FinitePoset) -> "FiniteModule":
        return cls.indicator(poset, ())

    def map(self, pair) -> np.ndarray:
        p, q = pair
        try:
            return self._maps[(p, q)]
        except KeyError:
            raise DomainMismatch(f"{p} is not <= {q}") from None

    def total_dim(self) -> int:
        return sum(self.dims)

    def support(self) -> list[int]:
        return [p for p, d in enumerate(self.dims) if d]

    def __eq__(self, other):
        if not isinstance(other, FiniteModule) or other.poset != self.poset or other.dims != self.dims:
            return False
        return all(np.array_equal(m, other._maps[k]) for k, m in self._maps.items())

    def __hash__(self):
        return hash((self.poset, self.dims))

    def __repr__(self):
        return f"FiniteModule(dims={list(self.dims)})"

    # -- text format
    def to_text(self) -> str:
        out = [self.poset.to_text().rstrip("\n"), "DIMS " + " ".join(map(str, self.dims))]
        for p, q in self.poset.covers():
            m = self._maps[(p, q)]
            if m.size == 0:
                continue
            out.append(f"MAP {p} {q}")
            out += [" ".join(str(int(x)) for x in row) for row in m]
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FiniteModule":
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        k = next((i for i, ln in enumerate(lines) if ln.startswith("DIMS")), None)
        if k is None:
            raise ParseError("missing DIMS line")
        poset = FinitePoset.from_text("\n".join(lines[:k]))
        try:
            dims = [int(x) for x in lines[k].split()[1:]]
        except ValueError as exc:
            raise ParseError("bad DIMS line") from exc
        if len(dims) != poset.n:
            raise ParseError(f"expected {poset.n} dims, got {len(dims)}")
        maps = {}
        i = k + 1
        while i < len(lines):
            head = lines[i].split()
            if head[0] != "MAP" or len(head) != 3:
                raise ParseError(f"expected 'MAP p q', got {lines[i]!r}")
            p, q = int(head[1]), int(head[2])
            rows = lines[i + 1:i + 1 + dims[q]]
            try:
                m = np.array([[int(x) for x in r.split()] for r in rows], dtype=np.uint8).reshape(dims[q], dims[p])
            except ValueError as exc:
                raise ParseError(f"bad matrix for MAP {p} {q}") from exc
            maps[(p, q)] = m
            i += 1 + dims[q]
        try:
            return cls(poset, dims, maps)
        except (ShapeMismatch, NotFunctorial, DomainMismatch) as exc:
            raise ParseError(str(exc)) from exc


class ModuleMorphism:
    def __init__(self, source: FiniteModule, target: FiniteModule, components: Sequence):
        if source.poset != target.poset:
            raise ShapeMismatch("source and target live on different posets")
        comps = []
        for p, c in enumerate(components):
            c = _f2.as_f2(np.asarray(c).reshape(target.dims[p], source.dims[p]))
            comps.append(c)
        if len(comps) != source.poset.n:
            raise ShapeMismatch("need one component per point")
        self.source, self.target, self.components = source, target, tuple(comps)

    def __getitem__(self, p) -> np.ndarray:
        return self.components[p]

    def is_zero(self) -> bool:
        return all(not c.any() for c in self.components)

    def __add__(self, other):
        return ModuleMorphism(self.source, self.target, [a ^ b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        return isinstance(other, ModuleMorphism) and all(
            np.array_equal(a, b) for a, b in zip(self.components, other.components))

    def __repr__(self):
        return f"ModuleMorphism({[c.tolist() for c in self.components]})"

    @classmethod
    def identity(cls, M: FiniteModule):
        return cls(M, M, [np.eye(d, dtype=np.uint8) for d in M.dims])

    @classmethod
    def zero(cls, M: FiniteModule, N: FiniteModule):
        return cls(M, N, [_zeros(N.dims[p], M.dims[p]) for p in range(M.poset.n)])


# ---------------------------------------------------------------- symbolic modules

@dataclass(frozen=True)
class IntervalModule:
    """F on the half-open interval [a, b), zero elsewhere."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a <= self.b:
            raise ValueError(f"need a <= b, got [{self.a}, {self.b})")

    @property
    def empty(self) -> bool:
        return self.a == self.b

    @property
    def lo(self):
        return np.array([self.a], dtype=float)

    @property
    def hi(self):
        return np.array([self.b], dtype=float)

    def contains(self, p) -> bool:
        return self.a <= p < self.b


EMPTY = IntervalModule(0.0, 0.0)


@dataclass(frozen=True)
class RectangleModule:
    """F on the box [a, b) in R^n with the product order."""

    a: tuple
    b: tuple

    def __init__(self, a, b):
        a = tuple(float(x) for x in np.ravel(a))
        b = tuple(float(x) for x in np.ravel(b))
        if len(a) != len(b):
            raise ShapeMismatch("corner dimensions differ")
        if any(x > y for x, y in zip(a, b)):
            raise ValueError("need a <= b componentwise")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def empty(self) -> bool:
        return any(x == y for x, y in zip(self.a, self.b))

    @property
    def lo(self):
        return np.array(self.a)

    @property
    def hi(self):
        return np.array(self.b)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(self.lo <= p) and np.all(p < self.hi))


def box_of(M):
    """(lo, hi) arrays of a symbolic module's support."""
    return M.lo, M.hi


def _like(M, lo, hi):
    if np.any(lo >= hi):
        # keep emptiness canonical so equality of empty modules is structural
        lo = hi = np.zeros_like(lo)
    if isinstance(M, IntervalModule):
        return IntervalModule(float(lo[0]), float(hi[0]))
    return RectangleModule(lo, hi)


def _pl_first_reach(m: PLMap, y: float) -> float:
    """inf {p : m(p) >= y} for a nondecreasing PL map (+-inf if unbounded)."""
    xs, ys = m.xs, m.ys
    if y <= ys[0]:
        if m.left_slope == 0:
            return -math.inf
        return xs[0] - (ys[0] - y) / m.left_slope
    for (x0, y0), (x1, y1) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
        if y <= y1:
            if y1 == y0:
                return x0
            return x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    if m.right_slope == 0:
        return math.inf
    return xs[-1] + (y - ys[-1]) / m.right_slope


def pullback(M, g: MonotoneMap):
    """gM(p) = M(g(p))."""
    if isinstance(M, FiniteModule):
        if not isinstance(g, FiniteMap) or g.domain != M.poset:
            raise DomainMismatch("pullback of a finite module needs a map on the same poset")
        P = M.poset
        dims = [M.dims[g.table[p]] for p in range(P.n)]
        maps = {(p, q): M.map((g.table[p], g.table[q])) for (p, q) in M._maps}
        return FiniteModule._raw(P, dims, maps)
    if isinstance(M, (IntervalModule, RectangleModule)):
        lo, hi = box_of(M)
        if M.empty:
            return M
        if isinstance(g, Shift):
            return _like(M, lo - g.t, hi - g.t)
        if isinstance(g, VectorShift):
            if len(g.v) != len(lo):
                raise DomainMismatch("shift vector has the wrong dimension")
            return _like(M, lo - g.v, hi - g.v)
        if isinstance(g, Scale) and isinstance(M, IntervalModule):
            if M.a < 0:
                raise DomainMismatch("multiplicative action lives on the nonnegative half line")
            nlo, nhi = lo / g.c, hi / g.c
            bad = ((lo != 0) & ~(nlo != 0)) | ((hi != 0) & ~(nhi != 0)) | (np.isfinite(hi) & ~np.isfinite(nhi))
            if np.any(bad):
                raise NumericalRange(f"scaling by {g.c!r} leaves the float range")
            return _like(M, nlo, nhi)
        if isinstance(g, PLMap) and isinstance(M, IntervalModule):
            a, b = _pl_first_reach(g, M.a), _pl_first_reach(g, M.b)
            return EMPTY if a >= b else IntervalModule(a, b)
        raise DomainMismatch(f"no closed-form pullback of {type(M).__name__} along {type(g).__name__}")
    raise DomainMismatch(f"not a module: {M!r}")


@dataclass(frozen=True)
class BoxMorphism:
    """Morphism between interval/rectangle modules.

    The component at p is ``scalar`` times the identity when p lies in both
    supports and zero otherwise.  Over F2 only scalars 0 and 1 occur.
    """

    source: object
    target: object
    scalar: int = 1

    def component(self, p) -> int:
        return int(self.scalar and self.source.contains(p) and self.target.contains(p))

    def is_zero(self) -> bool:
        return self.scalar == 0 or not boxes_overlap(self.source, self.target)


def boxes_overlap(S, T) -> bool:
    if S.empty or T.empty:
        return False
    (slo, shi), (tlo, thi) = box_of(S), box_of(T)
    return bool(np.all(np.maximum(slo, tlo) < np.minimum(shi, thi)))


def box_hom_nonzero(S, T) -> bool:
    """Whether a nonzero morphism M_S -> M_T exists.

    True iff the boxes overlap, T starts no later than S and T ends no later
    than S in every coordinate:  T.lo <= S.lo  and  T.hi <= S.hi.
    """
    if not boxes_overlap(S, T):
        return False
    (slo, shi), (tlo, thi) = box_of(S), box_of(T)
    return bool(np.all(tlo <= slo) and np.all(thi <= shi))


def shift_morphism(M, g: MonotoneMap):
    """The morphism M => gM with component M(p <= g(p))."""
    if isinstance(M, FiniteModule):
        if not isinstance(g, FiniteMap) or not g.is_translation():
            raise NotATranslation("shift morphism needs p <= g(p) for all p")
        return ModuleMorphism(M, pullback(M, g), [M.map((p, g.table[p])) for p in range(M.poset.n)])
    ok = ((isinstance(g, Shift) and g.t >= 0) or (isinstance(g, Scale) and g.c >= 1)
          or (isinstance(g, VectorShift) and bool(np.all(g.v >= 0))))
    if not ok:
        raise NotATranslation(f"{g!r} is not a translation")
    return BoxMorphism(M, pullback(M, g), 1)


def is_morphism(phi) -> bool:
    if isinstance(phi, ModuleMorphism):
        M, N = phi.source, phi.target
        for p, q in M.poset.covers():
            lhs = _f2.matmul(phi[q], M.map((p, q)))
            rhs = _f2.matmul(N.map((p, q)), phi[p])
            if not np.array_equal(lhs, rhs):
                return False
        return True
    if isinstance(phi, BoxMorphism):
        if phi.source.lo.shape != phi.target.lo.shape:
            raise ShapeMismatch("modules over different parameter spaces")
        return phi.is_zero() or box_hom_nonzero(phi.source, phi.target)
    raise ShapeMismatch(f"not a morphism: {phi!r}")


def compose_morphisms(psi: ModuleMorphism, phi: ModuleMorphism) -> ModuleMorphism:
    return ModuleMorphism(phi.source, psi.target, [_f2.matmul(b, a) for a, b in zip(phi.components, psi.components)])


def _layout(M: FiniteModule, N: FiniteModule):
    offs, o = [], 0
    for p in range(M.poset.n):
        offs.append(o)
        o += N.dims[p] * M.dims[p]
    return offs, o


def naturality_system(M: FiniteModule, N: FiniteModule) -> tuple[np.ndarray, list[int], int]:
    """Matrix A with A x = 0 iff x (stacked components, row-major) is natural."""
    if M.poset != N.poset:
        raise ShapeMismatch("modules on different posets")
    offs, nvar = _layout(M, N)
    rows = []
    for p, q in M.poset.covers():
        Mpq, Npq = M.map((p, q)), N.map((p, q))
        mp, nq, np_ = M.dims[p], N.dims[q], N.dims[p]
        mq = M.dims[q]
        for a in range(nq):
            for b in range(mp):
                row = np.zeros(nvar, dtype=np.uint8)
                # (comp_q M_pq)[a, b]
                for k in range(mq):
                    if Mpq[k, b]:
                        row[offs[q] + a * mq + k] ^= 1
                # (N_pq comp_p)[a, b]
                for k in range(np_):
                    if Npq[a, k]:
                        row[offs[p] + k * mp + b] ^= 1
                if row.any():
                    rows.append(row)
    A = np.array(rows, dtype=np.uint8).reshape(len(rows), nvar)
    return A, offs, nvar


def vector_to_morphism(M, N, x, offs) -> ModuleMorphism:
    comps = []
    for p in range(M.poset.n):
        k = N.dims[p] * M.dims[p]
        comps.append(np.asarray(x[offs[p]:offs[p] + k]).reshape(N.dims[p], M.dims[p]))
    return ModuleMorphism(M, N, comps)


def morphism_space_basis(M: FiniteModule, N: FiniteModule) -> list[ModuleMorphism]:
    A, offs, nvar = naturality_system(M, N)
    basis = _f2.nullspace(A, nvar)
    return [vector_to_morphism(M, N, v, offs) for v in basis]


# ---------------------------------------------------------------- barcodes

class Barcode:
    """Multiset of bars (birth, death), death possibly +inf."""

    def __init__(self, bars: Iterable[tuple[float, float]] = ()):
        out = []
        for b, d in bars:
            b, d = float(b), float(d)
            if math.isnan(b) or math.isnan(d) or d < b or b == math.inf:
                raise ValueError(f"invalid bar ({b}, {d})")
            out.append((b, d))
        self.bars = tuple(sorted(out))

    def __iter__(self):
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    def __eq__(self, other):
        return isinstance(other, Barcode) and self.bars == other.bars

    def __hash__(self):
        return hash(self.bars)

    def __repr__(self):
        return f"Barcode({list(self.bars)})"

    def nonempty(self) -> "Barcode":
        return Barcode(bar for bar in self.bars if bar[1] > bar[0])

    def map(self, fn) -> "Barcode":
        return Barcode((fn(b), fn(d)) for b, d in self.bars)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["birth", "death"])
        for b, d in self.bars:
            w.writerow([repr(b), "inf" if d == math.inf else repr(d)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Barcode":
        bars = []
        for row in csv.reader(io.StringIO(text)):
            if not row or row[0].strip().lower() == "birth":
                continue
            try:
                bars.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError) as exc:
                raise ParseError(f"bad barcode row {row!r}") from exc
        try:
            return cls(bars)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def rectangles_to_csv(rects: Sequence[RectangleModule]) -> str:
    return "".join(",".join(repr(x) for x in r.a + r.b) + "\n" for r in rects)


def rectangles_from_csv(text: str) -> list[RectangleModule]:
    out = []
    for row in csv.reader(io.StringIO(text)):
        if not row:
            continue
        try:
            vals = [float(x) for x in row]
        except ValueError as exc:
            raise ParseError(f"bad rectangle row {row!r}") from exc
        if len(vals) % 2:
            raise ParseError("rectangle rows need 2n numbers")
        n = len(vals) // 2
        try:
            out.append(RectangleModule(vals[:n], vals[n:]))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    return out


__all__ = [
    "FiniteModule", "ModuleMorphism", "IntervalModule", "RectangleModule", "EMPTY",
    "BoxMorphism", "box_hom_nonzero", "boxes_overlap", "pullback", "shift_morphism",
    "is_morphism", "compose_morphisms", "morphism_space_basis", "naturality_system",
    "Barcode", "rectangles_to_csv", "rectangles_from_csv", "compose_maps",
]
