"""Interleavings of persistence modules under monoid actions.

Conventions: a (g, h)-interleaving of M and N is a pair phi: M -> gN,
psi: N -> hM with psi_{g(p)} phi_p = M(p <= h(g(p))) and
phi_{h(p)} psi_p = N(p <= g(h(p))) for all p.  It needs the 2-morphisms
e => hg and e => gh, i.e. p <= h(g(p)) and p <= g(h(p)).
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import _f2
from .errors import (DimensionMismatch, NumericalRange, PreconditionFailed, SearchBudgetExceeded, ShapeMismatch,
                     UnsupportedAction)
from .pmod import (EMPTY, BoxMorphism, FiniteModule, IntervalModule, ModuleMorphism,
                   RectangleModule, box_hom_nonzero, is_morphism, morphism_space_basis, pullback)
from .posets import (FiniteMap, MonoidAction, MonotoneMap, Scale, Shift, VectorShift, compose_maps,
                     grid_poset, identity_map, maps_leq)
from .weights import INF, MonoidalWeight

SEARCH_DIM_LIMIT = 20


@dataclass
class InterleavingCertificate:
    g: Any
    h: Any
    phi: Any
    psi: Any
    alpha_exists: bool = True
    beta_exists: bool = True
    weight: float | None = None

    def describe(self) -> dict:
        def show(x):
            if isinstance(x, (Shift, Scale)):
                return float(x.t if isinstance(x, Shift) else x.c)
            if isinstance(x, VectorShift):
                return x.v.tolist()
            if isinstance(x, FiniteMap):
                return list(x.table)
            if isinstance(x, np.ndarray):
                return x.tolist()
            if isinstance(x, (int, float, np.floating)):
                return float(x)
            return repr(x)

        def morph(m):
            if isinstance(m, BoxMorphism):
                return {"scalar": m.scalar, "zero": m.is_zero()}
            if isinstance(m, ModuleMorphism):
                return {"components": [c.tolist() for c in m.components]}
            return repr(m)
        return {"g": show(self.g), "h": show(self.h), "phi": morph(self.phi), "psi": morph(self.psi),
                "weight": self.weight}


@dataclass
class DistanceResult:
    value: float
    lower: float
    upper: float
    certificate: InterleavingCertificate | None = None
    family: str = ""
    cap: float | None = None
    note: str = ""

    def __post_init__(self):
        if not (self.lower <= self.value <= self.upper or math.isinf(self.value)):
            raise ValueError(f"bracket [{self.lower}, {self.upper}] does not contain {self.value}")

    @property
    def cap_hit(self) -> bool:
        return self.cap is not None and math.isinf(self.value)

    def to_dict(self) -> dict:
        def num(x):
            return "inf" if x is not None and math.isinf(x) else x
        out = {"value": num(self.value), "lower": num(self.lower), "upper": num(self.upper),
               "family": self.family}
        if self.certificate is not None:
            out["certificate"] = self.certificate.describe()
        if self.cap is not None:
            out["cap"] = self.cap
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _exact(value, cert=None, family="", note=""):
    return DistanceResult(value, value, value, cert, family, note=note)


# ---------------------------------------------------------------- helpers

def _act(action: MonoidAction | None, g) -> MonotoneMap:
    if action is None:
        return g
    return action.act(g)


def _mul(action: MonoidAction | None, h, g):
    """Element acting as h after g."""
    if action is None:
        return compose_maps(h, g)
    return action.mul(h, g)


def _is_translation(m: MonotoneMap) -> bool:
    if isinstance(m, Shift):
        return m.t >= 0
    if isinstance(m, Scale):
        return m.c >= 1
    if isinstance(m, VectorShift):
        return bool(np.all(m.v >= 0))
    if isinstance(m, FiniteMap):
        return m.is_translation()
    return maps_leq(identity_map(m.domain), m)


def _missing_cells(action, g, h) -> list[str]:
    missing = []
    if not _is_translation(_act(action, _mul(action, h, g))):
        missing.append("alpha: e => hg")
    if not _is_translation(_act(action, _mul(action, g, h))):
        missing.append("beta: e => gh")
    return missing


def _symbolic(M) -> bool:
    return isinstance(M, (IntervalModule, RectangleModule))


# ---------------------------------------------------------------- checking

def check_interleaving(M, N, g, h, phi, psi, action: MonoidAction | None = None) -> bool:
    """Whether (phi, psi) is a (g, h)-interleaving of M and N."""
    missing = _missing_cells(action, g, h)
    if missing:
        raise PreconditionFailed(missing)
    G, H = _act(action, g), _act(action, h)
    if isinstance(M, FiniteModule):
        return _check_finite(M, N, G, H, phi, psi)
    if _symbolic(M) and _symbolic(N):
        return _check_symbolic(M, N, G, H, phi, psi)
    raise ShapeMismatch("modules must both be finite or both symbolic")


def _check_finite(M, N, G: FiniteMap, H: FiniteMap, phi, psi) -> bool:
    gN, hM = pullback(N, G), pullback(M, H)
    if phi.source != M or phi.target != gN or psi.source != N or psi.target != hM:
        raise ShapeMismatch("phi must map M -> gN and psi must map N -> hM")
    if not (is_morphism(phi) and is_morphism(psi)):
        return False
    for p in range(M.poset.n):
        gp, hp = G.table[p], H.table[p]
        if not np.array_equal(_f2.matmul(psi[gp], phi[p]), M.map((p, H.table[gp]))):
            return False
        if not np.array_equal(_f2.matmul(phi[hp], psi[p]), N.map((p, G.table[hp]))):
            return False
    return True


def _critical_points(mods, nonneg: bool):
    boxes = [(m.lo, m.hi) for m in mods if not m.empty]
    n = len(mods[0].lo)
    axes = []
    for i in range(n):
        vals = sorted({float(x) for lo, hi in boxes for x in (lo[i], hi[i]) if math.isfinite(x)})
        reps = ([vals[0] - 1.0] if vals else []) + vals
        if nonneg:
            reps = sorted({0.0} | {v for v in reps if v >= 0})
        axes.append(reps or [0.0])
    for pt in itertools.product(*axes):
        yield np.array(pt)


def _scalar(m) -> int:
    if isinstance(m, BoxMorphism):
        return 0 if m.is_zero() else int(m.scalar % 2)
    return int(m) % 2


def _check_symbolic(M, N, G, H, phi, psi) -> bool:
    if len(M.lo) != len(N.lo):
        raise DimensionMismatch("modules over different parameter spaces")
    gN, hM = pullback(N, G), pullback(M, H)
    if isinstance(phi, BoxMorphism):
        if phi.source != M or phi.target != gN:
            raise ShapeMismatch("phi must map M -> gN")
        if not is_morphism(phi):
            return False
    if isinstance(psi, BoxMorphism):
        if psi.source != N or psi.target != hM:
            raise ShapeMismatch("psi must map N -> hM")
        if not is_morphism(psi):
            return False
    a, b = _scalar(phi), _scalar(psi)
    if a and not box_hom_nonzero(M, gN):
        a = 0
    if b and not box_hom_nonzero(N, hM):
        b = 0
    hgM, ghN = pullback(hM, G), pullback(gN, H)
    nonneg = isinstance(G, Scale)
    for p in _critical_points([M, N, gN, hM, hgM, ghN], nonneg):
        inM, inN, in_gN, in_hM = M.contains(p), N.contains(p), gN.contains(p), hM.contains(p)
        in_hgM, in_ghN = hgM.contains(p), ghN.contains(p)
        lhs1 = a and b and inM and in_gN and in_hgM
        rhs1 = inM and in_hgM
        lhs2 = a and b and inN and in_hM and in_ghN
        rhs2 = inN and in_ghN
        if bool(lhs1) != bool(rhs1) or bool(lhs2) != bool(rhs2):
            return False
    return True


def interleavable_symbolic(M, N, G: MonotoneMap, H: MonotoneMap) -> InterleavingCertificate | None:
    """Search the (at most four) candidate pairs of box morphisms."""
    if _missing_cells(None, G, H):
        return None
    gN, hM = pullback(N, G), pullback(M, H)
    a_opts = [1, 0] if box_hom_nonzero(M, gN) else [0]
    b_opts = [1, 0] if box_hom_nonzero(N, hM) else [0]
    for a in a_opts:
        for b in b_opts:
            phi, psi = BoxMorphism(M, gN, a), BoxMorphism(N, hM, b)
            if _check_symbolic(M, N, G, H, phi, psi):
                return InterleavingCertificate(G, H, phi, psi)
    return None


# ---------------------------------------------------------------- finite search

def _combine(basis, coeffs, source, target):
    comps = [np.zeros((target.dims[p], source.dims[p]), dtype=np.uint8) for p in range(source.poset.n)]
    for c, m in zip(coeffs, basis):
        if c:
            for p in range(len(comps)):
                comps[p] ^= m[p]
    return ModuleMorphism(source, target, comps)


def _solve_second(M, N, G, H, phi, basis2, hM):
    """Given phi: M -> gN, find psi in span(basis2) completing the interleaving."""
    P = M.poset
    cols = []
    for B in basis2:
        parts = []
        for p in range(P.n):
            parts.append(_f2.matmul(B[G.table[p]], phi[p]).ravel())
            parts.append(_f2.matmul(phi[H.table[p]], B[p]).ravel())
        cols.append(np.concatenate(parts) if parts else np.zeros(0, np.uint8))
    rhs = []
    for p in range(P.n):
        rhs.append(M.map((p, H.table[G.table[p]])).ravel())
        rhs.append(N.map((p, G.table[H.table[p]])).ravel())
    b = np.concatenate(rhs).astype(np.uint8) if rhs else np.zeros(0, np.uint8)
    A = np.stack(cols, axis=1) if cols else np.zeros((len(b), 0), np.uint8)
    x = _f2.solve(A, b)
    if x is None:
        return None
    return _combine(basis2, x, N, hM)


def exists_interleaving(M: FiniteModule, N: FiniteModule, g, h, action: MonoidAction | None = None,
                        dim_limit: int = SEARCH_DIM_LIMIT) -> InterleavingCertificate | None:
    """Find a (g, h)-interleaving of finite modules, or return None.

    Fixing phi makes both triangle conditions linear in psi, so we enumerate
    the smaller of the two morphism spaces and solve for the other side.
    Raises SearchBudgetExceeded rather than answering when both spaces have
    dimension above ``dim_limit``.
    """
    if _missing_cells(action, g, h):
        return None
    G, H = _act(action, g), _act(action, h)
    gN, hM = pullback(N, G), pullback(M, H)
    B1 = morphism_space_basis(M, gN)
    B2 = morphism_space_basis(N, hM)
    if min(len(B1), len(B2)) > dim_limit:
        raise SearchBudgetExceeded(f"morphism spaces of dimension {len(B1)} and {len(B2)}")
    if len(B1) <= len(B2):
        for coeffs in itertools.product((0, 1), repeat=len(B1)):
            phi = _combine(B1, coeffs, M, gN)
            psi = _solve_second(M, N, G, H, phi, B2, hM)
            if psi is not None:
                return InterleavingCertificate(g, h, phi, psi)
        return None
    for coeffs in itertools.product((0, 1), repeat=len(B2)):
        psi = _combine(B2, coeffs, N, hM)
        phi = _solve_second(N, M, H, G, psi, B1, gN)
        if phi is not None:
            return InterleavingCertificate(g, h, phi, psi)
    return None


def _maximal(maps: Sequence[FiniteMap]) -> list[FiniteMap]:
    out = []
    for g in maps:
        if not any(k is not g and maps_leq(g, k) and not maps_leq(k, g) for k in maps):
            out.append(g)
    # drop duplicates that are pointwise equivalent
    uniq = []
    for g in out:
        if not any(maps_leq(g, k) and maps_leq(k, g) for k in uniq):
            uniq.append(g)
    return uniq


def omega_interleaving_distance(M: FiniteModule, N: FiniteModule, translations: Sequence[FiniteMap],
                                omega: MonoidalWeight, prune: bool = True) -> DistanceResult:
    """min max(omega(g), omega(h)) over interleavable pairs of translations.

    Interleavability is upward closed (an interleaving at (g, h) pushes
    forward along g <= g' and h <= h'), so with ``prune`` only the
    pointwise-maximal translations below each weight level are tried.
    """
    translations = list(translations)
    for g in translations:
        if not g.is_translation():
            raise PreconditionFailed([f"{g!r} is not a translation"])
    w = [omega(g) for g in translations]
    if not prune:
        best, cert = INF, None
        for i, j in itertools.product(range(len(translations)), repeat=2):
            val = max(w[i], w[j])
            if val >= best:
                continue
            c = exists_interleaving(M, N, translations[i], translations[j])
            if c is not None:
                best, cert = val, c
        if cert is not None:
            cert.weight = best
        return DistanceResult(best, best, best, cert, "omega")
    for level in sorted(set(w)):
        allowed = _maximal([g for g, wg in zip(translations, w) if wg <= level])
        for g in allowed:
            for h in allowed:
                c = exists_interleaving(M, N, g, h)
                if c is not None:
                    c.weight = max(omega(g), omega(h))
                    return DistanceResult(c.weight, c.weight, c.weight, c, "omega")
    return DistanceResult(INF, INF, INF, None, "omega")


# ---------------------------------------------------------------- families and bisection

@dataclass
class Family:
    """Symmetric one-parameter family u -> (g_u, g_u) of weight u."""

    name: str
    make: Callable[[float, int], MonotoneMap]
    scale: Callable[[Sequence], float]
    notes: str = ""

    def maps(self, u: float, n: int) -> MonotoneMap:
        return self.make(u, n)


def _flow_make(u, n):
    return Shift(u) if n == 1 else VectorShift(np.full(n, u))


def _spread(mods) -> float:
    xs = [float(x) for m in mods if not m.empty for x in np.concatenate([m.lo, m.hi]) if math.isfinite(x)]
    return (max(xs) - min(xs)) if xs else 0.0


def _log_spread(mods) -> float:
    xs = [abs(math.log(float(x))) for m in mods if not m.empty for x in np.concatenate([m.lo, m.hi])
          if math.isfinite(x) and x > 0]
    return max(xs) if xs else 0.0


FLOW = Family("flow", _flow_make, _spread)
# (c, c) with c = e^u: 2-morphisms c => c' exist iff c <= c', so the symmetric
# reduction used for flows carries over with weight |log c| = u.
MULT = Family("mult", lambda u, n: Scale(math.exp(u)), _log_spread)


def direction_family(v, p: float = 2.0) -> Family:
    v = np.asarray(v, dtype=float)
    if np.any(v < 0) or not np.any(v > 0):
        raise UnsupportedAction("direction must be a nonzero nonnegative vector")
    v = v / np.linalg.norm(v, ord=p)
    return Family(f"direction{v.tolist()}", lambda u, n: VectorShift(u * v), _spread)


def distance_bisect(M, N, family: Family = FLOW, tol: float = 1e-6,
                    cap_factor: float = 2.0 ** 20,
                    feasible: Callable | None = None) -> DistanceResult:
    """Bisection on the symmetric parameter u of ``family``.

    Returns the bracket [lower, upper] with upper - lower <= tol and the
    certificate found at ``upper``.  If nothing is feasible up to the cap the
    value is +inf and the cap is recorded.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = len(M.lo)
    if len(N.lo) != n:
        raise DimensionMismatch("modules over different parameter spaces")
    if family is MULT and n != 1:
        raise UnsupportedAction("multiplicative family acts on the half line only")

    def probe(u):
        G = family.maps(u, n)
        if feasible is not None:
            return feasible(M, N, G, G)
        return interleavable_symbolic(M, N, G, G)

    def probe_or_cap(u):
        # past the float range the answer cannot be certified; treat as the cap
        try:
            return probe(u), False
        except NumericalRange:
            return None, True

    c0 = probe(0.0)
    if c0 is not None:
        c0.weight = 0.0
        return DistanceResult(0.0, 0.0, 0.0, c0, family.name)
    seed = 2.0 * family.scale([M, N])
    if not seed > 0:
        seed = 1.0
    cap = seed * cap_factor
    hi = seed
    cert, out_of_range = probe_or_cap(hi)
    while cert is None:
        if hi >= cap or out_of_range:
            return DistanceResult(INF, hi if out_of_range else cap, INF, None, family.name,
                                  cap=hi if out_of_range else cap,
                                  note="no interleaving found up to the cap")
        hi = min(2 * hi, cap)
        cert, out_of_range = probe_or_cap(hi)
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        c = probe(mid)
        if c is None:
            lo = mid
        else:
            hi, cert = mid, c
    cert.weight = hi
    return DistanceResult(hi, lo, hi, cert, family.name)


def _log_or_neginf(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _gap(x, y) -> float:
    if x == y:
        return 0.0
    return abs(x - y)


def interval_distance_closed_form(I: IntervalModule, J: IntervalModule, action_kind: str = "flow") -> float:
    """Closed form for two interval modules under the flow or multiplicative action."""
    if action_kind in ("flow",):
        f = float
    elif action_kind in ("mult", "multiplicative"):
        if (not I.empty and I.a < 0) or (not J.empty and J.a < 0):
            raise UnsupportedAction("multiplicative action needs supports in [0, inf)")
        f = _log_or_neginf
    else:
        raise UnsupportedAction(f"unknown action kind {action_kind!r}")
    if I.empty and J.empty:
        return 0.0
    half = [(f(X.b) - f(X.a)) / 2 if not X.empty else 0.0 for X in (I, J)]
    kill = max(half)
    if I.empty or J.empty:
        return kill
    match = max(_gap(f(I.a), f(J.a)), _gap(f(I.b), f(J.b)))
    return min(match, kill)


def asymmetric_distance(M, N, family: Family = FLOW, extra: Sequence[float] = ()) -> DistanceResult:
    """min max(u, v) over separately chosen parameters (g_u, g_v).

    Candidate parameters are all pairwise differences of critical
    coordinates (and their halves), which contain the optimum for the
    flow family on intervals; used to test the symmetric reduction.
    Feasibility is tested exactly at each candidate, so endpoints should be
    exactly representable (dyadic, say) for the optimum to be found.
    """
    n = len(M.lo)
    if family is MULT:
        coords = [math.log(x) for m in (M, N) if not m.empty for x in (m.a, m.b) if x > 0]
    else:
        coords = [float(x) for m in (M, N) if not m.empty for x in np.concatenate([m.lo, m.hi])]
    diffs = {abs(x - y) for x in coords for y in coords} | set(extra) | {0.0}
    cands = sorted(diffs | {d / 2 for d in diffs})
    best = None
    for u in cands:
        for v in cands:
            w = max(u, v)
            if best is not None and w >= best[0]:
                continue
            c = interleavable_symbolic(M, N, family.maps(u, n), family.maps(v, n))
            if c is not None:
                best = (w, c)
    if best is None:
        return DistanceResult(INF, INF, INF, None, family.name)
    best[1].weight = best[0]
    return _exact(best[0], best[1], family.name)


# ---------------------------------------------------------------- rectangles

def rectangle_feasible(R1: RectangleModule, R2: RectangleModule, s, t) -> np.ndarray:
    """Vectorized (s, t)-interleavability of two rectangle modules.

    ``s`` and ``t`` are arrays of shape (k, n) (or (n,)).  Either both maps
    are zero, which works iff each module dies along the total shift s + t,
    or both are the identity on the overlaps, which needs the morphism
    criterion for M -> N(.+s) and N -> M(.+t) plus containment conditions
    for the two triangles.
    """
    s = np.atleast_2d(np.asarray(s, dtype=float))
    t = np.atleast_2d(np.asarray(t, dtype=float))
    a, b, c, d = R1.lo, R1.hi, R2.lo, R2.hi
    st = s + t
    dieM = np.ones(len(st), bool) if R1.empty else np.any(st >= b - a, axis=1)
    dieN = np.ones(len(st), bool) if R2.empty else np.any(st >= d - c, axis=1)
    zero = dieM & dieN
    if R1.empty or R2.empty:
        return zero
    hom1 = np.all(c - s <= a, axis=1) & np.all(d - s <= b, axis=1) & np.all(a < d - s, axis=1)
    hom2 = np.all(a - t <= c, axis=1) & np.all(b - t <= d, axis=1) & np.all(c < b - t, axis=1)
    tri1 = dieM | (np.all(c <= a + s, axis=1) & np.all(b <= d + t, axis=1))
    tri2 = dieN | (np.all(a <= c + t, axis=1) & np.all(d <= b + s, axis=1))
    return zero | (hom1 & hom2 & tri1 & tri2)


def _norm(x, p):
    return np.linalg.norm(np.atleast_2d(x), ord=p, axis=1)


def rectangle_lower_bound(R1: RectangleModule, R2: RectangleModule, p: float = 2.0) -> float:
    """Rigorous lower bound for the shift-monoid distance.

    Zero maps need s_i + t_i >= side_i(M) and s_j + t_j >= side_j(N) for
    some i, j; the best such pair is symmetric (s = t) by convexity.  Nonzero
    maps need s >= max(0, c - a, d - b) and t >= max(0, a - c, b - d).
    """
    a, b, c, d = R1.lo, R1.hi, R2.lo, R2.hi
    n = len(a)
    if R1.empty and R2.empty:
        return 0.0
    LM = None if R1.empty else b - a
    LN = None if R2.empty else d - c
    best = INF
    if LM is None or LN is None:
        L = LN if LM is None else LM
        best = float(np.min(L)) / 2
    else:
        for i in range(n):
            for j in range(n):
                v = np.zeros(n)
                v[i] = LM[i] / 2
                v[j] = max(v[j], LN[j] / 2)
                best = min(best, float(np.linalg.norm(v, ord=p)))
        s_star = np.maximum(0, np.maximum(c - a, d - b))
        t_star = np.maximum(0, np.maximum(a - c, b - d))
        best = min(best, float(max(np.linalg.norm(s_star, ord=p), np.linalg.norm(t_star, ord=p))))
    return best


def _axis_candidates(R1, R2, lattice):
    n = len(R1.lo)
    out = []
    for i in range(n):
        xs = [float(m.lo[i]) for m in (R1, R2) if not m.empty] + [float(m.hi[i]) for m in (R1, R2) if not m.empty]
        diffs = {abs(x - y) for x in xs for y in xs}
        span = max(diffs) if diffs else 1.0
        vals = {0.0} | diffs | {v / 2 for v in diffs} | set(np.linspace(0, span, lattice).tolist())
        out.append(sorted(vals))
    return out


def rectangle_distance(R1: RectangleModule, R2: RectangleModule, mode: str = "flow", p: float = 2.0,
                       tol: float = 1e-9, lattice: int = 17) -> DistanceResult:
    """Interleaving distance of rectangle modules.

    ``mode="flow"``: bisection over t with the diagonal shift t(1,...,1).
    ``mode="shift"``: the R^n_{>=0} shift monoid with p-norm weight,
    searched over asymmetric pairs (s, t) on a lattice of candidate
    coordinates followed by coordinatewise refinement.
    """
    if R1.n != R2.n:
        raise DimensionMismatch(f"{R1.n} vs {R2.n} parameters")
    n = R1.n
    if mode == "flow":
        def feas(M, N, G, H):
            gv = G.v if isinstance(G, VectorShift) else np.array([G.t])
            hv = H.v if isinstance(H, VectorShift) else np.array([H.t])
            if rectangle_feasible(M, N, gv, hv)[0]:
                return interleavable_symbolic(M, N, G, H)
            return None
        return distance_bisect(R1, R2, FLOW, tol=max(tol, 1e-12), feasible=feas)
    if mode != "shift":
        raise UnsupportedAction(f"unknown mode {mode!r}")
    lower = rectangle_lower_bound(R1, R2, p)
    if lower == 0.0 and bool(rectangle_feasible(R1, R2, np.zeros(n), np.zeros(n))[0]):
        cert = interleavable_symbolic(R1, R2, VectorShift(np.zeros(n)), VectorShift(np.zeros(n)))
        return _exact(0.0, cert, f"shift(p={p:g})")
    if n >= 3:
        lattice = min(lattice, 5)
    axes = _axis_candidates(R1, R2, lattice)
    S = np.array(list(itertools.product(*axes)))
    nS = _norm(S, p)
    order = np.argsort(nS, kind="stable")
    S, nS = S[order], nS[order]
    best_w, best = INF, None
    chunk = max(1, 200_000 // len(S))
    for start in range(0, len(S), chunk):
        s_blk = S[start:start + chunk]
        ws = nS[start:start + chunk]
        if ws[0] >= best_w:
            break
        ss = np.repeat(s_blk, len(S), axis=0)
        tt = np.tile(S, (len(s_blk), 1))
        w = np.maximum(np.repeat(ws, len(S)), np.tile(nS, len(s_blk)))
        ok = rectangle_feasible(R1, R2, ss, tt) & (w < best_w)
        if ok.any():
            k = int(np.argmin(np.where(ok, w, np.inf)))
            best_w, best = float(w[k]), (ss[k].copy(), tt[k].copy())
    if best is None:
        return DistanceResult(INF, lower, INF, None, f"shift(p={p:g})")
    s, t = best
    # coordinatewise descent; feasibility is upward closed in (s, t)
    for _ in range(100):
        before = np.concatenate([s, t])
        for vec in (s, t):
            for i in range(n):
                hi_i = vec[i]
                vec[i] = 0.0
                if rectangle_feasible(R1, R2, s, t)[0]:
                    continue
                lo_i = 0.0
                while hi_i - lo_i > tol:
                    vec[i] = mid = 0.5 * (lo_i + hi_i)
                    if rectangle_feasible(R1, R2, s, t)[0]:
                        hi_i = mid
                    else:
                        lo_i = mid
                vec[i] = hi_i
        if np.allclose(before, np.concatenate([s, t]), rtol=0, atol=tol):
            break
    value = float(max(_norm(s, p)[0], _norm(t, p)[0]))
    cert = interleavable_symbolic(R1, R2, VectorShift(s), VectorShift(t))
    if cert is not None:
        cert.weight = value
    return DistanceResult(value, min(lower, value), value, cert, f"shift(p={p:g})")


# ---------------------------------------------------------------- discretized oracle

@dataclass
class GridDiscretization:
    """Rectangle modules restricted to a finite lattice containing all corners."""

    step: float
    axes: list
    poset: Any
    modules: list = field(default_factory=list)

    def index(self, coords) -> int:
        idx = [int(round((x - ax[0]) / self.step)) for x, ax in zip(coords, self.axes)]
        return int(np.ravel_multi_index(idx, [len(ax) for ax in self.axes]))

    def shift_map(self, v) -> FiniteMap:
        k = [int(round(x / self.step)) for x in np.ravel(v)]
        if any(abs(ki * self.step - x) > 1e-9 for ki, x in zip(k, np.ravel(v))):
            raise ValueError("shift is not on the lattice")
        shape = [len(ax) for ax in self.axes]
        table = []
        for idx in itertools.product(*[range(s) for s in shape]):
            new = [min(i + ki, s - 1) for i, ki, s in zip(idx, k, shape)]
            table.append(int(np.ravel_multi_index(new, shape)))
        return FiniteMap(self.poset, table)


def discretize_rectangles(rects: Sequence[RectangleModule], step: float = 1.0) -> GridDiscretization:
    n = rects[0].n
    corners = np.array([x for r in rects if not r.empty for x in (r.a, r.b)]).reshape(-1, n)
    if len(corners) == 0:
        corners = np.zeros((1, n))
    if np.any(np.abs(corners / step - np.round(corners / step)) > 1e-9):
        raise ValueError("all corners must lie on the lattice")
    axes = [np.arange(corners[:, i].min() - step, corners[:, i].max() + 1.5 * step, step) for i in range(n)]
    poset = grid_poset([len(ax) for ax in axes])
    disc = GridDiscretization(step, axes, poset)
    for r in rects:
        pts = [k for k, idx in enumerate(itertools.product(*[range(len(ax)) for ax in axes]))
               if r.contains([ax[i] for ax, i in zip(axes, idx)])]
        disc.modules.append(FiniteModule.indicator(poset, pts))
    return disc


def rectangle_distance_oracle(R1: RectangleModule, R2: RectangleModule, mode: str = "shift",
                              p: float = 2.0, step: float = 0.5, max_shift: float | None = None) -> DistanceResult:
    """Brute force over lattice shift pairs with exact F2 interleaving search.

    Exact for the discretized problem; agrees with the continuous one when
    the optimum lies on the lattice.  Pairs are tried in increasing weight
    so the first success is the minimum.
    """
    disc = discretize_rectangles([R1, R2], step)
    M, N = disc.modules
    n = R1.n
    if max_shift is None:
        max_shift = max(float(ax[-1] - ax[0]) for ax in disc.axes)
    steps = np.arange(0, max_shift + step / 2, step)
    if mode == "flow":
        vecs = [np.full(n, u) for u in steps]
        weight = [float(u) for u in steps]
    else:
        vecs = [np.array(v) for v in itertools.product(steps, repeat=n)]
        weight = [float(np.linalg.norm(v, ord=p)) for v in vecs]
    maps = [disc.shift_map(v) for v in vecs]
    if mode == "flow":
        pairs = [(weight[i], i, i) for i in range(len(vecs))]
    else:
        pairs = [(max(weight[i], weight[j]), i, j) for i in range(len(vecs)) for j in range(len(vecs))]
    pairs.sort()
    for w, i, j in pairs:
        c = exists_interleaving(M, N, maps[i], maps[j])
        if c is not None:
            c.weight = w
            c.g, c.h = vecs[i], vecs[j]
            return _exact(w, c, f"oracle-{mode}")
    return DistanceResult(INF, max(pairs)[0] if pairs else 0.0, INF, None, f"oracle-{mode}")


__all__ = [
    "InterleavingCertificate", "DistanceResult", "check_interleaving", "interleavable_symbolic",
    "exists_interleaving", "omega_interleaving_distance", "Family", "FLOW", "MULT",
    "direction_family", "distance_bisect", "interval_distance_closed_form", "asymmetric_distance",
    "rectangle_feasible", "rectangle_lower_bound", "rectangle_distance", "discretize_rectangles",
    "rectangle_distance_oracle", "EMPTY",
]
