import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from interleavings.errors import PreconditionFailed, SearchBudgetExceeded, UnsupportedAction
from interleavings.interleave import (FLOW, MULT, DistanceResult, asymmetric_distance, check_interleaving,
                                      direction_family, distance_bisect, exists_interleaving,
                                      interleavable_symbolic, interval_distance_closed_form,
                                      omega_interleaving_distance, rectangle_distance,
                                      rectangle_distance_oracle, rectangle_feasible, rectangle_lower_bound)
from interleavings.pmod import EMPTY, BoxMorphism, FiniteModule, IntervalModule, RectangleModule, pullback
from interleavings.posets import FiniteMap, Shift, chain, grid_poset, omega_weight, translations

M1 = RectangleModule((0, 0), (2, 2))
M2 = RectangleModule((1, 0), (3, 2))
M3 = RectangleModule((1, 1), (3, 3))

# frozen values from the discretized oracle at step 0.5 (exact F2 search)
RECT_FROZEN = {
    ("flow", 0, 1): 1.0, ("flow", 0, 2): 1.0, ("flow", 1, 2): 1.0,
    ("shift", 0, 1): 1.0, ("shift", 0, 2): 1.0, ("shift", 1, 2): 1.0,
}


def test_interval_against_empty():
    assert distance_bisect(IntervalModule(0, 2), EMPTY, FLOW, tol=1e-9).value == pytest.approx(1.0, abs=1e-8)
    assert interval_distance_closed_form(IntervalModule(0, 2), EMPTY) == 1.0


def test_bracket_is_tight_and_certified():
    res = distance_bisect(IntervalModule(0, 3), IntervalModule(1, 5), FLOW, tol=1e-7)
    assert res.upper - res.lower <= 1e-7
    assert res.lower <= 2.0 <= res.upper + 1e-12
    c = res.certificate
    assert check_interleaving(IntervalModule(0, 3), IntervalModule(1, 5), c.g, c.h, c.phi, c.psi)


def test_zero_distance_for_equal_modules():
    I = IntervalModule(1, 2)
    assert distance_bisect(I, I).value == 0.0


@settings(max_examples=80, deadline=None)
@given(st.floats(0, 5), st.floats(0.01, 5), st.floats(0, 5), st.floats(0.01, 5))
def test_flow_closed_form_matches_bisection(a, la, c, lc):
    I, J = IntervalModule(a, a + la), IntervalModule(c, c + lc)
    exact = interval_distance_closed_form(I, J, "flow")
    res = distance_bisect(I, J, FLOW, tol=1e-7)
    assert res.lower - 1e-9 <= exact <= res.upper + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.floats(0.01, 5), st.floats(1.01, 5), st.floats(0.01, 5), st.floats(1.01, 5))
def test_mult_closed_form_matches_bisection(a, ra, c, rc):
    I, J = IntervalModule(a, a * ra), IntervalModule(c, c * rc)
    exact = interval_distance_closed_form(I, J, "mult")
    res = distance_bisect(I, J, MULT, tol=1e-7)
    assert res.lower - 1e-9 <= exact <= res.upper + 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 6), st.integers(1, 4), st.integers(0, 6), st.integers(1, 4))
def test_interval_closed_form_matches_discrete_oracle(a, la, c, lc):
    # half-integer lattice: all optima of the flow problem are multiples of 1/2
    I, J = RectangleModule((a,), (a + la,)), RectangleModule((c,), (c + lc,))
    oracle = rectangle_distance_oracle(I, J, "flow", step=0.5).value
    assert oracle == interval_distance_closed_form(IntervalModule(a, a + la), IntervalModule(c, c + lc))


def test_symmetric_reduction_matches_asymmetric_search():
    rng = random.Random(5)
    for _ in range(20):
        # dyadic endpoints keep every candidate parameter exact in floating point
        a, c = rng.randint(0, 24) / 8, rng.randint(0, 24) / 8
        I, J = IntervalModule(a, a + rng.randint(1, 24) / 8), IntervalModule(c, c + rng.randint(1, 24) / 8)
        assert asymmetric_distance(I, J).value == pytest.approx(interval_distance_closed_form(I, J), abs=1e-12)


def test_mult_with_zero_left_endpoint_is_infinite():
    res = distance_bisect(IntervalModule(0, 2), EMPTY, MULT)
    assert math.isinf(res.value) and res.cap_hit
    assert math.isinf(interval_distance_closed_form(IntervalModule(0, 2), EMPTY, "mult"))


def test_unbounded_interval_never_dies():
    res = distance_bisect(IntervalModule(0, math.inf), EMPTY, FLOW)
    assert math.isinf(res.value) and res.cap_hit


def test_precondition_failure_names_missing_cells():
    I = IntervalModule(0, 1)
    with pytest.raises(PreconditionFailed):
        check_interleaving(I, I, Shift(-1), Shift(0.5), BoxMorphism(I, pullback(I, Shift(-1))),
                           BoxMorphism(I, pullback(I, Shift(0.5))))


def test_symbolic_certificate_shapes():
    I, J = IntervalModule(0, 2), IntervalModule(0.5, 2.5)
    c = interleavable_symbolic(I, J, Shift(0.5), Shift(0.5))
    assert c is not None and c.phi.scalar == 1 and c.psi.scalar == 1
    assert interleavable_symbolic(I, J, Shift(0.4), Shift(0.4)) is None


def test_mult_family_rejects_rectangles():
    with pytest.raises(UnsupportedAction):
        distance_bisect(M1, M2, MULT)


# ---------------------------------------------------------------- finite modules

def _random_interval_module(P, rng):
    # an up-down interval in the grid: points between two chosen points
    pts = list(range(P.n))
    lo, hi = sorted(rng.sample(pts, 2)) if P.n > 1 else (0, 0)
    if not P.leq(lo, hi):
        lo = hi
    supp = [r for r in pts if P.leq(lo, r) and P.leq(r, hi)]
    return FiniteModule.indicator(P, supp)


def test_omega_distance_pruned_equals_exhaustive():
    rng = random.Random(11)
    for P in (chain(4), grid_poset([2, 2])):
        ts, w = translations(P), omega_weight(P)
        for _ in range(8):
            M, N = _random_interval_module(P, rng), _random_interval_module(P, rng)
            a = omega_interleaving_distance(M, N, ts, w, prune=True).value
            b = omega_interleaving_distance(M, N, ts, w, prune=False).value
            assert a == b


def test_exists_interleaving_certificate_checks():
    P = chain(4)
    M, N = FiniteModule.indicator(P, (0, 1)), FiniteModule.indicator(P, (1, 2))
    g = FiniteMap(P, [1, 2, 3, 3])
    c = exists_interleaving(M, N, g, g)
    assert c is not None
    assert check_interleaving(M, N, g, g, c.phi, c.psi)
    ident = FiniteMap(P, [0, 1, 2, 3])
    assert exists_interleaving(M, N, ident, ident) is None


def test_search_budget():
    P = chain(2)
    M = FiniteModule(P, [5, 5], {(0, 1): np.eye(5, dtype=np.uint8)})
    ident = FiniteMap(P, [0, 1])
    with pytest.raises(SearchBudgetExceeded):
        exists_interleaving(M, M, ident, ident, dim_limit=3)


# ---------------------------------------------------------------- rectangles

@pytest.mark.parametrize("i,j", [(0, 1), (0, 2), (1, 2)])
def test_rectangle_flow_values(i, j):
    R = [M1, M2, M3]
    assert rectangle_distance(R[i], R[j], "flow", tol=1e-9).value == pytest.approx(RECT_FROZEN[("flow", i, j)],
                                                                                   abs=1e-6)


@pytest.mark.parametrize("i,j", [(0, 1), (0, 2), (1, 2)])
def test_rectangle_shift_values(i, j):
    R = [M1, M2, M3]
    res = rectangle_distance(R[i], R[j], "shift", p=2)
    assert res.value == pytest.approx(RECT_FROZEN[("shift", i, j)], abs=1e-6)
    assert res.lower <= res.value


def test_frozen_rectangle_values_reproduce_on_oracle():
    R = [M1, M2, M3]
    for (mode, i, j), v in RECT_FROZEN.items():
        assert rectangle_distance_oracle(R[i], R[j], mode, step=0.5).value == v


def test_feasibility_against_finite_search():
    rng = random.Random(2)
    for _ in range(25):
        def box():
            a = [rng.randint(0, 2), rng.randint(0, 2)]
            return RectangleModule(a, [x + rng.randint(1, 2) for x in a])
        R1, R2 = box(), box()
        from interleavings.interleave import discretize_rectangles
        disc = discretize_rectangles([R1, R2], 1.0)
        M, N = disc.modules
        for s in ([0, 0], [1, 0], [1, 1], [0, 2]):
            for t in ([0, 0], [0, 1], [1, 1]):
                sym = bool(rectangle_feasible(R1, R2, s, t)[0])
                fin = exists_interleaving(M, N, disc.shift_map(s), disc.shift_map(t)) is not None
                # the finite lattice is truncated at the top, which can only help the finite side
                if sym:
                    assert fin, (R1, R2, s, t)


def test_lower_bound_below_value():
    for A, B in [(M1, M2), (M1, M3), (M2, M3)]:
        assert rectangle_lower_bound(A, B) <= rectangle_distance(A, B, "shift").value + 1e-12


def test_direction_family():
    fam = direction_family([1, 0])
    res = distance_bisect(M1, M2, fam, tol=1e-8)
    assert res.value == pytest.approx(1.0, abs=1e-6)


def test_distance_result_json():
    r = DistanceResult(math.inf, 3.0, math.inf, None, "flow", cap=3.0)
    assert '"value": "inf"' in r.to_json()
    with pytest.raises(ValueError):
        DistanceResult(2.0, 3.0, 4.0)
