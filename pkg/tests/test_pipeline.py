import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from interleavings import _f2
from interleavings.errors import NonSublevelClosed, ParseError, UnsupportedDegree
from interleavings.pipeline import (FiniteComplex, FilterFunction, cycle_complex, function_distance_bisect,
                                    function_interleaving_distance, grid_complex, persistent_homology,
                                    stability_experiment, sublevel_filtration, union_find_barcode_0)
from interleavings.posets import chain, finite_action, translations, omega_weight


def _betti(K, cells, degree):
    """dim H_degree of the subcomplex spanned by ``cells`` via F2 ranks."""
    cells = sorted(cells, key=lambda c: (len(c), c))
    k = [c for c in cells if len(c) == degree + 1]
    up = [c for c in cells if len(c) == degree + 2]
    down = [c for c in cells if len(c) == degree]

    def rank(rows, cols):
        if not rows or not cols:
            return 0
        idx = {c: i for i, c in enumerate(rows)}
        M = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for j, c in enumerate(cols):
            for f in K.faces(c):
                M[idx[f], j] = 1
        return _f2.rank(M)
    return len(k) - rank(down, k) - rank(k, up)


def test_grid_complex_size_and_boundary():
    K = grid_complex(10)
    assert len(K.cells) == 100 + 261 + 162
    assert K.boundary_squared_is_zero()


def test_complex_text_round_trip():
    K = grid_complex(3)
    assert FiniteComplex.from_text(K.to_text()).cells == K.cells


def test_missing_face_rejected():
    with pytest.raises(ValueError):
        FiniteComplex(3, [(0, 1, 2)])


def test_cycle_has_one_loop():
    K = cycle_complex(4)
    F = sublevel_filtration(FilterFunction([0, 0, 0, 0]), K)
    assert list(persistent_homology(F, 1)) == [(0.0, math.inf)]
    assert list(persistent_homology(F, 0)) == [(0.0, math.inf)]


def test_loop_born_at_last_edge():
    K = cycle_complex(4)
    F = sublevel_filtration(FilterFunction([0, 1, 2, 1]), K)
    assert list(persistent_homology(F, 1)) == [(2.0, math.inf)]


def test_degree_two_unsupported():
    F = sublevel_filtration(FilterFunction([0, 0, 0]), cycle_complex(3))
    with pytest.raises(UnsupportedDegree):
        persistent_homology(F, 2)


def test_non_sublevel_cell_values():
    K = cycle_complex(3)
    with pytest.raises(NonSublevelClosed):
        sublevel_filtration(FilterFunction([0, 0, 0], {(0, 1): -1.0}), K)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=16, max_size=16))
def test_barcodes_match_betti_numbers(vals):
    K = grid_complex(4)
    phi = FilterFunction(np.array(vals, float))
    F = sublevel_filtration(phi, K)
    for degree in (0, 1):
        B = persistent_homology(F, degree)
        for level in range(5):
            alive = sum(1 for b, d in B if b <= level < d)
            assert alive == _betti(K, F.sublevel(level), degree)
    assert persistent_homology(F, 0) == union_find_barcode_0(phi, K)


def test_function_distances_closed_forms():
    a = FilterFunction([1.0, 2.0, 4.0])
    b = FilterFunction([1.5, 2.0, 3.0])
    assert function_interleaving_distance(a, b).value == 1.0
    assert function_interleaving_distance(a, b, "mult").value == pytest.approx(math.log(1.5))
    assert function_distance_bisect(a, b).value == pytest.approx(1.0, abs=1e-8)
    assert function_distance_bisect(a, b, "mult").value == pytest.approx(math.log(1.5), abs=1e-8)


def test_vector_distance_against_grid_search():
    rng = np.random.default_rng(0)
    for _ in range(10):
        a = rng.integers(0, 4, size=(4, 2)).astype(float)
        b = rng.integers(0, 4, size=(4, 2)).astype(float)
        best = math.inf
        shifts = [np.array(v, float) for v in itertools.product(range(5), repeat=2)]
        for g in shifts:
            if not np.all(a <= b + g):
                continue
            for h in shifts:
                if np.all(b <= a + h):
                    best = min(best, max(np.linalg.norm(g), np.linalg.norm(h)))
        res = function_interleaving_distance(FilterFunction(a), FilterFunction(b), "vector")
        assert res.value == pytest.approx(best, abs=1e-12)


def test_finite_action_distance():
    P = chain(4)
    act = finite_action(P, translations(P), omega_weight(P))
    a, b = FilterFunction([0, 1, 3]), FilterFunction([1, 1, 2])
    assert function_interleaving_distance(a, b, act).value == 1


def test_function_csv_round_trip():
    phi = FilterFunction([0.5, 1.25, 3.0])
    assert np.array_equal(FilterFunction.from_csv(phi.to_csv()).values, phi.values)
    with pytest.raises(ParseError):
        FilterFunction.from_csv("1,0.5\n")


def test_small_stability_runs():
    rep = stability_experiment(trials=10, grid=6, noise=0.1, seed=3)
    assert rep.ok and rep.satisfied_trials() == 10
    assert rep.to_csv().startswith("trial,degree,lhs,rhs,margin")
    rep = stability_experiment(trials=5, grid=5, action="mult", seed=1)
    assert rep.ok
