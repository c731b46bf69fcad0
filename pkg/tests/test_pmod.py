import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from interleavings.errors import NotFunctorial, ParseError, ShapeMismatch
from interleavings.interleave import discretize_rectangles
from interleavings.pmod import (EMPTY, Barcode, FiniteModule, IntervalModule, ModuleMorphism, RectangleModule,
                                box_hom_nonzero, is_morphism, morphism_space_basis, pullback,
                                rectangles_from_csv, rectangles_to_csv, shift_morphism)
from interleavings.posets import FiniteMap, Shift, VectorShift, chain, grid_poset


def _all_morphisms_brute(M, N):
    """Every tuple of component matrices that is natural."""
    P = M.poset
    shapes = [(N.dims[p], M.dims[p]) for p in range(P.n)]
    sizes = [a * b for a, b in shapes]
    count = 0
    for bits in itertools.product((0, 1), repeat=sum(sizes)):
        comps, o = [], 0
        for (a, b), k in zip(shapes, sizes):
            comps.append(np.array(bits[o:o + k], dtype=np.uint8).reshape(a, b))
            o += k
        if is_morphism(ModuleMorphism(M, N, comps)):
            count += 1
    return count


def test_interval_module_basics():
    I = IntervalModule(1.0, 3.0)
    assert I.contains(1.0) and not I.contains(3.0)
    assert EMPTY.empty
    with pytest.raises(ValueError):
        IntervalModule(2.0, 1.0)


def test_rectangle_contains_half_open():
    R = RectangleModule((0, 0), (2, 2))
    assert R.contains([0, 1.9]) and not R.contains([2, 0])
    with pytest.raises(ShapeMismatch):
        RectangleModule((0,), (1, 1))


def test_pullback_of_interval_along_shift():
    assert pullback(IntervalModule(1, 3), Shift(0.5)) == IntervalModule(0.5, 2.5)
    R = pullback(RectangleModule((0, 0), (2, 2)), VectorShift([1, 0]))
    assert R == RectangleModule((-1, 0), (1, 2))


def test_finite_module_rejects_non_functorial_square():
    P = grid_poset([2, 2])
    # all maps identity except one edge of the square set to zero
    maps = {(p, q): [[1]] for p, q in P.covers()}
    maps[P.covers()[0]] = [[0]]
    with pytest.raises(NotFunctorial):
        FiniteModule(P, [1, 1, 1, 1], maps)


def test_text_round_trip():
    P = chain(3)
    M = FiniteModule(P, [1, 2, 1], {(0, 1): [[1], [0]], (1, 2): [[0, 1]]})
    assert FiniteModule.from_text(M.to_text()) == M
    with pytest.raises(ParseError):
        FiniteModule.from_text("garbage")


@pytest.mark.parametrize("sa,sb", [((0, 1), (1, 2)), ((1, 2), (0, 1)), ((0,), (0, 1)), ((0, 1, 2), (1, 2)),
                                   ((), (0,)), ((1,), (1,))])
def test_basis_size_matches_brute_force_on_chain(sa, sb):
    P = chain(3)
    M, N = FiniteModule.indicator(P, sa), FiniteModule.indicator(P, sb)
    assert 2 ** len(morphism_space_basis(M, N)) == _all_morphisms_brute(M, N)


def test_basis_on_two_dimensional_module():
    P = chain(2)
    M = FiniteModule(P, [2, 1], {(0, 1): [[1, 1]]})
    N = FiniteModule(P, [1, 1], {(0, 1): [[1]]})
    assert 2 ** len(morphism_space_basis(M, N)) == _all_morphisms_brute(M, N)
    for B in morphism_space_basis(M, N):
        assert is_morphism(B)


def _lattice_boxes():
    vals = [0.0, 1.0, 2.0, 3.0]
    for a0, b0, a1, b1 in itertools.product(vals, repeat=4):
        if a0 < b0 and a1 < b1:
            yield RectangleModule((a0, a1), (b0, b1))


def test_box_criterion_matches_finite_hom_spaces():
    boxes = list(_lattice_boxes())
    rng = np.random.default_rng(3)
    picks = rng.choice(len(boxes), size=(60, 2))
    for i, j in picks:
        S, T = boxes[i], boxes[j]
        disc = discretize_rectangles([S, T], step=1.0)
        M, N = disc.modules
        assert box_hom_nonzero(S, T) == (len(morphism_space_basis(M, N)) > 0), (S, T)


def test_shift_morphism_finite_components():
    P = chain(3)
    M = FiniteModule.indicator(P, (0, 1))
    g = FiniteMap(P, [1, 2, 2])
    s = shift_morphism(M, g)
    assert is_morphism(s)
    assert s[0].tolist() == [[1]] and s[1].shape == (0, 1)


def test_barcode_csv_round_trip():
    B = Barcode([(0, 1), (0.5, float("inf")), (2, 2)])
    assert Barcode.from_csv(B.to_csv()) == B
    assert len(B.nonempty()) == 2
    with pytest.raises(ParseError):
        Barcode.from_csv("birth,death\n3,1\n")


def test_rectangle_csv_round_trip():
    rs = [RectangleModule((0, 0), (2, 2)), RectangleModule((1, 0.5), (3, 2))]
    assert rectangles_from_csv(rectangles_to_csv(rs)) == rs


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_hom_criterion_on_intervals(ends):
    a1, b1, a2, b2 = ends
    if a1 >= b1 or a2 >= b2:
        return
    I, J = IntervalModule(a1, b1), IntervalModule(a2, b2)
    M, N = discretize_rectangles([RectangleModule((a1,), (b1,)), RectangleModule((a2,), (b2,))]).modules
    assert box_hom_nonzero(I, J) == bool(morphism_space_basis(M, N))
