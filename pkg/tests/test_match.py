import itertools
import math

from hypothesis import given, settings, strategies as st

from interleavings.match import bottleneck
from interleavings.pmod import Barcode


def _brute(A, B):
    """Enumerate all partial matchings; unmatched bars pay half their length."""
    A = [bar for bar in A if bar[0] != bar[1]]
    B = [bar for bar in B if bar[0] != bar[1]]
    n, m = len(A), len(B)
    best = math.inf
    slots = list(range(m)) + [None] * n
    for perm in set(itertools.permutations(slots, n)):
        used = {j for j in perm if j is not None}
        cost = 0.0
        for i, j in enumerate(perm):
            if j is None:
                c = (A[i][1] - A[i][0]) / 2
            else:
                c = max(abs(A[i][0] - B[j][0]), abs(A[i][1] - B[j][1]))
                if math.isinf(A[i][1]) and math.isinf(B[j][1]):
                    c = abs(A[i][0] - B[j][0])
            cost = max(cost, c)
        for j in range(m):
            if j not in used:
                cost = max(cost, (B[j][1] - B[j][0]) / 2)
        best = min(best, cost)
    return best


def test_examples():
    for a in (1, 10, 100, 1000):
        assert bottleneck([(a, a + 1)], []) == 0.5
    assert bottleneck([], []) == 0.0
    assert bottleneck([(0, 4)], [(1, 4)]) == 1.0
    assert bottleneck(Barcode([(0, 1)]), Barcode([(0, 1)])) == 0.0


def test_essential_bars():
    assert bottleneck([(0, math.inf)], [(2, math.inf)]) == 2.0
    assert math.isinf(bottleneck([(0, math.inf)], []))
    assert bottleneck([(0, math.inf), (5, math.inf)], [(4, math.inf), (1, math.inf)]) == 1.0


bars = st.lists(st.tuples(st.integers(0, 6), st.integers(1, 4)).map(lambda t: (t[0], t[0] + t[1])), max_size=4)


@settings(max_examples=150, deadline=None)
@given(bars, bars)
def test_matches_brute_force(A, B):
    assert bottleneck(A, B) == _brute(A, B)


@settings(max_examples=60, deadline=None)
@given(bars, bars, bars)
def test_triangle_inequality(A, B, C):
    assert bottleneck(A, C) <= bottleneck(A, B) + bottleneck(B, C)
