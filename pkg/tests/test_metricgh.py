import itertools
import random

import numpy as np
import pytest

from interleavings.errors import ParseError, SizeCap
from interleavings.metricgh import (FiniteMetricSpace, altered_gh, gh, gh_all, gh_fragment_2cat, gh_reference,
                                    integer_metric_corpus, modified_gh, modified_gh_unnormalized,
                                    random_metric_space)
from interleavings.twocat import two_cat_interleaving, validate_2category
from interleavings.weights import audit_lawvere_2_weight


def point():
    return FiniteMetricSpace([[0]])


def pair(d):
    return FiniteMetricSpace([[0, d], [d, 0]])


def test_validation():
    with pytest.raises(ValueError):
        FiniteMetricSpace([[0, 1], [2, 0]])
    with pytest.raises(ValueError):
        FiniteMetricSpace([[0, 1, 5], [1, 0, 1], [5, 1, 0]])


def test_csv_round_trip():
    X = FiniteMetricSpace([[0, 1.5], [1.5, 0]])
    assert FiniteMetricSpace.from_csv(X.to_csv()) == X
    with pytest.raises(ParseError):
        FiniteMetricSpace.from_csv("0,a\n")


def test_point_versus_pair():
    # classical value: d_GH(point, X) = diam(X) / 2
    assert gh(point(), pair(2.0)) == 1.0
    assert altered_gh(point(), pair(2.0)) == 1.0
    assert modified_gh(point(), pair(2.0)) == 1.0
    assert modified_gh_unnormalized(point(), pair(2.0)) == 2.0


def test_corpus_size():
    # 1 one-point space, 3 two-point spaces, and 24 three-point integer metrics with entries in {1,2,3}
    assert len(integer_metric_corpus(3)) == 28


def test_kernel_matches_reference_loop():
    rng = random.Random(4)
    spaces = integer_metric_corpus(3)[:12] + [random_metric_space(3, rng) for _ in range(4)]
    for X, Y in itertools.product(spaces[::3], spaces[::2]):
        assert gh_all(X, Y) == pytest.approx(gh_reference(X, Y), abs=0)


def test_bilipschitz_and_modified_on_small_corpus():
    corpus = integer_metric_corpus(3)
    for X, Y in itertools.product(corpus, corpus):
        g, a, m = gh_all(X, Y)
        assert a <= g <= 2 * a
        assert m <= g


def test_isometric_spaces_have_zero_distance():
    X = FiniteMetricSpace([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    perm = [2, 0, 1]
    Y = FiniteMetricSpace(X.dist[np.ix_(perm, perm)])
    assert gh_all(X, Y) == (0.0, 0.0, 0.0)


def test_size_cap():
    X = FiniteMetricSpace(np.ones((5, 5)) - np.eye(5))
    with pytest.raises(SizeCap):
        gh(X, X, cap=1000)


def test_fragment_is_valid_and_matches_altered():
    rng = random.Random(9)
    for _ in range(5):
        X = random_metric_space(rng.randint(1, 3), rng, integer=True)
        Y = random_metric_space(rng.randint(1, 3), rng, integer=True)
        C, W = gh_fragment_2cat(X, Y)
        assert two_cat_interleaving(C, W, "X", "Y").value == altered_gh(X, Y)
        assert audit_lawvere_2_weight(W, C, strict=False).ok


def test_fragment_partiality_is_only_undefined_hcomp():
    C, _ = gh_fragment_2cat(pair(1.0), pair(2.0))
    assert validate_2category(C).axioms() <= {"UNDEFINED_HCOMP"}
