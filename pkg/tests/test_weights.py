import math

import pytest
from hypothesis import given, strategies as st

from interleavings.weights import (INF, AuditReport, Lawvere2Weight, additive_weight, audit_monoidal_weight,
                                   audit_pseudometric, check_weight_value, log_weight, pnorm_weight,
                                   table_weight, wadd)


def test_wadd_saturates():
    assert wadd(1.0, 2.0) == 3.0
    assert wadd(INF, 0.0) == INF
    assert wadd(2.0, INF) == INF


@pytest.mark.parametrize("bad", [-1.0, float("nan")])
def test_weight_values_rejected(bad):
    with pytest.raises(ValueError):
        check_weight_value(bad)


def test_shipped_weights_pass_audit():
    ts = [0.0, 0.5, 1.0, 2.5]
    assert audit_monoidal_weight(additive_weight, ts, lambda a, b: a + b, 0.0).ok
    cs = [1.0, 0.5, 2.0, 3.0]
    assert audit_monoidal_weight(log_weight, cs, lambda a, b: a * b, 1.0).ok
    vs = [(0, 0), (1, 0), (0, 2), (1, 1)]
    add = lambda a, b: (a[0] + b[0], a[1] + b[1])  # noqa: E731
    for p in (1, 2, math.inf):
        assert audit_monoidal_weight(pnorm_weight(p), vs, add, (0, 0)).ok


def test_superadditive_table_is_caught():
    # Z/3 with W(1)=W(2)=1 is fine; W(2)=3 breaks 1+1
    mul = lambda a, b: (a + b) % 3  # noqa: E731
    assert audit_monoidal_weight(table_weight({0: 0, 1: 1, 2: 1}), range(3), mul).ok
    rep = audit_monoidal_weight(table_weight({0: 0, 1: 1, 2: 3}), range(3), mul)
    assert rep.axioms() == {"SUBADDITIVE"}
    rep = audit_monoidal_weight(table_weight({0: 1, 1: 1, 2: 1}), range(3), mul)
    assert "IDENTITY_ZERO" in rep.axioms()


def test_pseudometric_audit_detects_each_axiom():
    assert audit_pseudometric(lambda x, y: abs(x - y), [0, 1, 3]).ok
    assert audit_pseudometric(lambda x, y: (x - y) ** 2, [0, 1, 2]).axioms() == {"TRIANGLE"}
    assert "SYMMETRY" in audit_pseudometric(lambda x, y: max(x - y, 0), [0, 1]).axioms()
    assert "IDENTITY" in audit_pseudometric(lambda x, y: 1.0, [0, 1]).axioms()


def test_infinite_distances_are_consistent():
    d = lambda x, y: 0.0 if x == y else (INF if (x < 0) != (y < 0) else abs(x - y))  # noqa: E731
    assert audit_pseudometric(d, [-2, -1, 1, 2]).ok


def test_sampling_path_for_many_points():
    pts = list(range(40))
    rep = audit_pseudometric(lambda x, y: abs(x - y), pts, samples=500)
    assert rep.ok and rep.checked > 0


def test_report_text_round_trip():
    rep = audit_pseudometric(lambda x, y: (x - y) ** 2, [0, 1, 2])
    back = AuditReport.from_text(rep.to_text())
    assert back.to_text() == rep.to_text()


def test_lawvere_weight_scaling():
    W = Lawvere2Weight({"f": 2.0}, {"a": 1.0}).scaled(0.5)
    assert W.w1("f") == 1.0 and W.w2("a") == 0.5
    assert Lawvere2Weight.zero().w1("anything") == 0.0


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=6))
def test_absolute_difference_is_a_metric(xs):
    assert audit_pseudometric(lambda a, b: abs(a - b), xs, tol=1e-9).ok
