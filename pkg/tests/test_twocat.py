import itertools
import math
import random

import pytest

from interleavings.errors import MalformedLPC, NotAFunctor, ParseError, ShapeMismatch, SizeCap
from interleavings.posets import chain, grid_poset
from interleavings.twocat import (Finite2Category, FiniteLPC, Functor2, action_groupoid_category,
                                  action_groupoid_interleaving, all_certificates, build_action_groupoid_2cat,
                                  check_lipschitz_2functor, collapse_functor, compose_certificates,
                                  cyclic_action, delooping, delooping_of_translations, disjoint_union,
                                  from_1category, group_lpc, identity_functor, indiscrete, lawvere_of,
                                  lpc_interleaving, lpc_to_2cat, proset_category, quotient_action_functor,
                                  random_lawvere_2_weight, random_lpc, stability_test, thin_lpc,
                                  two_cat_interleaving, validate_2category, verify_certificate, whisker_compose,
                                  word_metric)
from interleavings.weights import Lawvere2Weight, audit_lawvere_2_weight, audit_pseudometric


def _walking_arrow():
    objs = ["A", "B"]
    mor1 = {"1A": ("A", "A"), "1B": ("B", "B"), "f": ("A", "B")}
    id1 = {"A": "1A", "B": "1B"}
    comp = {("1A", "1A"): "1A", ("1B", "1B"): "1B", ("f", "1A"): "f", ("1B", "f"): "f"}
    return objs, mor1, id1, comp


def test_walking_arrow_validates():
    C = from_1category(*_walking_arrow())
    assert validate_2category(C).ok


def test_broken_composition_is_reported():
    objs, mor1, id1, comp = _walking_arrow()
    comp = dict(comp)
    comp[("1B", "f")] = "1B"  # wrong type
    C = from_1category(objs, mor1, id1, comp)
    assert "COMPOSE1_TYPE" in validate_2category(C).axioms()
    del comp[("1B", "f")]
    C = from_1category(objs, mor1, id1, comp)
    assert "UNDEFINED_COMPOSE1" in validate_2category(C).axioms()


def test_non_associative_table_is_reported():
    # Z/3 delooping with a corrupted product
    tbl = {(a, b): (a + b) % 3 for a in range(3) for b in range(3)}
    tbl[(1, 1)] = 0
    C = from_1category(["*"], {g: ("*", "*") for g in range(3)}, {"*": 0}, tbl)
    assert "ASSOC1" in validate_2category(C).axioms()


def test_text_round_trip_preserves_distances():
    G = cyclic_action(4)
    C, W = build_action_groupoid_2cat(G)
    C2, W2 = Finite2Category.from_text(C.to_text(W))
    name = {A: f"o{i}" for i, A in enumerate(C.objects)}
    assert validate_2category(C2).ok
    for x, y in itertools.product(C.objects, C.objects):
        assert two_cat_interleaving(C2, W2, name[x], name[y]).value == two_cat_interleaving(C, W, x, y).value


def test_from_text_rejects_garbage():
    with pytest.raises(ParseError):
        Finite2Category.from_text("OBJECTS\nA\n")


def test_word_metric():
    d = word_metric(range(6), lambda a, b: (a + b) % 6, {1: 1.0, 5: 1.0})
    assert [d[g] for g in range(6)] == [0, 1, 2, 3, 2, 1]
    d = word_metric(range(6), lambda a, b: (a + b) % 6, {2: 1.0, 4: 1.0})
    assert math.isinf(d[1])


@pytest.mark.parametrize("n", [2, 5, 8])
def test_action_groupoid_matches_2cat(n):
    G = cyclic_action(n)
    C, W = build_action_groupoid_2cat(G)
    assert validate_2category(C).ok
    for x, y in itertools.product(G.points, G.points):
        assert two_cat_interleaving(C, W, x, y).value == action_groupoid_interleaving(G, x, y)


def test_action_on_quotient_set():
    G = cyclic_action(6, 3)
    C, W = build_action_groupoid_2cat(G)
    for x, y in itertools.product(G.points, G.points):
        assert two_cat_interleaving(C, W, x, y).value == action_groupoid_interleaving(G, x, y)


def test_groupoid_variant_collapses_orbits():
    G = cyclic_action(4)
    C, W = build_action_groupoid_2cat(G, "groupoid")
    assert validate_2category(C).axioms() <= {"UNDEFINED_HCOMP"}
    for x, y in itertools.product(G.points, G.points):
        assert two_cat_interleaving(C, W, x, y).value == 0.0


def test_size_cap():
    with pytest.raises(SizeCap):
        build_action_groupoid_2cat(cyclic_action(12), size_cap=50)


def test_lpc_examples():
    d = {(a, b): abs(a - b) for a in range(3) for b in range(3)}
    D = thin_lpc(d, range(3), 3)
    assert lpc_interleaving(D, 0, 2) == 2.0
    C, W = lpc_to_2cat(D)
    assert two_cat_interleaving(C, W, 0, 2).value == 2.0


def test_group_lpc_saturates_at_top_grade():
    G = cyclic_action(12)
    D = group_lpc(G, [0, 6], 3)
    # true distance is 6, the grade grid caps it at 3
    assert lpc_interleaving(D, 0, 6) == 3.0


def test_malformed_lpc():
    hom = {("a", "a", 0): [], ("a", "a", 1): ["id"]}
    with pytest.raises(MalformedLPC):
        FiniteLPC(["a"], 1, hom, lambda *args: "id", {"a": "id"})


def test_random_lpcs_are_valid_and_isometric():
    rng = random.Random(1)
    for _ in range(5):
        D = random_lpc(rng)
        assert not D.problems()
        C, W = lpc_to_2cat(D)
        assert validate_2category(C).ok
        for A, B in itertools.product(D.objects, D.objects):
            assert lpc_interleaving(D, A, B) == two_cat_interleaving(C, W, A, B).value


def test_random_weights_are_lawvere():
    rng = random.Random(3)
    o, m, i, c, _ = action_groupoid_category(cyclic_action(4, 2))
    for C in (indiscrete(o, m, i, c), delooping_of_translations(chain(3)),
              indiscrete(*proset_category(grid_poset([2, 2])))):
        assert validate_2category(C).ok
        W = random_lawvere_2_weight(C, rng)
        assert audit_lawvere_2_weight(W, C).ok
        assert audit_pseudometric(lambda A, B: two_cat_interleaving(C, W, A, B).value, C.objects).ok


def test_interleaving_dominates_lawvere_distance():
    rng = random.Random(8)
    C = indiscrete(*proset_category(chain(3)))
    W = random_lawvere_2_weight(C, rng)
    lw = lawvere_of(C, W)
    for A, B in itertools.product(C.objects, C.objects):
        assert lw(A, B) <= two_cat_interleaving(C, W, A, B).value


def test_disjoint_union_separates_components():
    G = cyclic_action(3)
    C1, W1 = build_action_groupoid_2cat(G)
    C = disjoint_union(C1, C1)
    from interleavings.twocat import union_weight
    W = union_weight(W1, W1)
    assert validate_2category(C).ok
    a, b = C.objects[0], C.objects[-1]
    assert math.isinf(two_cat_interleaving(C, W, a, b).value)


def test_certificates_compose_and_verify():
    rng = random.Random(6)
    C = indiscrete(*proset_category(chain(3)))
    W = random_lawvere_2_weight(C, rng)
    for A, B, D in itertools.product(C.objects, repeat=3):
        for c1 in all_certificates(C, W, A, B):
            for c2 in all_certificates(C, W, B, D):
                c = compose_certificates(C, W, c1, c2)
                assert verify_certificate(C, W, c, c1.weight + c2.weight)


def test_whisker_typing():
    C = indiscrete(*proset_category(chain(2)))
    f = C.hom(0, 1)[0]
    with pytest.raises(ShapeMismatch):
        whisker_compose(C, f, C.id2(f), f, C.id2(f))


def test_lipschitz_and_non_lipschitz_functors():
    F = quotient_action_functor(4, 2)
    assert check_lipschitz_2functor(F).ok and stability_test(F).ok
    heavy = quotient_action_functor(4, 2, gen_m={1: 3.0})
    assert "LIPSCHITZ_1" in check_lipschitz_2functor(heavy).axioms()
    C, W = build_action_groupoid_2cat(cyclic_action(3))
    assert check_lipschitz_2functor(collapse_functor(C, W)).ok
    doubled = identity_functor(C, W, W.scaled(2.0))
    assert not check_lipschitz_2functor(doubled).ok


def test_not_a_functor():
    C, W = build_action_groupoid_2cat(cyclic_action(3))
    bad = Functor2(C, W, C, W, lambda x: x, lambda f: C.id1(f[0]), lambda a: a)
    with pytest.raises(NotAFunctor):
        bad.check_functoriality()


def test_delooping_of_group():
    G = cyclic_action(5)
    C = delooping(G.elements, G.mul, G.identity)
    assert validate_2category(C).ok
    assert two_cat_interleaving(C, Lawvere2Weight(G.weight), "*", "*").value == 0.0
