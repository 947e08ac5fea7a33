import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_general_model, ref_eval, symbols_of
from iotacalc.errors import ResourceLimit, UninterpretedSymbol
from iotacalc.generators import SEMANTIC, random_formula
from iotacalc.parser import parse_formula as F, parse_sequent as S
from iotacalc.semantics import (
    Assignment,
    GeneralModel,
    Model,
    SearchBounds,
    Signature,
    count_models,
    enumerate_models,
    eval as evaluate,
    eval_full,
    family_choices,
    find_countermodel,
    full_model,
    holds_sequent,
    is_valid,
    powerset,
)
from iotacalc.syntax import sym

P, Q = sym("P", 1), sym("Q", 1)
a, k = sym("a"), sym("k")
X, Y, K = sym("X", 1), sym("Y", 1), sym("K", 1)


def test_description_without_satisfier_is_false():
    gm = full_model(Model(2, {P: frozenset({(0,)}), Q: frozenset()}))
    assert not evaluate(gm, Assignment(), F("(\\x P(x)) (iota y. Q(y))"))


def test_description_with_two_satisfiers_is_false():
    everything = frozenset({(0,), (1,)})
    gm = full_model(Model(2, {P: everything, Q: everything}))
    assert not evaluate(gm, Assignment(), F("(\\x P(x)) (iota y. Q(y))"))


def test_unique_description_picks_the_satisfier():
    gm = full_model(Model(2, {P: frozenset({(1,)}), Q: frozenset({(1,)})}))
    assert evaluate(gm, Assignment(), F("(\\x P(x)) (iota y. Q(y))"))
    assert not evaluate(gm, Assignment(), F("(\\x !P(x)) (iota y. Q(y))"))


def test_second_order_description_ranges_over_family():
    fam = (frozenset(), frozenset({(0,)}))
    gm = GeneralModel(Model(1, {}, {k: 0}), {1: fam})
    assert evaluate(gm, Assignment(), F("(\\X X(k)) (iota Y. A x. Y(x))"))


def test_relational_identity_is_extensional():
    gm = full_model(Model(2))
    v = Assignment(rel={X: frozenset({(0,)}), Y: frozenset({(0,)})})
    assert evaluate(gm, v, F("X = Y"))


def test_full_semantics_examples():
    v = Assignment({a: 0})
    assert eval_full(Model(1), v, F("E2 X. X(a)"))
    assert not eval_full(Model(2), Assignment(), F("A2 X. E x. X(x)"))


def test_full_semantics_respects_cap():
    with pytest.raises(ResourceLimit):
        eval_full(Model(3), Assignment(), F("A2 X. E x. E y. E z. X(x, y, z)"))


def test_uninterpreted_symbol():
    with pytest.raises(UninterpretedSymbol):
        evaluate(full_model(Model(1)), Assignment(), F("P(a)"))


def test_families_must_be_nonempty_and_contain_constants():
    with pytest.raises(ValueError):
        GeneralModel(Model(1), {1: ()})
    with pytest.raises(ValueError):
        GeneralModel(Model(1), {1: (frozenset(),)}, {K: frozenset({(0,)})})


def test_holds_sequent_examples():
    m = full_model(Model(2, {P: frozenset()}))
    v = Assignment({a: 1})
    assert holds_sequent(m, v, S("P(a) => P(a)"))
    assert not holds_sequent(m, v, S("=> P(a)"))
    for gm, v in enumerate_models(Signature.of(S("=> X = X")), SearchBounds(families="all")):
        assert holds_sequent(gm, v, S("=> X = X"))


def test_countermodel_examples():
    gm, v = find_countermodel(S("=> P(a)"))
    assert gm.domain_size == 1 and gm.base.preds[P] == frozenset() and v.ind[a] == 0
    gm, v = find_countermodel(S("=> E2 X. A x. (X(x) <-> P(x))"))
    assert gm.domain_size == 1 and gm.base.preds[P] == frozenset({(0,)})
    assert gm.families == {1: (frozenset(),)}
    assert find_countermodel(S("=> b = b")) is None
    assert is_valid(S("=> b = b"), SearchBounds(max_domain=2, families="full"))


def test_comprehension_holds_in_full_models():
    assert is_valid(S("=> E2 X. A x. (X(x) <-> P(x))"), SearchBounds(max_domain=2, families="full"))


def test_family_choices():
    assert family_choices(2, 1, "full") == [None]
    # all nonempty subfamilies of the four unary relations on two elements
    assert len(family_choices(2, 1, "all")) == 15
    assert len(family_choices(1, 1, "auto")) == 3
    assert family_choices(2, 2, "auto") == [None]
    sampled = family_choices(3, 1, "sampled", seed=1, count=5)
    assert sampled == family_choices(3, 1, "sampled", seed=1, count=5)
    assert sampled[0] is None and all(fam for fam in sampled[1:])


def test_count_matches_enumeration():
    s = S("B(a) => P(a)")
    sig = Signature.of(s)
    bounds = SearchBounds(max_domain=2, families="auto")
    total = sum(count_models(sig, n, bounds) for n in (1, 2))
    assert total == sum(1 for _ in enumerate_models(sig, bounds))


def test_enumeration_is_deterministic():
    s = S("A x. P(x) => Q(a)")
    assert find_countermodel(s) == find_countermodel(s)


def test_powerset_order_and_size():
    rels = powerset(2, 1)
    assert len(rels) == 4 and rels[0] == frozenset() and rels[-1] == frozenset({(0,), (1,)})


# property checks against the reference evaluator (larger runs live in the acceptance suite)


@given(st.integers(0, 2**32), st.integers(1, 3))
@settings(max_examples=300)
def test_agrees_with_reference_evaluator(seed, size):
    rng = random.Random(seed)
    f = random_formula(rng, SEMANTIC)
    gm, v = random_general_model(rng, symbols_of(f), size)
    assert evaluate(gm, v, f) == ref_eval(gm, v, f)


@given(st.integers(0, 2**32), st.integers(1, 2))
@settings(max_examples=200)
def test_full_semantics_agrees_with_reference(seed, size):
    rng = random.Random(seed)
    f = random_formula(rng, SEMANTIC)
    gm, v = random_general_model(rng, symbols_of(f), size, full=True)
    assert eval_full(gm.base, v, f, dict(gm.relconsts)) == ref_eval(gm, v, f)
