import random

import pytest
from hypothesis import given, settings, strategies as st

from iotacalc.calculus import RuleId, check, height, uses_cut
from iotacalc.errors import BudgetExhausted, Exhausted, ResourceLimit
from iotacalc.generators import FIRST_ORDER, random_formula
from iotacalc.parser import parse_formula as F, parse_sequent as S
from iotacalc.search import (
    DEFAULT_RULE_ORDER,
    ExtendedSequent,
    SaturationConfig,
    SearchConfig,
    check_witness_property,
    prove,
    saturate,
)
from iotacalc.syntax import Sequent, alpha_eq

CFG = SearchConfig(max_depth=8)


def rules(d):
    return {n.rule for _, n in d.nodes()}


def es(ant=(), suc=()):
    return ExtendedSequent(tuple(map(F, ant)), tuple(map(F, suc)))


def test_excluded_middle():
    d = prove(S("=> P(a) | !P(a)"), "rl", CFG)
    assert {RuleId.OrR, RuleId.NegR, RuleId.AX} <= rules(d)
    assert check(d, "rl", allow_cut=False).accepted


def test_leibniz_rewrite_uses_eq_minus():
    d = prove(S("b = c, P(b) => P(c)"), "rl", CFG)
    assert RuleId.EqMinus in rules(d)


def test_relational_rewrite_uses_eq2l():
    d = prove(S("B = C, B(a) => C(a)"), "rl2", CFG)
    assert RuleId.Eq2L in rules(d) and not uses_cut(d)
    assert d.conclusion.same(S("B = C, B(a) => C(a)"))


def test_unprovable_atom_is_exhausted():
    with pytest.raises(Exhausted) as e:
        prove(S("=> P(a)"), "rl", SearchConfig(max_depth=4))
    assert e.value.depth == 4


def test_time_budget():
    with pytest.raises(ResourceLimit):
        prove(S("A y. E x. R(x, y) => E x. A y. R(x, y)"), "rl", SearchConfig(max_depth=30, time_budget_ms=50))


def test_second_order_goal_rejected_in_rl():
    with pytest.raises(ValueError):
        prove(S("=> X = X"), "rl", CFG)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(rule_order=DEFAULT_RULE_ORDER[1:])
    with pytest.raises(ValueError):
        SearchConfig(max_depth=0)


def test_rule_order_changes_nothing_about_validity():
    order = tuple(reversed(DEFAULT_RULE_ORDER))
    d = prove(S("P(a) & Q(a) => Q(a) & P(a)"), "rl", SearchConfig(max_depth=8, rule_order=order))
    assert check(d, "rl", allow_cut=False).accepted


def test_search_is_deterministic():
    goal = S("(\\x P(x)) (iota y. Q(y)) => E x. (Q(x) & P(x))")
    assert prove(goal, "rl", CFG) == prove(goal, "rl", CFG)


@given(st.integers(0, 2**32))
@settings(max_examples=40)
def test_proofs_of_tautology_instances_check(seed):
    f = random_formula(random.Random(seed), FIRST_ORDER)
    goal = Sequent((f,), (f,))
    d = prove(goal, "rl", SearchConfig(max_depth=4))
    assert check(d, "rl", allow_cut=False).accepted and d.conclusion.same(goal)
    assert height(d) >= 1


# ---------------------------------------------------------------------------
# witness property and saturation


def test_existential_with_witness_is_fine():
    assert check_witness_property(es(["E x. P(x)", "P(k)"])) == []


def test_second_order_universal_needs_witness():
    v = check_witness_property(es(suc=["A2 X. Q(a)"]))
    assert [x.clause for x in v] == [3]


def test_identity_in_succedent_needs_separation():
    v = check_witness_property(es(suc=["X = Y"]))
    assert [x.clause for x in v] == [9]


def test_saturate_existential():
    got = saturate(es(["E x. P(x)"]))
    assert got == es(["E x. P(x)", "P(k1)"])


def test_saturate_universal_in_succedent():
    got = saturate(es(suc=["A x. P(x)"]))
    assert got == es(suc=["A x. P(x)", "P(k1)"])


def test_saturated_sequent_is_a_fixpoint():
    s = es(["E x. P(x)", "P(k)"], ["Q(k)"])
    assert saturate(s) == s


def test_budget_exhaustion_reports_partial_result():
    s = es(["E x. P(x)", "E x. Q(x)"])
    with pytest.raises(BudgetExhausted) as e:
        saturate(s, fresh_const_budget=1)
    assert s <= e.value.partial and e.value.remaining_violations


def test_clause_order_is_configurable():
    s = es(["E x. P(x)"], ["X = Y"])
    a = saturate(s, cfg=SaturationConfig(clause_order=tuple(range(1, 10))))
    b = saturate(s, cfg=SaturationConfig(clause_order=(9, 1, 2, 3, 4, 5, 6, 7, 8)))
    assert check_witness_property(a) == [] and check_witness_property(b) == []


SEEDS = [
    (["E x. P(x)", "A x. Q(x)"], ["A x. R(x, x)"]),
    (["(\\x P(x)) (iota y. Q(y))"], ["E x. P(x)"]),
    (["E2 X. X(a)"], ["A2 X. X(b)", "B = C"]),
    (["(\\X X(a)) (iota Y. Y(b))", "a = b"], ["(\\x P(x)) (iota y. Q(y))"]),
    ([], ["(\\X X(a)) (iota Y. A x. Y(x))"]),
]


@given(st.sampled_from(SEEDS))
@settings(max_examples=10)
def test_saturation_is_monotone_and_idempotent(seed):
    s = es(*seed)
    once = saturate(s, 64)
    assert s <= once
    assert check_witness_property(once) == []
    assert saturate(once, 64) == once
