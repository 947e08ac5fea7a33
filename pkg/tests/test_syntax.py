import random

import pytest
from hypothesis import given, settings, strategies as st

from iotacalc.errors import ArityMismatch, CaptureError
from iotacalc.generators import FIRST_ORDER, SECOND_ORDER, random_formula
from iotacalc.parser import parse_formula as F
from iotacalc.syntax import (
    And,
    Forall,
    Iff,
    Kind,
    RelApp,
    Sequent,
    alpha_eq,
    alpha_key,
    check_wff,
    classify,
    free_symbols,
    replace_free,
    subst_ind,
    subst_ind_multi,
    subst_rel,
    sym,
)


def names(symbols):
    return {s.name for s in symbols}


def test_classify_namespaces():
    assert classify("x") is Kind.IND_VAR
    assert classify("a3") is Kind.IND_PAR
    assert classify("k") is Kind.IND_CONST
    assert classify("Y") is Kind.REL_VAR
    assert classify("B2") is Kind.REL_PAR
    assert classify("K1") is Kind.REL_CONST
    assert classify("Q") is Kind.PRED
    assert classify("foo") is None


def test_symbol_equality_includes_arity():
    assert sym("B", 1) == sym("B", 1)
    assert sym("B", 1) != sym("B", 2)
    assert sym("B").arity == 1
    assert sym("a", 3).arity == 0


def test_free_symbols_examples():
    assert names(free_symbols(F("A x. P(x, a)"))) == {"P", "a"}
    assert names(free_symbols(F("(\\x P(x)) (iota y. Q(y))"))) == {"P", "Q"}
    assert names(free_symbols(F("X(a) & E2 X. X(b)"))) == {"X", "a", "b"}


def test_subst_ind_examples():
    x, a, y = sym("x"), sym("a"), sym("y")
    assert subst_ind(F("P(x) & Q(y)"), x, a) == F("P(a) & Q(y)")
    assert subst_ind(F("A x. P(x)"), x, a) == F("A x. P(x)")
    with pytest.raises(CaptureError):
        subst_ind(F("E y. R(x, y)"), x, y)


def test_simultaneous_substitution():
    x, y, a, b = sym("x"), sym("y"), sym("a"), sym("b")
    assert subst_ind_multi(F("R(x, y)"), [x, y], [y, x]) == F("R(y, x)")
    x1, x2 = sym("x1"), sym("x2")
    got = subst_ind_multi(RelApp(sym("X", 2), (x1, x2)), [x1, x2], [a, b])
    assert got == RelApp(sym("X", 2), (a, b))
    with pytest.raises(ArityMismatch):
        subst_ind_multi(F("P(x)"), [x, y], [a])


def test_subst_rel_examples():
    X, Y, B, K = sym("X", 2), sym("Y", 1), sym("B", 2), sym("K", 1)
    assert subst_rel(RelApp(X, (sym("a"), sym("b"))), X, B) == RelApp(B, (sym("a"), sym("b")))
    bound = F("E2 X. X(a)")
    assert subst_rel(bound, sym("X", 1), sym("B", 1)) == bound
    # relational constants stay symbols, so identity stays an identity
    got = subst_rel(F("X = Y"), sym("X", 1), K)
    assert str(got) == "K = Y"
    with pytest.raises(ArityMismatch):
        subst_rel(F("X(a)"), sym("X", 1), sym("B", 2))


def test_identity_with_predicate_expands_to_biconditional():
    got = replace_free(F("X = Y"), {sym("X", 1): sym("P", 1)})
    assert isinstance(got, Forall) and isinstance(got.body, Iff)
    assert alpha_eq(got, F("A x. (P(x) <-> Y(x))"))


def test_alpha_eq_examples():
    assert alpha_eq(F("A x. P(x)"), F("A y. P(y)"))
    assert alpha_eq(F("(\\x P(x)) (iota y. Q(y))"), F("(\\z P(z)) (iota w. Q(w))"))
    assert not alpha_eq(F("A x. P(x)"), F("A x. Q(x)"))
    assert not alpha_eq(F("A x. A y. R(x, y)"), F("A x. A y. R(y, x)"))


def test_check_wff_rejects_arity_clash():
    f = RelApp(sym("B", 1), (sym("a"),))
    g = RelApp(sym("B", 2), (sym("a"), sym("b")))
    with pytest.raises(ArityMismatch):
        check_wff(And(f, g))


def test_sequent_is_a_multiset():
    p = F("P(a)")
    assert Sequent((p, p), ()).same(Sequent((p, p), ()))
    assert not Sequent((p, p), ()).same(Sequent((p,), ()))
    assert Sequent((p, F("Q(a)")), ()).same(Sequent((F("Q(a)"), p), ()))


@given(st.integers(0, 2**32), st.booleans())
@settings(max_examples=300)
def test_alpha_key_stable_under_renaming_bound_variables(seed, second):
    f = random_formula(random.Random(seed), SECOND_ORDER if second else FIRST_ORDER)
    g = F(str(f).replace("x", "u").replace("X", "Z"))
    assert alpha_key(f) == alpha_key(g)


@given(st.integers(0, 2**32))
@settings(max_examples=200)
def test_substitution_of_absent_parameter_is_identity(seed):
    f = random_formula(random.Random(seed), FIRST_ORDER)
    c = sym("c")
    assert replace_free(f, {c: sym("d")}) == f


@given(st.integers(0, 2**32))
@settings(max_examples=200)
def test_parameter_swap_is_an_involution(seed):
    f = random_formula(random.Random(seed), FIRST_ORDER)
    a, b = sym("a"), sym("b")
    swapped = replace_free(f, {a: b, b: a})
    assert replace_free(swapped, {a: b, b: a}) == f
    assert free_symbols(swapped) == {({a: b, b: a}).get(s, s) for s in free_symbols(f)}
