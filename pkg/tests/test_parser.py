import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from iotacalc.calculus import RuleId, size
from iotacalc.errors import LogicError, ParseError, UnknownRuleName
from iotacalc.generators import FIRST_ORDER, SECOND_ORDER, SEMANTIC, random_formula, random_sequent
from iotacalc.interchange import latex_sequents, read_derivation, read_text, render_latex, write_json, write_text
from iotacalc.parser import (
    latex_formula,
    latex_to_ascii,
    parse_formula,
    parse_model,
    parse_sequent,
    print_formula,
    print_model,
    print_sequent,
)
from iotacalc.syntax import (
    And,
    Exists2,
    Forall,
    Forall2,
    Iota1,
    Iota2,
    LamAtom1,
    LamAtom2,
    PredAtom,
    RelApp,
    RelEq,
    Sequent,
    alpha_eq,
    sym,
)

FIXTURES = Path(__file__).parent / "fixtures"

# token soup for the fuzz test: every terminal of the grammar plus junk
TOKENS = ["A", "E", "A2", "E2", "x", "y", "X", "Y", "a", "b", "B", "k", "K", "P", "Q", "R", "iota", "\\",
          "(", ")", ",", ".", "=", "!", "&", "|", "->", "<->", "=>", " ", "∀", "λ", "ι", "¬", "7", "#"]


def fuzz_inputs(rng: random.Random, n: int):
    for i in range(n):
        if i % 3 == 0:
            # mutate a printed formula
            text = print_formula(random_formula(rng, SECOND_ORDER))
            pos = rng.randrange(len(text) + 1)
            yield text[:pos] + rng.choice(TOKENS) + text[pos + rng.randint(0, 2):]
        else:
            yield " ".join(rng.choice(TOKENS) for _ in range(rng.randint(0, 12)))


def test_parse_examples():
    x, y, X, Y = sym("x"), sym("y"), sym("X", 1), sym("Y", 1)
    P, Q = sym("P", 1), sym("Q", 1)
    assert parse_formula("(\\x P(x)) (iota y. Q(y))") == LamAtom1(x, PredAtom(P, (x,)), Iota1(y, PredAtom(Q, (y,))))
    assert parse_formula("A2 X. E2 Y. X = Y") == Forall2(X, Exists2(Y, RelEq(X, Y)))
    k = sym("k")
    assert parse_formula("(\\X X(k)) (iota Y. A x. Y(x))") == LamAtom2(
        X, RelApp(X, (k,)), Iota2(Y, Forall(x, RelApp(Y, (x,))))
    )


def test_parse_sequent_examples():
    pa = parse_formula("P(a)")
    assert parse_sequent("P(a) => P(a)") == Sequent((pa,), (pa,))
    assert parse_sequent("=> b = b") == Sequent((), (parse_formula("b = b"),))
    s = parse_sequent("B = C, B(a) => C(a)")
    assert [str(f) for f in s.ant] == ["B = C", "B(a)"] and [str(f) for f in s.suc] == ["C(a)"]


def test_printer_examples():
    assert print_formula(And(parse_formula("P(a)"), parse_formula("Q(b)"))) == "(P(a) & Q(b))"
    assert print_sequent(Sequent((), ())) == "=>"


def test_unicode_input():
    assert alpha_eq(parse_formula("∀x. ¬P(x)"), parse_formula("A x. !P(x)"))
    assert alpha_eq(parse_formula("(λx P(x)) (ι y. Q(y))"), parse_formula("(\\x P(x)) (iota y. Q(y))"))


def test_arity_is_per_name():
    f = parse_formula("B(a, b) & E2 X. X(a)")
    assert f.left.rel.arity == 2 and f.right.var.arity == 1
    with pytest.raises(LogicError):
        parse_formula("B(a) & B(a, b)")


@pytest.mark.parametrize(
    "src,column",
    [("P(a", 4), ("P(a) &", 7), ("A x P(x)", 5), ("P(a) => => Q(a)", 9), ("(\\x P(x)) iota", 11)],
)
def test_parse_errors_carry_position(src, column):
    with pytest.raises(ParseError) as e:
        parse_sequent(src) if "=>" in src else parse_formula(src)
    assert e.value.span.column == column


def test_latex_round_trip():
    for seed in range(200):
        f = random_formula(random.Random(seed), SEMANTIC)
        assert alpha_eq(parse_formula(latex_to_ascii(latex_formula(f))), f)


@given(st.integers(0, 2**32), st.sampled_from([FIRST_ORDER, SECOND_ORDER, SEMANTIC]))
@settings(max_examples=500)
def test_formula_round_trip(seed, cfg):
    f = random_formula(random.Random(seed), cfg)
    assert alpha_eq(parse_formula(print_formula(f)), f)


@given(st.integers(0, 2**32))
@settings(max_examples=200)
def test_sequent_round_trip(seed):
    s = random_sequent(random.Random(seed), SEMANTIC)
    assert parse_sequent(print_sequent(s)).same(s)


def test_fuzz_never_crashes():
    rng = random.Random(7)
    for text in fuzz_inputs(rng, 5000):
        try:
            parse_sequent(text) if "=>" in text else parse_formula(text)
        except LogicError:
            pass


def test_model_round_trip():
    src = (FIXTURES / "henkin.model").read_text()
    gm, v = parse_model(src)
    gm2, v2 = parse_model(print_model(gm, v))
    assert gm2 == gm and v2 == v


def test_model_errors():
    with pytest.raises(ParseError):
        parse_model("P = {(0)};")
    with pytest.raises(ParseError):
        parse_model("domain = 1; P = {(3)};")


# ---------------------------------------------------------------------------
# proof documents


def test_minimal_document():
    d, hyps = read_derivation('{"nodes": [{"id": "n1", "rule": "AX", "conclusion": "P(a) => P(a)", "premises": []}], "root": "n1"}')
    assert d.rule is RuleId.AX and not d.premises and hyps == []


def test_unknown_rule_name():
    with pytest.raises(UnknownRuleName):
        read_derivation('{"nodes": [{"id": "n1", "rule": "Foo", "conclusion": "P(a) => P(a)", "premises": []}], "root": "n1"}')


def test_rewrite_tree_document_has_six_inferences():
    d, hyps = read_derivation((FIXTURES / "rewrite.proof").read_text())
    assert size(d) == 6
    assert [n.rule for _, n in d.nodes()] == [RuleId.Cut, RuleId.Eq2L, RuleId.WR, RuleId.AX, RuleId.WL, RuleId.AX, RuleId.Hyp]
    assert len(hyps) == 1


def test_json_and_text_documents_agree():
    d, hyps = read_derivation((FIXTURES / "rewrite.proof").read_text())
    d2, hyps2 = read_text((FIXTURES / "rewrite.txt").read_text())
    assert d2 == d and hyps2 == hyps
    d3, _ = read_derivation(write_json(d, hyps))
    d4, _ = read_derivation(write_text(d, hyps))
    assert d3 == d == d4
    assert json.loads(write_json(d, hyps))["format"] == "iotacalc-proof"


def test_document_errors_are_parse_errors():
    with pytest.raises(ParseError):
        read_derivation('{"nodes": [{"id": "n1", "rule": "AX", "conclusion": "P(a => P(a)"}], "root": "n1"}')
    with pytest.raises(ParseError):
        read_derivation("n1: AX n7\n  conclusion: P(a) => P(a)\n")


def test_latex_tree_sequents_reparse():
    for name in ("reflexivity.proof", "rewrite.proof"):
        d, _ = read_derivation((FIXTURES / name).read_text())
        tex = render_latex(d)
        assert "\\begin{prooftree}" in tex and "\\documentclass" in tex
        got = [parse_sequent(s) for s in latex_sequents(tex)]
        want = [n.conclusion for _, n in d.nodes()]
        # open leaves are drawn as an axiom line plus a labelled bar, so compare as sets
        assert set(map(print_sequent, got)) == set(map(print_sequent, want))
