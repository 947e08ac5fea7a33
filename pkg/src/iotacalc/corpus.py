"""Embedded fixtures: the derived-rule trees for relational identity and a
sequent corpus split into valid and invalid goals.

Every invalid goal has a general countermodel with at most two elements
(three of them hold in all full models); every valid goal is provable by
the default search within depth 12.
"""

from __future__ import annotations

from .calculus import Derivation, Instantiation, expand_derived
from .parser import parse_sequent
from .syntax import RelApp, Sequent, sym

# Context used for the concrete instances of both derived rules.
CONTEXT_ANT = "Q(a)"
CONTEXT_SUC = "Q(b)"


def reflexivity_tree() -> tuple[Derivation, list[Sequent]]:
    """Cut of ``=> X = X`` against the open leaf ``X = X, Q(a) => Q(b)``."""
    X = sym("B", 1)
    ctx = parse_sequent(f"{CONTEXT_ANT} => {CONTEXT_SUC}")
    d = expand_derived("Eq2Plus", ctx, Instantiation(witnesses=(X,)))
    return d, [_open_leaf(d)]


def rewrite_tree() -> tuple[Derivation, list[Sequent]]:
    """Cut on ``C(a)`` rewriting ``B(a)`` under ``B = C`` in context Q(a) => Q(b)."""
    B, C, X = sym("B", 1), sym("C", 1), sym("X", 1)
    ctx = parse_sequent(f"B = C, B(a), {CONTEXT_ANT} => {CONTEXT_SUC}")
    inst = Instantiation(witnesses=(B, C), atomic_schema=(RelApp(X, (sym("a"),)), X))
    d = expand_derived("Eq2Minus", ctx, inst)
    return d, [_open_leaf(d)]


def _open_leaf(d: Derivation) -> Sequent:
    from .calculus import RuleId

    return next(n.conclusion for _, n in d.nodes() if n.rule is RuleId.Hyp)


def derived_rule_trees() -> dict[str, tuple[Derivation, list[Sequent]]]:
    return {"reflexivity": reflexivity_tree(), "rewrite": rewrite_tree()}


# (sequent, system)
VALID = [
    ("=> P(a) | !P(a)", "rl"),
    ("P(a) => P(a)", "rl"),
    ("P(a) & Q(a) => Q(a) & P(a)", "rl"),
    ("P(a) | Q(a) => Q(a) | P(a)", "rl"),
    ("=> P(a) -> P(a)", "rl"),
    ("!!P(a) => P(a)", "rl"),
    ("P(a) -> Q(a), Q(a) -> R(a, a) => P(a) -> R(a, a)", "rl"),
    ("=> (P(a) <-> Q(a)) <-> (Q(a) <-> P(a))", "rl"),
    ("!(P(a) & Q(a)) => !P(a) | !Q(a)", "rl"),
    ("=> ((P(a) -> Q(a)) -> P(a)) -> P(a)", "rl"),
    ("A x. P(x) => P(a)", "rl"),
    ("P(a) => E x. P(x)", "rl"),
    ("A x. P(x) => E x. P(x)", "rl"),
    ("A x. (P(x) & Q(x)) => A x. P(x)", "rl"),
    ("E x. (P(x) & Q(x)) => E x. P(x)", "rl"),
    ("!E x. P(x) => A x. !P(x)", "rl"),
    ("E x. A y. R(x, y) => A y. E x. R(x, y)", "rl"),
    ("=> E x. (P(x) -> A y. P(y))", "rl"),
    ("=> a = a", "rl"),
    ("a = b => b = a", "rl"),
    ("a = b, b = c => a = c", "rl"),
    ("b = c, P(b) => P(c)", "rl"),
    ("=> A x. x = x", "rl"),
    ("(\\x P(x)) a => P(a)", "rl"),
    ("P(a) => (\\x P(x)) a", "rl"),
    ("(\\x P(x)) (iota y. Q(y)) => E x. Q(x)", "rl"),
    ("(\\x P(x)) (iota y. Q(y)) => E x. (Q(x) & P(x))", "rl"),
    ("Q(a), A x. (Q(x) -> x = a), P(a) => (\\x P(x)) (iota y. Q(y))", "rl"),
    ("(\\x (P(x) & R(x, x))) (iota y. Q(y)) => (\\x P(x)) (iota y. Q(y))", "rl"),
    ("(\\x P(x)) (iota y. Q(y)), Q(a), Q(b) => a = b", "rl"),
    ("=> X = X", "rl2"),
    ("B = C => C = B", "rl2"),
    ("B = C, B(a) => C(a)", "rl2"),
    ("A2 X. X(a) => E2 X. X(a)", "rl2"),
    ("=> A2 X. (X(a) -> X(a))", "rl2"),
    ("(\\X X(a)) (iota Y. A x. Y(x)) => E2 X. X(a)", "rl2"),
    ("A x. (B(x) <-> C(x)) => B = C", "rl2"),
]

INVALID = [
    ("=> P(a)", "rl"),
    ("P(a) => Q(a)", "rl"),
    ("P(a) | Q(a) => P(a)", "rl"),
    ("P(a) -> Q(a) => Q(a) -> P(a)", "rl"),
    ("=> P(a) & !P(b)", "rl"),
    ("E x. P(x) => P(a)", "rl"),
    ("E x. P(x) => A x. P(x)", "rl"),
    ("P(a) => A x. P(x)", "rl"),
    ("A y. E x. R(x, y) => E x. A y. R(x, y)", "rl"),
    ("=> a = b", "rl"),
    ("a = b => P(a)", "rl"),
    ("P(a), P(b) => a = b", "rl"),
    ("=> E x. !(x = a)", "rl"),
    ("E x. E y. !(x = y) => E x. P(x)", "rl"),
    ("E x. Q(x) => (\\x P(x)) (iota y. Q(y))", "rl"),
    ("=> (\\x P(x)) (iota y. Q(y))", "rl"),
    ("=> (\\x P(x)) (iota y. Q(y)) | (\\x !P(x)) (iota y. Q(y))", "rl"),
    ("!(\\x P(x)) (iota y. Q(y)) => (\\x !P(x)) (iota y. Q(y))", "rl"),
    ("(\\x P(x)) (iota y. Q(y)) => P(a)", "rl"),
    ("Q(a), P(a) => (\\x P(x)) (iota y. Q(y))", "rl"),
    ("(\\x P(x)) a => Q(a)", "rl"),
    ("A x. (P(x) | Q(x)) => A x. P(x) | A x. Q(x)", "rl"),
    ("E x. P(x), E x. Q(x) => E x. (P(x) & Q(x))", "rl"),
    ("=> B = C", "rl2"),
    ("B(a) => C(a)", "rl2"),
    ("B(a), C(a) => B = C", "rl2"),
    ("=> A2 X. X(a)", "rl2"),
    ("E2 X. X(a) => B(a)", "rl2"),
    ("=> E2 X. A x. (X(x) <-> P(x))", "rl2"),
    ("=> (\\X X(a)) (iota Y. Y(a))", "rl2"),
    ("B = C => P(a)", "rl2"),
    ("=> E2 X. E x. X(x)", "rl2"),
    # valid over full models only: a family need not contain P's extension
    ("A2 X. X(a) => P(a)", "rl2"),
    ("P(a) => E2 X. X(a)", "rl2"),
]


def parsed(entries) -> list[tuple[Sequent, str]]:
    return [(parse_sequent(s), system) for s, system in entries]


def selftest(depth: int = 6) -> list[tuple[str, bool, str]]:
    """Hermetic fixture run: the derived-rule trees, the prover on the valid
    corpus with a soundness sweep over |D| <= 2, and the invalid corpus.
    """
    from .calculus import check
    from .errors import Exhausted, ResourceLimit
    from .interchange import read_json, write_json
    from .search import SearchConfig, prove
    from .semantics import SearchBounds, find_countermodel

    out = []
    for name, (d, hyps) in derived_rule_trees().items():
        d2, hyps2 = read_json(write_json(d, hyps))
        with_cut = check(d2, "rl2", assumptions=hyps2)
        no_cut = check(d2, "rl2", allow_cut=False, assumptions=hyps2)
        ok = with_cut.accepted and no_cut.reasons() == ["CutForbidden"] and [v.path for v in no_cut.violations] == [()]
        out.append((f"tree {name}", ok, "" if ok else f"{with_cut.verdict}/{no_cut.reasons()}"))
    for bounds_name, bounds in (("full", SearchBounds(max_domain=2, families="full")), ("general", SearchBounds(max_domain=2, families="auto"))):
        for src, system in VALID:
            s = parse_sequent(src)
            try:
                d = prove(s, system, SearchConfig(max_depth=12))
            except (Exhausted, ResourceLimit) as e:
                out.append((f"prove {src}", False, type(e).__name__))
                continue
            found = find_countermodel(d.conclusion, bounds)
            ok = check(d, system, allow_cut=False).accepted and found is None
            out.append((f"sound[{bounds_name}] {src}", ok, "" if ok else "countermodel to a proved sequent"))
    for src, system in INVALID:
        s = parse_sequent(src)
        refuted = find_countermodel(s, SearchBounds(max_domain=2)) is not None
        try:
            prove(s, system, SearchConfig(max_depth=depth))
            proved = True
        except (Exhausted, ResourceLimit):
            proved = False
        out.append((f"refute {src}", refuted and not proved, "" if refuted and not proved else f"refuted={refuted} proved={proved}"))
    return out
