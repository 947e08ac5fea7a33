"""Shared test utilities: random models, and a reference evaluator.

The reference evaluator is written independently of iotacalc.semantics:
descriptions are evaluated by the explicit Russellian expansion (some o
satisfies the condition, every satisfier equals o, and o satisfies the
body) and relational identity by pointwise comparison over all tuples.
"""

from __future__ import annotations

import itertools
import random

from iotacalc.semantics import Assignment, GeneralModel, Model, powerset, tuples
from iotacalc.syntax import (
    And,
    Exists,
    Exists2,
    Forall,
    Forall2,
    Iff,
    Imp,
    IndEq,
    Kind,
    LamAtom1,
    LamAtom2,
    Neg,
    Or,
    PredAtom,
    RelApp,
    RelEq,
    Sym,
    all_symbols,
)


def random_relation(rng: random.Random, size: int, arity: int) -> frozenset:
    return frozenset(t for t in tuples(size, arity) if rng.random() < 0.5)


def random_general_model(rng: random.Random, symbols, size: int, full: bool = False) -> tuple[GeneralModel, Assignment]:
    """A model and assignment interpreting every free symbol in ``symbols``.

    Families are random nonempty subfamilies of the powerset unless ``full``.
    """
    arities = {s.arity for s in symbols if s.kind in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST)}
    families = {}
    if not full:
        for n in sorted(arities):
            rels = powerset(size, n)
            fam = tuple(r for r in rels if rng.random() < 0.5) or (rng.choice(rels),)
            families[n] = fam
    preds = {s: random_relation(rng, size, s.arity) for s in symbols if s.kind is Kind.PRED}
    consts = {s: rng.randrange(size) for s in symbols if s.kind is Kind.IND_CONST}
    base = Model(size, preds, consts)

    def pick(n):
        return rng.choice(families[n]) if n in families else random_relation(rng, size, n)

    relconsts = {s: pick(s.arity) for s in symbols if s.kind is Kind.REL_CONST}
    gm = GeneralModel(base, families, relconsts)
    ind = {s: rng.randrange(size) for s in symbols if s.kind in (Kind.IND_PAR, Kind.IND_VAR)}
    rel = {s: pick(s.arity) for s in symbols if s.kind in (Kind.REL_PAR, Kind.REL_VAR)}
    return gm, Assignment(ind, rel)


def symbols_of(*formulas) -> set[Sym]:
    out: set[Sym] = set()
    for f in formulas:
        out |= all_symbols(f)
    return out


# ---------------------------------------------------------------------------
# reference evaluator


def ref_eval(gm: GeneralModel, v: Assignment, f) -> bool:
    env = {**v.ind, **v.rel}
    return _ref(gm, env, f)


def _val(gm, env, s: Sym):
    if s.kind is Kind.IND_CONST:
        return gm.base.consts[s]
    if s.kind is Kind.PRED:
        return gm.base.preds[s]
    if s.kind is Kind.REL_CONST:
        return gm.relconsts[s]
    return env[s]


def _range(gm, s: Sym):
    if s.kind.individual:
        return list(range(gm.domain_size))
    return list(gm.family(s.arity))


def _ref(gm, env, f) -> bool:
    if isinstance(f, (PredAtom, RelApp)):
        head = f.pred if isinstance(f, PredAtom) else f.rel
        return tuple(_val(gm, env, t) for t in f.args) in _val(gm, env, head)
    if isinstance(f, IndEq):
        return _val(gm, env, f.left) == _val(gm, env, f.right)
    if isinstance(f, RelEq):
        left, right = _val(gm, env, f.left), _val(gm, env, f.right)
        return all((t in left) == (t in right) for t in itertools.product(range(gm.domain_size), repeat=f.left.arity))
    if isinstance(f, Neg):
        return not _ref(gm, env, f.body)
    if isinstance(f, (And, Or, Imp, Iff)):
        a, b = _ref(gm, env, f.left), _ref(gm, env, f.right)
        return {And: a and b, Or: a or b, Imp: (not a) or b, Iff: a == b}[type(f)]
    if isinstance(f, (Forall, Forall2)):
        return all(_ref(gm, {**env, f.var: o}, f.body) for o in _range(gm, f.var))
    if isinstance(f, (Exists, Exists2)):
        return any(_ref(gm, {**env, f.var: o}, f.body) for o in _range(gm, f.var))
    if isinstance(f, LamAtom1) and isinstance(f.arg, Sym):
        return _ref(gm, {**env, f.var: _val(gm, env, f.arg)}, f.body)
    if isinstance(f, (LamAtom1, LamAtom2)):
        y, cond = f.arg.var, f.arg.cond
        for o in _range(gm, y):
            if not _ref(gm, {**env, y: o}, cond):
                continue
            unique = all(o2 == o or not _ref(gm, {**env, y: o2}, cond) for o2 in _range(gm, y))
            if unique and _ref(gm, {**env, f.var: o}, f.body):
                return True
        return False
    raise TypeError(f)
