"""Random formulas and sequents over a small signature.

Used by the property tests (seeded through hypothesis) and by the
experiment scripts.  Every generated formula is well formed: variables are
always bound, relational symbols have one arity per name.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import (
    And,
    Exists,
    Exists2,
    Forall,
    Forall2,
    Iff,
    Imp,
    IndEq,
    Iota1,
    Iota2,
    Kind,
    LamAtom1,
    LamAtom2,
    Neg,
    Or,
    PredAtom,
    RelApp,
    RelEq,
    Sequent,
    Sym,
    replace_free,
)


@dataclass(frozen=True)
class GenConfig:
    depth: int = 3
    preds: tuple = (("P", 1), ("Q", 1), ("R", 2))
    params: tuple = ("a", "b")
    consts: tuple = ()
    relparams: tuple = ()  # (name, arity) pairs
    relconsts: tuple = ()
    second_order: bool = False
    descriptions: bool = True
    equality: bool = True
    max_side: int = 2


FIRST_ORDER = GenConfig()
SECOND_ORDER = GenConfig(preds=(("P", 1), ("Q", 1)), relparams=(("A", 1),), second_order=True)
SEMANTIC = GenConfig(
    depth=3,
    preds=(("P", 1), ("Q", 1), ("R", 2)),
    params=("a", "b"),
    consts=("k",),
    relparams=(("A", 1),),
    relconsts=(("K", 1),),
    second_order=True,
)


def _s(kind: Kind, name: str, arity: int = 0) -> Sym:
    return Sym(kind, name[0], int(name[1:]) if name[1:] else None, arity)


class _Gen:
    def __init__(self, rng: random.Random, cfg: GenConfig):
        self.rng = rng
        self.cfg = cfg
        self.n = 0

    def fresh(self, kind: Kind, arity: int = 0) -> Sym:
        self.n += 1
        base = "x" if kind is Kind.IND_VAR else "X"
        return Sym(kind, base, self.n, arity)

    def term(self, env) -> Sym:
        pool = [_s(Kind.IND_PAR, p) for p in self.cfg.params]
        pool += [_s(Kind.IND_CONST, k) for k in self.cfg.consts]
        pool += list(env["ind"])
        return self.rng.choice(pool)

    def rels(self, env, arity=None) -> list[Sym]:
        out = [_s(Kind.REL_PAR, n, a) for n, a in self.cfg.relparams]
        out += [_s(Kind.REL_CONST, n, a) for n, a in self.cfg.relconsts]
        out += list(env["rel"])
        return [r for r in out if arity is None or r.arity == arity]

    def atom(self, env):
        rng = self.rng
        choices = ["pred"] * 4
        if self.cfg.equality:
            choices.append("eq")
        if self.cfg.second_order and self.rels(env):
            choices += ["app", "app"]
            if self.cfg.equality:
                choices.append("releq")
        what = rng.choice(choices)
        if what == "pred":
            name, n = rng.choice(self.cfg.preds)
            return PredAtom(_s(Kind.PRED, name, n), tuple(self.term(env) for _ in range(n)))
        if what == "eq":
            return IndEq(self.term(env), self.term(env))
        if what == "app":
            r = rng.choice(self.rels(env))
            return RelApp(r, tuple(self.term(env) for _ in range(r.arity)))
        left = rng.choice(self.rels(env))
        return RelEq(left, rng.choice(self.rels(env, left.arity)))

    def formula(self, env, depth: int):
        rng = self.rng
        if depth <= 0 or rng.random() < 0.25:
            return self.atom(env)
        ops = ["neg", "and", "or", "imp", "iff", "all", "ex"]
        if self.cfg.descriptions:
            ops += ["lam", "iota"]
        if self.cfg.second_order:
            ops += ["all2", "ex2"]
            if self.cfg.descriptions:
                ops.append("iota2")
        op = rng.choice(ops)
        sub = depth - 1
        match op:
            case "neg":
                return Neg(self.formula(env, sub))
            case "and" | "or" | "imp" | "iff":
                cls = {"and": And, "or": Or, "imp": Imp, "iff": Iff}[op]
                return cls(self.formula(env, sub), self.formula(env, sub))
            case "all" | "ex":
                x = self.fresh(Kind.IND_VAR)
                body = self.formula(_bind(env, "ind", x), sub)
                return (Forall if op == "all" else Exists)(x, body)
            case "lam":
                x = self.fresh(Kind.IND_VAR)
                return LamAtom1(x, self.formula(_bind(env, "ind", x), sub), self.term(env))
            case "iota":
                x, y = self.fresh(Kind.IND_VAR), self.fresh(Kind.IND_VAR)
                body = self.formula(_bind(env, "ind", x), sub)
                cond = self.formula(_bind(env, "ind", y), sub)
                return LamAtom1(x, body, Iota1(y, cond))
            case "all2" | "ex2":
                X = self.fresh(Kind.REL_VAR, 1)
                body = self.formula(_bind(env, "rel", X), sub)
                return (Forall2 if op == "all2" else Exists2)(X, body)
            case "iota2":
                X, Y = self.fresh(Kind.REL_VAR, 1), self.fresh(Kind.REL_VAR, 1)
                body = self.formula(_bind(env, "rel", X), sub)
                cond = self.formula(_bind(env, "rel", Y), sub)
                return LamAtom2(X, body, Iota2(Y, cond))
        raise AssertionError(op)


def _bind(env, key, s):
    out = dict(env)
    out[key] = env[key] + (s,)
    return out


_EMPTY = {"ind": (), "rel": ()}


def random_formula(rng: random.Random, cfg: GenConfig = FIRST_ORDER):
    return _Gen(rng, cfg).formula(_EMPTY, cfg.depth)


def random_sequent(rng: random.Random, cfg: GenConfig = FIRST_ORDER) -> Sequent:
    g = _Gen(rng, cfg)
    ant = tuple(g.formula(_EMPTY, cfg.depth) for _ in range(rng.randint(0, cfg.max_side)))
    suc = tuple(g.formula(_EMPTY, cfg.depth) for _ in range(rng.randint(0 if ant else 1, cfg.max_side)))
    return Sequent(ant, suc)


# Valid goal shapes for exercising the prover: each one is a tautology or a
# quantifier/identity law whatever formulas fill it.
TEMPLATES = (
    "f => f",
    "f, g => f & g",
    "f & g => g",
    "f => g | f",
    "=> f | !f",
    "f -> g, f => g",
    "!(f | g) => !f",
    "f <-> g, g => f",
    "all",
    "ex",
    "eq",
)

SMALL = GenConfig(depth=2)
SMALL_SECOND_ORDER = GenConfig(depth=2, preds=(("P", 1), ("Q", 1)), relparams=(("A", 1),), second_order=True)


def template_goal(rng: random.Random, cfg: GenConfig = SMALL, template: str | None = None) -> Sequent:
    """A valid sequent built by filling a template with random formulas."""
    template = template or rng.choice(TEMPLATES)
    g = _Gen(rng, cfg)
    f, h = g.formula(_EMPTY, cfg.depth), g.formula(_EMPTY, cfg.depth)
    a, b = _s(Kind.IND_PAR, "a"), _s(Kind.IND_PAR, "b")
    # bound names from the generator are x1, x2, ...; u is never among them
    u = Sym(Kind.IND_VAR, "u", None, 0)
    match template:
        case "f => f":
            return Sequent((f,), (f,))
        case "f, g => f & g":
            return Sequent((f, h), (And(f, h),))
        case "f & g => g":
            return Sequent((And(f, h),), (h,))
        case "f => g | f":
            return Sequent((f,), (Or(h, f),))
        case "=> f | !f":
            return Sequent((), (Or(f, Neg(f)),))
        case "f -> g, f => g":
            return Sequent((Imp(f, h), f), (h,))
        case "!(f | g) => !f":
            return Sequent((Neg(Or(f, h)),), (Neg(f),))
        case "f <-> g, g => f":
            return Sequent((Iff(f, h), h), (f,))
        case "all":
            body = replace_free(f, {a: u})
            return Sequent((Forall(u, body),), (replace_free(body, {u: b}),))
        case "ex":
            body = replace_free(f, {a: u})
            return Sequent((replace_free(body, {u: b}),), (Exists(u, body),))
        case "eq":
            # rewriting inside an atom: a = b, P(a) => P(b)
            p = PredAtom(_s(Kind.PRED, "P", 1), (a,))
            return Sequent((IndEq(a, b), p, f), (PredAtom(p.pred, (b,)), h))
    raise ValueError(f"unknown template {template!r}")
