"""Bounded cut-free proof search, the witness property, and saturation.

The prover works backwards on sequents treated as sets: every goal is first
reduced to its support (duplicates dropped), and the gap between a rule's
exact premise and the deduplicated goal proved for it is bridged with
weakening nodes, so emitted derivations check even under strict multiset
matching.

Rules fall in two groups.  Invertible rules consume their principal formula
and are applied eagerly without backtracking.  Rules that need an instance
choice (a witness term, a pair of terms, an equation to rewrite with) first
contract their principal formula so it stays available, then try each
candidate in canonical order.  Depth counts logical rule applications on a
branch; structural steps are free.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field, replace

from .calculus import (
    Derivation,
    Instantiation,
    RuleId,
    apply_rule,
    check,
    fresh_params,
    index_of,
)
from .errors import BudgetExhausted, Exhausted, ResourceLimit
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
    alpha_key,
    free_symbols,
    subst,
)

R = RuleId

STRUCTURAL = (R.AX, R.WL, R.WR, R.CL, R.CR)

DEFAULT_RULE_ORDER = (
    # invertible propositional rules
    R.AndL,
    R.OrR,
    R.ImpR,
    R.NegL,
    R.NegR,
    R.AndR,
    R.OrL,
    R.ImpL,
    R.IffL,
    R.IffR,
    # invertible lambda and eigen rules
    R.LamL,
    R.LamR,
    R.AllR,
    R.ExL,
    R.All2R,
    R.Ex2L,
    R.Eq2R,
    R.Iota1L,
    R.Iota1L2,
    # rules with an instance choice
    R.AllL,
    R.ExR,
    R.All2L,
    R.Ex2R,
    R.Eq2L,
    R.EqMinus,
    R.IotaR,
    R.IotaR2,
    R.Iota2L,
    R.Iota2L2,
    R.EqPlus,
    *STRUCTURAL,
)

INVERTIBLE = frozenset(DEFAULT_RULE_ORDER[: DEFAULT_RULE_ORDER.index(R.Iota1L2) + 1])
# invertible only because the principal formula is kept (contracted first)
KEEP_INVERTIBLE = frozenset({R.Iota1L, R.Iota1L2})

_PRINCIPAL_TYPE = {
    R.AndL: ("ant", And),
    R.AndR: ("suc", And),
    R.OrL: ("ant", Or),
    R.OrR: ("suc", Or),
    R.ImpL: ("ant", Imp),
    R.ImpR: ("suc", Imp),
    R.NegL: ("ant", Neg),
    R.NegR: ("suc", Neg),
    R.IffL: ("ant", Iff),
    R.IffR: ("suc", Iff),
    R.LamL: ("ant", LamAtom1),
    R.LamR: ("suc", LamAtom1),
    R.AllL: ("ant", Forall),
    R.AllR: ("suc", Forall),
    R.ExL: ("ant", Exists),
    R.ExR: ("suc", Exists),
    R.All2L: ("ant", Forall2),
    R.All2R: ("suc", Forall2),
    R.Ex2L: ("ant", Exists2),
    R.Ex2R: ("suc", Exists2),
    R.Eq2L: ("ant", RelEq),
    R.Eq2R: ("suc", RelEq),
    R.Iota1L: ("ant", LamAtom1),
    R.Iota2L: ("ant", LamAtom1),
    R.IotaR: ("suc", LamAtom1),
    R.Iota1L2: ("ant", LamAtom2),
    R.Iota2L2: ("ant", LamAtom2),
    R.IotaR2: ("suc", LamAtom2),
}


@dataclass(frozen=True)
class SearchConfig:
    max_depth: int = 8
    max_contractions_per_formula: int = 2
    instantiation_pool_extra: int = 1
    rule_order: tuple = DEFAULT_RULE_ORDER
    time_budget_ms: int = 20_000

    def __post_init__(self):
        object.__setattr__(self, "rule_order", tuple(self.rule_order))
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")
        if self.max_contractions_per_formula < 1:
            raise ValueError("max_contractions_per_formula must be at least 1")
        names = set(self.rule_order)
        if len(names) != len(self.rule_order) or R.Cut in names or R.Hyp in names:
            raise ValueError("rule_order must list distinct non-Cut rules")
        rl = {r for r in R if r not in (R.Cut, R.Hyp)} - {
            R.Eq2L, R.Eq2R, R.All2L, R.All2R, R.Ex2L, R.Ex2R, R.Iota1L2, R.Iota2L2, R.IotaR2
        }
        if not (names == {r for r in R if r not in (R.Cut, R.Hyp)} or names == rl):
            raise ValueError("rule_order must be a permutation of the non-Cut rules of RL or RL2")


# ---------------------------------------------------------------------------
# helpers


def _dedup(items: tuple) -> tuple:
    seen = set()
    out = []
    for f in items:
        k = alpha_key(f)
        if k not in seen:
            seen.add(k)
            out.append(f)
    return tuple(out)


def _set_form(s: Sequent) -> Sequent:
    return Sequent(_dedup(s.ant), _dedup(s.suc))


def _key(s: Sequent):
    return s.support()


def _multiset_minus(big: tuple, small: tuple) -> tuple:
    out = list(big)
    for f in small:
        k = alpha_key(f)
        for i, g in enumerate(out):
            if alpha_key(g) == k:
                del out[i]
                break
    return tuple(out)


def weaken_to(d: Derivation, target: Sequent) -> Derivation:
    """Extend ``d`` with weakenings until its conclusion is ``target``."""
    cur = d
    extra_a = _multiset_minus(target.ant, d.conclusion.ant)
    extra_s = _multiset_minus(target.suc, d.conclusion.suc)
    steps = [("ant", f) for f in extra_a] + [("suc", f) for f in extra_s]
    if not steps:
        return d if d.conclusion == target else replace(d, conclusion=target)
    for n, (side, f) in enumerate(steps):
        s = cur.conclusion
        nxt = Sequent((f,) + s.ant, s.suc) if side == "ant" else Sequent(s.ant, s.suc + (f,))
        if n == len(steps) - 1:
            nxt = target
        principal = (side, index_of(nxt.side(side), f))
        cur = Derivation(nxt, R.WL if side == "ant" else R.WR, Instantiation(principal=principal), (cur,))
    return cur


def _terms(s: Sequent, extra: int) -> list[Sym]:
    syms = s.free_symbols()
    present = sorted((t for t in syms if t.kind in (Kind.IND_PAR, Kind.IND_CONST)), key=Sym.sort_key)
    return present + fresh_params(syms, extra)


def _rels(s: Sequent, arity: int, extra: int) -> list[Sym]:
    syms = s.free_symbols()
    present = sorted(
        (t for t in syms if t.kind in (Kind.REL_PAR, Kind.REL_CONST) and t.arity == arity), key=Sym.sort_key
    )
    return present + fresh_params(syms, extra, Kind.REL_PAR, arity)


def _principal_of(s: Sequent, side: str, f) -> tuple[str, int]:
    return (side, index_of(s.side(side), f))


# ---------------------------------------------------------------------------
# prover


class _Timeout(Exception):
    pass


class _Prover:
    def __init__(self, system: str, cfg: SearchConfig):
        self.system = system
        self.cfg = cfg
        allowed = [r for r in cfg.rule_order if r not in STRUCTURAL]
        if system == "rl":
            allowed = [r for r in allowed if r not in _SECOND_ORDER]
        self.order = allowed
        self.rank = {r: i for i, r in enumerate(allowed)}
        self.deadline = time.monotonic() + cfg.time_budget_ms / 1000.0
        self.frontier: list[Sequent] = []
        self.failed: dict = {}
        self.proved: dict = {}
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.ticks % 256 == 0 and time.monotonic() > self.deadline:
            raise _Timeout()

    # -- candidate generation ------------------------------------------------

    def invertible_step(self, s: Sequent, fired: frozenset):
        """First applicable invertible rule as (rule, principal formula, inst)."""
        best = None
        for rule in self.order:
            if rule not in INVERTIBLE:
                continue
            side, typ = _PRINCIPAL_TYPE[rule]
            for f in s.side(side):
                if not isinstance(f, typ):
                    continue
                if rule in (R.LamL, R.LamR) and not isinstance(f.arg, Sym):
                    continue
                if rule is R.Iota1L and not isinstance(f.arg, Iota1):
                    continue
                if rule in KEEP_INVERTIBLE and _uses(fired, (rule, alpha_key(f))):
                    continue
                best = (rule, f)
                break
            if best:
                break
        if best is None:
            return None
        rule, f = best
        side = _PRINCIPAL_TYPE[rule][0]
        syms = s.free_symbols()
        inst = Instantiation()
        if rule in (R.AllR, R.ExL, R.Iota1L):
            inst = Instantiation(eigen=tuple(fresh_params(syms, 1)))
        elif rule in (R.All2R, R.Ex2L, R.Iota1L2):
            inst = Instantiation(eigen=tuple(fresh_params(syms, 1, Kind.REL_PAR, f.var.arity)))
        elif rule is R.Eq2R:
            inst = Instantiation(eigen=tuple(fresh_params(syms, f.left.arity)))
        return rule, side, f, inst

    def choices(self, s: Sequent):
        """Instance choices for the non-invertible rules, in rule order."""
        extra = self.cfg.instantiation_pool_extra
        out = []
        for rule in self.order:
            if rule in INVERTIBLE:
                continue
            if rule is R.EqPlus:
                have = {alpha_key(f) for f in s.ant}
                for t in _terms(s, 0):
                    eq = IndEq(t, t)
                    if alpha_key(eq) not in have:
                        out.append((rule, None, None, Instantiation(witnesses=(t,))))
                continue
            if rule is R.EqMinus:
                out.extend(self._eq_minus(s))
                continue
            side, typ = _PRINCIPAL_TYPE[rule]
            for f in s.side(side):
                if not isinstance(f, typ):
                    continue
                if rule in (R.AllL, R.ExR):
                    for t in _terms(s, extra):
                        out.append((rule, side, f, Instantiation(witnesses=(t,))))
                elif rule in (R.All2L, R.Ex2R):
                    for t in _rels(s, f.var.arity, extra):
                        out.append((rule, side, f, Instantiation(witnesses=(t,))))
                elif rule is R.Eq2L:
                    for ts in itertools.product(_terms(s, extra), repeat=f.left.arity):
                        out.append((rule, side, f, Instantiation(witnesses=ts)))
                elif rule is R.Iota2L:
                    if not isinstance(f.arg, Iota1):
                        continue
                    for b, c in itertools.combinations(_terms(s, extra), 2):
                        out.append((rule, side, f, Instantiation(witnesses=(b, c))))
                elif rule is R.Iota2L2:
                    for b, c in itertools.combinations(_rels(s, f.var.arity, extra), 2):
                        out.append((rule, side, f, Instantiation(witnesses=(b, c))))
                elif rule is R.IotaR:
                    if not isinstance(f.arg, Iota1):
                        continue
                    for b in _terms(s, extra):
                        (a,) = fresh_params(s.free_symbols() | {b}, 1)
                        out.append((rule, side, f, Instantiation(witnesses=(b,), eigen=(a,))))
                elif rule is R.IotaR2:
                    n = f.var.arity
                    for b in _rels(s, n, extra):
                        (a,) = fresh_params(s.free_symbols() | {b}, 1, Kind.REL_PAR, n)
                        out.append((rule, side, f, Instantiation(witnesses=(b,), eigen=(a,))))
        return out

    def _eq_minus(self, s: Sequent):
        """Rewrites of an antecedent atom by an antecedent equation b = c."""
        out = []
        x = Sym(Kind.IND_VAR, "z", 0)
        for eq in s.ant:
            if not isinstance(eq, IndEq):
                continue
            b, c = eq.left, eq.right
            if b == c:
                continue
            for atom in s.ant:
                if isinstance(atom, (PredAtom, RelApp)):
                    slots = [i for i, t in enumerate(atom.args) if t == b]
                elif isinstance(atom, IndEq):
                    slots = [i for i, t in enumerate((atom.left, atom.right)) if t == b]
                else:
                    continue
                if x in free_symbols(atom):
                    continue
                for r in range(1, len(slots) + 1):
                    for chosen in itertools.combinations(slots, r):
                        if isinstance(atom, IndEq):
                            l, rr = atom.left, atom.right
                            schema = IndEq(x if 0 in chosen else l, x if 1 in chosen else rr)
                        else:
                            args = tuple(x if i in chosen else t for i, t in enumerate(atom.args))
                            schema = type(atom)(atom.pred if isinstance(atom, PredAtom) else atom.rel, args)
                        out.append((R.EqMinus, "ant", atom, Instantiation(witnesses=(b, c), atomic_schema=(schema, x)), eq))
        return out

    # -- search ---------------------------------------------------------------

    def axiom(self, s: Sequent):
        suc = {alpha_key(f): f for f in s.suc}
        for f in s.ant:
            g = suc.get(alpha_key(f))
            if g is not None:
                return weaken_to(Derivation(Sequent((f,), (f,)), R.AX), s)
        return None

    def prove_exact(self, target: Sequent, depth: int, path: frozenset, fired: frozenset):
        s = _set_form(target)
        d = self.prove_set(s, depth, path, fired)
        if d is None:
            return None
        return weaken_to(d, target)

    def prove_set(self, s: Sequent, depth: int, path: frozenset, fired: frozenset):
        self.tick()
        ax = self.axiom(s)
        if ax is not None:
            return ax
        key = (_key(s), fired)
        hit = self.proved.get(key)
        if hit is not None and hit[1] <= depth:
            return hit[0]
        if self.failed.get(key, -1) >= depth:
            return None
        if depth <= 0:
            if len(self.frontier) < 50:
                self.frontier.append(s)
            return None
        k = _key(s)
        if k in path:
            return None
        path = path | {k}
        result = self._expand(s, depth, path, fired)
        if result is None:
            self.failed[key] = max(self.failed.get(key, -1), depth)
        else:
            self.proved[key] = (result, _cost(result))
        return result

    def _expand(self, s: Sequent, depth: int, path, fired):
        step = self.invertible_step(s, fired)
        if step is not None:
            rule, side, f, inst = step
            if rule in KEEP_INVERTIBLE:
                return self._keep_apply(s, rule, side, f, inst, depth, path, _use(fired, (rule, alpha_key(f))))
            return self._apply(s, rule, side, f, inst, depth, path, fired)
        limit = self.cfg.max_contractions_per_formula
        for cand in self.choices(s):
            rule, side, f, inst = cand[:4]
            if rule is R.EqPlus:
                d = self._apply(s, rule, None, None, inst, depth, path, fired)
                if d is not None:
                    return d
                continue
            tag = (rule, (alpha_key(cand[4]), alpha_key(f)) if rule is R.EqMinus else alpha_key(f))
            if _uses(fired, tag) >= limit:
                continue
            if rule is R.EqMinus:
                d = self._eq_minus_apply(s, f, cand[4], inst, depth, path, _use(fired, tag))
            else:
                d = self._keep_apply(s, rule, side, f, inst, depth, path, _use(fired, tag))
            if d is not None:
                return d
        return None

    def _apply(self, s, rule, side, f, inst, depth, path, fired):
        if side is not None:
            inst = Instantiation(
                principal=_principal_of(s, side, f),
                eigen=inst.eigen,
                witnesses=inst.witnesses,
                atomic_schema=inst.atomic_schema,
            )
        premises = apply_rule(s, rule, inst)
        subs = []
        for p in premises:
            d = self.prove_exact(p, depth - 1, path, fired)
            if d is None:
                return None
            subs.append(d)
        return Derivation(s, rule, inst, tuple(subs))

    def _keep_apply(self, s, rule, side, f, inst, depth, path, fired):
        """Contract the principal formula, then apply the rule to one copy."""
        cl = R.CL if side == "ant" else R.CR
        cinst = Instantiation(principal=_principal_of(s, side, f))
        (wider,) = apply_rule(s, cl, cinst)
        d = self._apply(wider, rule, side, f, inst, depth, path, fired)
        if d is None:
            return None
        return Derivation(s, cl, cinst, (d,))

    def _eq_minus_apply(self, s, atom, eq, inst, depth, path, fired):
        """Contract both the equation and the atom so the rewrite only adds."""
        cur = s
        chain = []
        for f in (eq, atom):
            cinst = Instantiation(principal=_principal_of(cur, "ant", f))
            (nxt,) = apply_rule(cur, R.CL, cinst)
            chain.append((cur, cinst))
            cur = nxt
        d = self._apply(cur, R.EqMinus, "ant", atom, inst, depth, path, fired)
        if d is None:
            return None
        for concl, cinst in reversed(chain):
            d = Derivation(concl, R.CL, cinst, (d,))
        return d


def _uses(fired: frozenset, tag) -> int:
    """How often the tagged (rule, principal) pair was used on this branch."""
    return sum(1 for t, _ in fired if t == tag)


def _use(fired: frozenset, tag) -> frozenset:
    return fired | {(tag, _uses(fired, tag))}


_SECOND_ORDER = frozenset({R.Eq2L, R.Eq2R, R.All2L, R.All2R, R.Ex2L, R.Ex2R, R.Iota1L2, R.Iota2L2, R.IotaR2})


def _cost(d: Derivation) -> int:
    """Logical depth: rule applications on the longest branch, structural steps free."""
    here = 0 if d.rule in STRUCTURAL else 1
    return here + max((_cost(p) for p in d.premises), default=0)


def logical_depth(d: Derivation) -> int:
    return _cost(d)


def prove(goal: Sequent, system: str = "rl2", cfg: SearchConfig = SearchConfig()) -> Derivation:
    """Cut-free derivation of ``goal`` found by iterative deepening.

    Raises Exhausted when no derivation exists within ``cfg.max_depth`` and
    ResourceLimit when the time budget runs out.
    """
    system = system.lower()
    if system not in ("rl", "rl2"):
        raise ValueError("system must be 'rl' or 'rl2'")
    if system == "rl" and goal.is_second_order():
        raise ValueError("the goal uses second-order syntax; prove it in rl2")
    prover = _Prover(system, cfg)
    frontier: list[Sequent] = []
    try:
        for depth in range(1, cfg.max_depth + 1):
            prover.failed.clear()
            prover.frontier = []
            d = prover.prove_exact(goal, depth, frozenset(), frozenset())
            if d is not None:
                report = check(d, system, allow_cut=False)
                if not report.accepted:
                    raise RuntimeError(f"prover emitted a rejected derivation: {report}")
                return d
            frontier = prover.frontier
    except _Timeout:
        raise ResourceLimit(f"proof search exceeded {cfg.time_budget_ms} ms") from None
    raise Exhausted(frontier, cfg.max_depth)


# ---------------------------------------------------------------------------
# extended sequents, witness property, saturation


@dataclass(frozen=True)
class ExtendedSequent:
    """A pair of finite sets of formulas (membership up to alpha-equivalence)."""

    ant: tuple = ()
    suc: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ant", _dedup(tuple(self.ant)))
        object.__setattr__(self, "suc", _dedup(tuple(self.suc)))

    @classmethod
    def of(cls, s: Sequent) -> "ExtendedSequent":
        return cls(s.ant, s.suc)

    def to_sequent(self) -> Sequent:
        return Sequent(self.ant, self.suc)

    def keys(self):
        return frozenset(alpha_key(f) for f in self.ant), frozenset(alpha_key(f) for f in self.suc)

    def __eq__(self, other):
        return isinstance(other, ExtendedSequent) and self.keys() == other.keys()

    def __hash__(self):
        return hash(self.keys())

    def __le__(self, other: "ExtendedSequent") -> bool:
        a1, s1 = self.keys()
        a2, s2 = other.keys()
        return a1 <= a2 and s1 <= s2

    def symbols(self) -> set:
        out: set = set()
        for f in self.ant + self.suc:
            out |= free_symbols(f)
        return out

    def __str__(self):
        return str(self.to_sequent())


@dataclass(frozen=True)
class WitnessViolation:
    clause: int
    formula: object
    detail: str = ""
    param: Sym | None = None

    def __str__(self):
        from .parser import print_formula

        extra = f" (for {self.param.name})" if self.param is not None else ""
        return f"clause {self.clause}: {print_formula(self.formula)}{extra}: {self.detail}"


def _has(keys: frozenset, f) -> bool:
    return alpha_key(f) in keys


def _consts(es: ExtendedSequent, kind: Kind, arity: int = 0) -> list[Sym]:
    """Constants of es, plus one fresh constant standing for all unused ones.

    The fresh representative only witnesses when the quantifier is vacuous.
    """
    syms = es.symbols()
    present = sorted((s for s in syms if s.kind is kind and (kind is Kind.IND_CONST or s.arity == arity)), key=Sym.sort_key)
    base = "k" if kind is Kind.IND_CONST else "K"
    return present + fresh_params(syms, 1, kind, arity, base)


def _params(es: ExtendedSequent, kind: Kind, arity: int = 0) -> list[Sym]:
    return sorted((s for s in es.symbols() if s.kind is kind and (kind is Kind.IND_PAR or s.arity == arity)), key=Sym.sort_key)


def check_witness_property(es: ExtendedSequent, clause_order=tuple(range(1, 10))) -> list[WitnessViolation]:
    """Every unmet instance of the nine witness clauses, grouped by clause."""
    G, D = es.keys()
    out: list[WitnessViolation] = []
    ks = _consts(es, Kind.IND_CONST)

    def rel_consts(n):
        return _consts(es, Kind.REL_CONST, n)

    for clause in clause_order:
        if clause in (1, 3):
            for f in es.suc:
                if clause == 1 and isinstance(f, Forall):
                    if not any(_has(D, subst(f.body, f.var, k)) for k in ks):
                        out.append(WitnessViolation(1, f, "no constant instance in the succedent"))
                if clause == 3 and isinstance(f, Forall2):
                    if not any(_has(D, subst(f.body, f.var, k)) for k in rel_consts(f.var.arity)):
                        out.append(WitnessViolation(3, f, "no relational constant instance in the succedent"))
        elif clause in (2, 4):
            for f in es.ant:
                if clause == 2 and isinstance(f, Exists):
                    if not any(_has(G, subst(f.body, f.var, k)) for k in ks):
                        out.append(WitnessViolation(2, f, "no constant instance in the antecedent"))
                if clause == 4 and isinstance(f, Exists2):
                    if not any(_has(G, subst(f.body, f.var, k)) for k in rel_consts(f.var.arity)):
                        out.append(WitnessViolation(4, f, "no relational constant instance in the antecedent"))
        elif clause == 5:
            for f in es.ant:
                if isinstance(f, LamAtom1) and isinstance(f.arg, Iota1):
                    if not any(_has(G, subst(f.arg.cond, f.arg.var, k)) and _has(G, subst(f.body, f.var, k)) for k in ks):
                        out.append(WitnessViolation(5, f, "no constant satisfying both condition and body"))
        elif clause == 7:
            for f in es.ant:
                if isinstance(f, LamAtom2):
                    if not any(
                        _has(G, subst(f.arg.cond, f.arg.var, k)) and _has(G, subst(f.body, f.var, k))
                        for k in rel_consts(f.var.arity)
                    ):
                        out.append(WitnessViolation(7, f, "no relational constant satisfying both condition and body"))
        elif clause == 6:
            for f in es.suc:
                if isinstance(f, LamAtom1) and isinstance(f.arg, Iota1):
                    y, phi = f.arg.var, f.arg.cond
                    for b in _params(es, Kind.IND_PAR):
                        ok = _has(D, subst(phi, y, b)) or _has(D, subst(f.body, f.var, b))
                        ok = ok or any(_has(D, IndEq(k, b)) and _has(G, subst(phi, y, k)) for k in ks)
                        if not ok:
                            out.append(WitnessViolation(6, f, "no disjunct holds", b))
        elif clause == 8:
            for f in es.suc:
                if isinstance(f, LamAtom2):
                    n = f.var.arity
                    y, phi = f.arg.var, f.arg.cond
                    for b in _params(es, Kind.REL_PAR, n):
                        ok = _has(D, subst(phi, y, b)) or _has(D, subst(f.body, f.var, b))
                        ok = ok or any(_has(D, RelEq(k, b)) and _has(G, subst(phi, y, k)) for k in rel_consts(n))
                        if not ok:
                            out.append(WitnessViolation(8, f, "no disjunct holds", b))
        elif clause == 9:
            for f in es.suc:
                if isinstance(f, RelEq):
                    n = f.left.arity
                    found = False
                    for kt in itertools.product(ks, repeat=n):
                        x, y = RelApp(f.left, kt), RelApp(f.right, kt)
                        if (_has(G, x) and _has(D, y)) or (_has(G, y) and _has(D, x)):
                            found = True
                            break
                    if not found:
                        out.append(WitnessViolation(9, f, "no separating constant tuple"))
    return out


@dataclass
class _Fresh:
    taken: set
    used: int = 0
    budget: int = 0

    def take(self, kind: Kind, arity: int = 0) -> Sym:
        if self.used >= self.budget:
            raise _OutOfBudget()
        base = "k" if kind is Kind.IND_CONST else "K"
        i = 1
        while True:
            s = Sym(kind, base, i, arity)
            if (kind, s.name) not in self.taken:
                self.taken.add((kind, s.name))
                self.used += 1
                return s
            i += 1


class _OutOfBudget(Exception):
    pass


@dataclass(frozen=True)
class SaturationConfig:
    clause_order: tuple = tuple(range(1, 10))
    prove_guided: bool = False
    guide: SearchConfig = field(default_factory=lambda: SearchConfig(max_depth=4, time_budget_ms=2000))


def saturate(es: ExtendedSequent, fresh_const_budget: int = 32, cfg: SaturationConfig = SaturationConfig()) -> ExtendedSequent:
    """Add witnesses until the witness property holds.

    Each clause fires at most once per triggering formula (per parameter for
    clauses 6 and 8).  Raises BudgetExhausted, carrying the partial result,
    when more fresh constants are needed than the budget allows.
    """
    ant, suc = list(es.ant), list(es.suc)
    fresh = _Fresh({(s.kind, s.name) for s in es.symbols()}, 0, fresh_const_budget)
    fired: set = set()

    def cur() -> ExtendedSequent:
        return ExtendedSequent(tuple(ant), tuple(suc))

    while True:
        state = cur()
        todo = [v for v in check_witness_property(state, cfg.clause_order) if (v.clause, alpha_key(v.formula), v.param) not in fired]
        if not todo:
            return state
        v = todo[0]
        fired.add((v.clause, alpha_key(v.formula), v.param))
        f = v.formula
        try:
            if v.clause == 1:
                suc.append(subst(f.body, f.var, fresh.take(Kind.IND_CONST)))
            elif v.clause == 2:
                ant.append(subst(f.body, f.var, fresh.take(Kind.IND_CONST)))
            elif v.clause == 3:
                suc.append(subst(f.body, f.var, fresh.take(Kind.REL_CONST, f.var.arity)))
            elif v.clause == 4:
                ant.append(subst(f.body, f.var, fresh.take(Kind.REL_CONST, f.var.arity)))
            elif v.clause in (5, 7):
                kind = Kind.IND_CONST if v.clause == 5 else Kind.REL_CONST
                k = fresh.take(kind, f.var.arity)
                ant.append(subst(f.arg.cond, f.arg.var, k))
                ant.append(subst(f.body, f.var, k))
            elif v.clause in (6, 8):
                _fire_description_succedent(v, ant, suc, fresh, cfg)
            elif v.clause == 9:
                n = f.left.arity
                kt = tuple(fresh.take(Kind.IND_CONST) for _ in range(n))
                ant.append(RelApp(f.left, kt))
                suc.append(RelApp(f.right, kt))
        except _OutOfBudget:
            raise BudgetExhausted(cur(), check_witness_property(cur(), cfg.clause_order)) from None


def _fire_description_succedent(v: WitnessViolation, ant: list, suc: list, fresh: _Fresh, cfg: SaturationConfig):
    f, b = v.formula, v.param
    y, phi = f.arg.var, f.arg.cond
    first = subst(phi, y, b)
    if not cfg.prove_guided:
        suc.append(first)
        return
    # consistency-guided: take the first disjunct whose addition is not provable
    second = subst(f.body, f.var, b)
    for side_formula in (first, second):
        trial = Sequent(tuple(ant), tuple(suc) + (side_formula,))
        try:
            prove(trial, "rl2", cfg.guide)
        except (Exhausted, ResourceLimit):
            suc.append(side_formula)
            return
    kind = Kind.IND_CONST if v.clause == 6 else Kind.REL_CONST
    k = fresh.take(kind, 0 if v.clause == 6 else b.arity)
    suc.append(IndEq(k, b) if v.clause == 6 else RelEq(k, b))
    ant.append(subst(phi, y, k))
