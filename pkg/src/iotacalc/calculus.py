"""Sequent calculus rules, derivation checking, derived rules and renaming.

Rules are applied backwards: :func:`apply_rule` takes a conclusion and an
:class:`Instantiation` and returns the premises the rule demands.  The checker
recomputes premises that way at every node and compares them with the
premises actually present.

Formula occurrences are addressed by ``(side, index)`` where ``index`` counts
in the canonical order of that side: formulas sorted by printed form, ties
broken by position.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field, replace

from .errors import ArityMismatch, CaptureError, RuleError, UnknownRuleName
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
    RelApp,
    RelEq,
    Sequent,
    Sym,
    alpha_eq,
    alpha_key,
    check_wff,
    free_symbols,
    is_atomic,
    is_second_order,
    replace_free,
    subst,
)


class RuleId(enum.Enum):
    Cut = "Cut"
    AX = "AX"
    WL = "WL"
    WR = "WR"
    CL = "CL"
    CR = "CR"
    AndL = "AndL"
    AndR = "AndR"
    NegL = "NegL"
    OrL = "OrL"
    OrR = "OrR"
    NegR = "NegR"
    ImpL = "ImpL"
    ImpR = "ImpR"
    AllL = "AllL"
    IffL = "IffL"
    AllR = "AllR"
    ExR = "ExR"
    IffR = "IffR"
    ExL = "ExL"
    EqPlus = "EqPlus"
    EqMinus = "EqMinus"
    LamL = "LamL"
    LamR = "LamR"
    Iota1L = "Iota1L"
    Iota2L = "Iota2L"
    IotaR = "IotaR"
    Eq2L = "Eq2L"
    Eq2R = "Eq2R"
    All2L = "All2L"
    All2R = "All2R"
    Ex2L = "Ex2L"
    Ex2R = "Ex2R"
    Iota1L2 = "Iota1L2"
    Iota2L2 = "Iota2L2"
    IotaR2 = "IotaR2"
    # a leaf closed by an assumption sequent rather than by an axiom
    Hyp = "Hyp"


def rule_id(name: str) -> RuleId:
    try:
        return RuleId(name)
    except ValueError:
        raise UnknownRuleName(f"no rule named {name!r}") from None


SECOND_ORDER_RULES = frozenset(
    {
        RuleId.Eq2L,
        RuleId.Eq2R,
        RuleId.All2L,
        RuleId.All2R,
        RuleId.Ex2L,
        RuleId.Ex2R,
        RuleId.Iota1L2,
        RuleId.Iota2L2,
        RuleId.IotaR2,
    }
)

PREMISE_COUNT = {r: 1 for r in RuleId}
PREMISE_COUNT.update({RuleId.AX: 0, RuleId.Hyp: 0})
PREMISE_COUNT.update(
    {r: 2 for r in (RuleId.Cut, RuleId.AndR, RuleId.OrL, RuleId.ImpL, RuleId.IffL, RuleId.IffR, RuleId.Eq2L, RuleId.Eq2R)}
)
PREMISE_COUNT.update({r: 3 for r in (RuleId.Iota2L, RuleId.IotaR, RuleId.Iota2L2, RuleId.IotaR2)})

RL_RULES = tuple(r for r in RuleId if r not in SECOND_ORDER_RULES and r is not RuleId.Hyp)
RL2_RULES = tuple(r for r in RuleId if r is not RuleId.Hyp)

REASONS = (
    "PremiseMismatch",
    "EigenvariableViolation",
    "NotAtomic",
    "ArityMismatch",
    "WrongPremiseCount",
    "BadInstantiation",
    "CutForbidden",
    # beyond the core list: second-order material in RL mode, and open leaves
    "WrongSystem",
    "UnprovedLeaf",
)


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True)
class Instantiation:
    principal: tuple[str, int] | None = None
    eigen: tuple[Sym, ...] = ()
    witnesses: tuple[Sym, ...] = ()
    cut_formula: object = None
    atomic_schema: tuple | None = None
    # Cut only: canonical indices of the conclusion's antecedent and
    # succedent that go to the left premise
    split: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        object.__setattr__(self, "eigen", tuple(self.eigen))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if self.principal is not None:
            object.__setattr__(self, "principal", (self.principal[0], int(self.principal[1])))
        if self.split is not None:
            object.__setattr__(self, "split", (tuple(self.split[0]), tuple(self.split[1])))


@dataclass(frozen=True)
class Derivation:
    conclusion: Sequent
    rule: RuleId
    inst: Instantiation = field(default_factory=Instantiation)
    premises: tuple["Derivation", ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))

    def nodes(self, path=()):
        """Pre-order walk yielding ``(path, node)``."""
        yield path, self
        for i, p in enumerate(self.premises):
            yield from p.nodes(path + (i,))

    def leaves(self):
        return [d for _, d in self.nodes() if not d.premises]


def height(d: Derivation) -> int:
    if not d.premises:
        return 1
    return 1 + max(height(p) for p in d.premises)


def size(d: Derivation, count_hyp: bool = False) -> int:
    """Number of inference nodes; assumption leaves are not inferences."""
    return sum(1 for _, n in d.nodes() if count_hyp or n.rule is not RuleId.Hyp)


def uses_cut(d: Derivation) -> bool:
    return any(n.rule is RuleId.Cut for _, n in d.nodes())


# ---------------------------------------------------------------------------
# canonical occurrence order


def _pstr(f) -> str:
    d = f.__dict__
    s = d.get("_pstr")
    if s is None:
        from .parser import print_formula

        s = print_formula(f)
        object.__setattr__(f, "_pstr", s)
    return s


def canonical_order(side: tuple) -> list[int]:
    """Positions of ``side`` listed in canonical order."""
    return sorted(range(len(side)), key=lambda i: (_pstr(side[i]), i))


def canonical(side: tuple) -> tuple:
    return tuple(side[i] for i in canonical_order(side))


def index_of(side: tuple, f, skip: int = 0) -> int | None:
    """Canonical index of the ``skip``-th alpha-copy of ``f`` in ``side``."""
    k = alpha_key(f)
    seen = 0
    for ci, pos in enumerate(canonical_order(side)):
        if alpha_key(side[pos]) == k:
            if seen == skip:
                return ci
            seen += 1
    return None


def _take(s: Sequent, principal, types=None, what="formula"):
    """Split off the principal occurrence: returns (formula, ant rest, suc rest)."""
    if principal is None:
        raise RuleError("BadInstantiation", "the rule needs a principal occurrence")
    side, idx = principal
    if side not in ("ant", "suc"):
        raise RuleError("BadInstantiation", f"unknown side {side!r}")
    items = s.side(side)
    order = canonical_order(items)
    if not 0 <= idx < len(items):
        raise RuleError("BadInstantiation", f"no occurrence {side}:{idx} in the conclusion")
    pos = order[idx]
    f = items[pos]
    if types is not None and not isinstance(f, types):
        raise RuleError("BadInstantiation", f"{side}:{idx} is {_pstr(f)}, not a {what}")
    rest = items[:pos] + items[pos + 1 :]
    if side == "ant":
        return f, rest, s.suc
    return f, s.ant, rest


def _remove(items: tuple, f) -> tuple | None:
    k = alpha_key(f)
    for i, g in enumerate(items):
        if alpha_key(g) == k:
            return items[:i] + items[i + 1 :]
    return None


def _need_side(principal, side: str):
    if principal is not None and principal[0] != side:
        raise RuleError("BadInstantiation", f"the principal formula must be in the {'antecedent' if side == 'ant' else 'succedent'}")


def _witness(inst: Instantiation, n: int, kinds, what: str) -> tuple[Sym, ...]:
    ws = inst.witnesses
    if len(ws) != n:
        raise RuleError("BadInstantiation", f"expected {n} {what}, got {len(ws)}")
    for w in ws:
        if not isinstance(w, Sym) or w.kind not in kinds:
            raise RuleError("BadInstantiation", f"{w!r} cannot serve as {what}")
    return ws


IND_WITNESS = (Kind.IND_PAR, Kind.IND_CONST)
REL_WITNESS = (Kind.REL_PAR, Kind.REL_CONST)


def _eigen(inst: Instantiation, n: int, kind: Kind, conclusion: Sequent, arity: int = 0) -> tuple[Sym, ...]:
    es = inst.eigen
    if len(es) != n:
        raise RuleError("BadInstantiation", f"expected {n} eigen parameter(s), got {len(es)}")
    for e in es:
        if not isinstance(e, Sym) or e.kind is not kind:
            raise RuleError("BadInstantiation", f"eigen {e!r} is not a {'relational ' if kind is Kind.REL_PAR else ''}parameter")
        if kind is Kind.REL_PAR and e.arity != arity:
            raise RuleError("ArityMismatch", f"eigen {e!r} should have arity {arity}")
    if len(set(es)) != len(es):
        raise RuleError("EigenvariableViolation", "eigen parameters must be pairwise distinct")
    present = conclusion.free_symbols()
    for e in es:
        if e in present:
            raise RuleError("EigenvariableViolation", f"{e.name} occurs in the conclusion")
    return es


def _rel_witness_arity(ws, arity):
    for w in ws:
        if w.arity != arity:
            raise RuleError("ArityMismatch", f"{w!r} has arity {w.arity}, expected {arity}")


def _sub(f, x, t):
    try:
        return subst(f, x, t)
    except CaptureError as e:
        raise RuleError("BadInstantiation", str(e)) from None
    except ArityMismatch as e:
        raise RuleError("ArityMismatch", str(e)) from None


def _relapp(r: Sym, args) -> RelApp:
    return RelApp(r, tuple(args))


def apply_rule(conclusion: Sequent, rule: RuleId, inst: Instantiation = Instantiation(), assumptions=()) -> list[Sequent]:
    """Premises demanded by ``rule`` for ``conclusion`` under ``inst``.

    Raises RuleError whose ``reason`` is one of :data:`REASONS`.
    """
    s = conclusion
    S = Sequent
    R = RuleId
    p = inst.principal
    match rule:
        case R.AX:
            if len(s.ant) == 1 and len(s.suc) == 1 and alpha_eq(s.ant[0], s.suc[0]):
                return []
            raise RuleError("BadInstantiation", "an axiom has the form φ => φ")
        case R.Hyp:
            if any(s.same(a) for a in assumptions):
                return []
            if len(s.ant) == 1 and len(s.suc) == 1 and alpha_eq(s.ant[0], s.suc[0]):
                return []
            raise RuleError("UnprovedLeaf", "leaf is neither an axiom nor an assumption")
        case R.Cut:
            phi = inst.cut_formula
            if phi is None:
                raise RuleError("BadInstantiation", "Cut needs a cut formula")
            if inst.split is None:
                raise RuleError("BadInstantiation", "Cut needs a split of the conclusion")
            (la, ls) = inst.split
            oa, os_ = canonical_order(s.ant), canonical_order(s.suc)
            if any(not 0 <= i < len(oa) for i in la) or any(not 0 <= i < len(os_) for i in ls) or len(set(la)) != len(la) or len(set(ls)) != len(ls):
                raise RuleError("BadInstantiation", "split indices out of range")
            left_a = {oa[i] for i in la}
            left_s = {os_[i] for i in ls}
            gam = tuple(f for i, f in enumerate(s.ant) if i in left_a)
            pi = tuple(f for i, f in enumerate(s.ant) if i not in left_a)
            dlt = tuple(f for i, f in enumerate(s.suc) if i in left_s)
            sig = tuple(f for i, f in enumerate(s.suc) if i not in left_s)
            return [S(gam, dlt + (phi,)), S((phi,) + pi, sig)]
        case R.WL | R.WR:
            _need_side(p, "ant" if rule is R.WL else "suc")
            _, a, b = _take(s, p)
            return [S(a, b)]
        case R.CL:
            _need_side(p, "ant")
            f, _, _ = _take(s, p)
            return [S((f,) + s.ant, s.suc)]
        case R.CR:
            _need_side(p, "suc")
            f, _, _ = _take(s, p)
            return [S(s.ant, s.suc + (f,))]
        case R.AndL:
            _need_side(p, "ant")
            f, a, b = _take(s, p, And, "conjunction")
            return [S((f.left, f.right) + a, b)]
        case R.AndR:
            _need_side(p, "suc")
            f, a, b = _take(s, p, And, "conjunction")
            return [S(a, b + (f.left,)), S(a, b + (f.right,))]
        case R.NegL:
            _need_side(p, "ant")
            f, a, b = _take(s, p, Neg, "negation")
            return [S(a, b + (f.body,))]
        case R.NegR:
            _need_side(p, "suc")
            f, a, b = _take(s, p, Neg, "negation")
            return [S((f.body,) + a, b)]
        case R.OrL:
            _need_side(p, "ant")
            f, a, b = _take(s, p, Or, "disjunction")
            return [S((f.left,) + a, b), S((f.right,) + a, b)]
        case R.OrR:
            _need_side(p, "suc")
            f, a, b = _take(s, p, Or, "disjunction")
            return [S(a, b + (f.left, f.right))]
        case R.ImpL:
            _need_side(p, "ant")
            f, a, b = _take(s, p, Imp, "implication")
            return [S(a, b + (f.left,)), S((f.right,) + a, b)]
        case R.ImpR:
            _need_side(p, "suc")
            f, a, b = _take(s, p, Imp, "implication")
            return [S((f.left,) + a, b + (f.right,))]
        case R.IffL:
            _need_side(p, "ant")
            f, a, b = _take(s, p, Iff, "biconditional")
            return [S(a, b + (f.left, f.right)), S((f.left, f.right) + a, b)]
        case R.IffR:
            _need_side(p, "suc")
            f, a, b = _take(s, p, Iff, "biconditional")
            return [S((f.left,) + a, b + (f.right,)), S((f.right,) + a, b + (f.left,))]
        case R.AllL | R.ExR:
            _need_side(p, "ant" if rule is R.AllL else "suc")
            f, a, b = _take(s, p, Forall if rule is R.AllL else Exists, "first-order quantification")
            (w,) = _witness(inst, 1, IND_WITNESS, "a term")
            g = _sub(f.body, f.var, w)
            return [S((g,) + a, b)] if rule is R.AllL else [S(a, b + (g,))]
        case R.AllR | R.ExL:
            _need_side(p, "suc" if rule is R.AllR else "ant")
            f, a, b = _take(s, p, Forall if rule is R.AllR else Exists, "first-order quantification")
            (e,) = _eigen(inst, 1, Kind.IND_PAR, s)
            g = _sub(f.body, f.var, e)
            return [S(a, b + (g,))] if rule is R.AllR else [S((g,) + a, b)]
        case R.EqPlus:
            (w,) = _witness(inst, 1, IND_WITNESS, "a term")
            return [S((IndEq(w, w),) + s.ant, s.suc)]
        case R.EqMinus:
            _need_side(p, "ant")
            if inst.atomic_schema is None:
                raise RuleError("BadInstantiation", "EqMinus needs the atomic schema and its variable")
            schema, x = inst.atomic_schema
            if not is_atomic(schema):
                raise RuleError("NotAtomic", f"{_pstr(schema)} is not atomic")
            if not isinstance(x, Sym) or x.kind is not Kind.IND_VAR:
                raise RuleError("BadInstantiation", "the schema variable must be an individual variable")
            b, c = _witness(inst, 2, IND_WITNESS, "terms b, c")
            f, a, rest = _take(s, p)
            if not alpha_eq(f, _sub(schema, x, b)):
                raise RuleError("BadInstantiation", f"{_pstr(f)} is not the schema instantiated at {b.name}")
            a2 = _remove(a, IndEq(b, c))
            if a2 is None:
                raise RuleError("BadInstantiation", f"{b.name} = {c.name} is missing from the antecedent")
            return [S((_sub(schema, x, c),) + a2, rest)]
        case R.LamL | R.LamR:
            _need_side(p, "ant" if rule is R.LamL else "suc")
            f, a, b = _take(s, p, LamAtom1, "lambda atom")
            if not isinstance(f.arg, Sym):
                raise RuleError("BadInstantiation", "the abstract is applied to a description, not a term")
            g = _sub(f.body, f.var, f.arg)
            return [S((g,) + a, b)] if rule is R.LamL else [S(a, b + (g,))]
        case R.Iota1L | R.Iota1L2:
            _need_side(p, "ant")
            second = rule is R.Iota1L2
            f, a, b = _take(s, p, LamAtom2 if second else LamAtom1, "description atom")
            if not second and not isinstance(f.arg, Iota1):
                raise RuleError("BadInstantiation", "the abstract is applied to a term, not a description")
            (e,) = _eigen(inst, 1, Kind.REL_PAR if second else Kind.IND_PAR, s, f.var.arity)
            return [S((_sub(f.arg.cond, f.arg.var, e), _sub(f.body, f.var, e)) + a, b)]
        case R.Iota2L | R.Iota2L2:
            _need_side(p, "ant")
            second = rule is R.Iota2L2
            f, a, b = _take(s, p, LamAtom2 if second else LamAtom1, "description atom")
            if not second and not isinstance(f.arg, Iota1):
                raise RuleError("BadInstantiation", "the abstract is applied to a term, not a description")
            w1, w2 = _witness(inst, 2, REL_WITNESS if second else IND_WITNESS, "two witnesses")
            if second:
                _rel_witness_arity((w1, w2), f.var.arity)
            y, phi = f.arg.var, f.arg.cond
            eq = RelEq(w1, w2) if second else IndEq(w1, w2)
            return [S(a, b + (_sub(phi, y, w1),)), S(a, b + (_sub(phi, y, w2),)), S((eq,) + a, b)]
        case R.IotaR | R.IotaR2:
            _need_side(p, "suc")
            second = rule is R.IotaR2
            f, a, b = _take(s, p, LamAtom2 if second else LamAtom1, "description atom")
            if not second and not isinstance(f.arg, Iota1):
                raise RuleError("BadInstantiation", "the abstract is applied to a term, not a description")
            (w,) = _witness(inst, 1, REL_WITNESS if second else IND_WITNESS, "a witness")
            if second:
                _rel_witness_arity((w,), f.var.arity)
            (e,) = _eigen(inst, 1, Kind.REL_PAR if second else Kind.IND_PAR, s, f.var.arity)
            if e == w:
                raise RuleError("EigenvariableViolation", "the eigen parameter must differ from the witness")
            y, phi = f.arg.var, f.arg.cond
            eq = RelEq(e, w) if second else IndEq(e, w)
            return [
                S(a, b + (_sub(phi, y, w),)),
                S(a, b + (_sub(f.body, f.var, w),)),
                S((_sub(phi, y, e),) + a, b + (eq,)),
            ]
        case R.Eq2L:
            _need_side(p, "ant")
            f, a, b = _take(s, p, RelEq, "relational identity")
            n = f.left.arity
            if len(inst.witnesses) != n:
                raise RuleError("ArityMismatch", f"{n} terms needed, got {len(inst.witnesses)}")
            ts = _witness(inst, n, IND_WITNESS, "terms")
            xl, yl = _relapp(f.left, ts), _relapp(f.right, ts)
            return [S(a, b + (xl, yl)), S((xl, yl) + a, b)]
        case R.Eq2R:
            _need_side(p, "suc")
            f, a, b = _take(s, p, RelEq, "relational identity")
            n = f.left.arity
            if len(inst.eigen) != n:
                raise RuleError("ArityMismatch", f"{n} eigen parameters needed, got {len(inst.eigen)}")
            es = _eigen(inst, n, Kind.IND_PAR, s)
            xl, yl = _relapp(f.left, es), _relapp(f.right, es)
            return [S((xl,) + a, b + (yl,)), S((yl,) + a, b + (xl,))]
        case R.All2L | R.Ex2R:
            _need_side(p, "ant" if rule is R.All2L else "suc")
            f, a, b = _take(s, p, Forall2 if rule is R.All2L else Exists2, "second-order quantification")
            (w,) = _witness(inst, 1, REL_WITNESS, "a relational witness")
            _rel_witness_arity((w,), f.var.arity)
            g = _sub(f.body, f.var, w)
            return [S((g,) + a, b)] if rule is R.All2L else [S(a, b + (g,))]
        case R.All2R | R.Ex2L:
            _need_side(p, "suc" if rule is R.All2R else "ant")
            f, a, b = _take(s, p, Forall2 if rule is R.All2R else Exists2, "second-order quantification")
            (e,) = _eigen(inst, 1, Kind.REL_PAR, s, f.var.arity)
            g = _sub(f.body, f.var, e)
            return [S(a, b + (g,))] if rule is R.All2R else [S((g,) + a, b)]
    raise RuleError("BadInstantiation", f"rule {rule.value} cannot be applied here")


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class Violation:
    path: tuple[int, ...]
    rule: str
    reason: str
    detail: str = ""

    def to_dict(self) -> dict:
        return {"path": list(self.path), "rule": self.rule, "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class CheckReport:
    verdict: str
    violations: tuple[Violation, ...]
    height: int
    uses_cut: bool

    @property
    def accepted(self) -> bool:
        return self.verdict == "accepted"

    def reasons(self) -> list[str]:
        return [v.reason for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "violations": [v.to_dict() for v in self.violations],
            "height": self.height,
            "uses_cut": self.uses_cut,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def __str__(self) -> str:
        lines = [f"{self.verdict} (height {self.height}, {'uses' if self.uses_cut else 'no'} cut)"]
        for v in self.violations:
            where = "root" if not v.path else "root." + ".".join(map(str, v.path))
            lines.append(f"  {where}: {v.rule}: {v.reason}" + (f": {v.detail}" if v.detail else ""))
        return "\n".join(lines)


def _matches(expected: Sequent, actual: Sequent, strict: bool) -> bool:
    if strict:
        return expected.same(actual)
    return expected.support() == actual.support()


def _infer_split(s: Sequent, left: Sequent, phi) -> tuple:
    """Send conclusion formulas to the left premise while it has room for them."""
    kphi = alpha_key(phi)

    def side(items, room: Counter):
        out = []
        for ci, pos in enumerate(canonical_order(items)):
            k = alpha_key(items[pos])
            if room[k] > 0:
                room[k] -= 1
                out.append(ci)
        return tuple(out)

    ant_room = Counter(alpha_key(f) for f in left.ant)
    suc_room = Counter(alpha_key(f) for f in left.suc)
    suc_room[kphi] -= 1
    return side(s.ant, ant_room), side(s.suc, suc_room)


def _cut_support_ok(s: Sequent, p1: Sequent, p2: Sequent, phi) -> bool:
    k = alpha_key(phi)
    A, B = s.support()
    S1, T1 = p1.support()
    S2, T2 = p2.support()
    if k not in T1 or k not in S2:
        return False
    ant_ok = S1 <= A and (S2 - {k}) <= A and A <= (S1 | S2)
    suc_ok = T2 <= B and (T1 - {k}) <= B and B <= (T1 | T2)
    return ant_ok and suc_ok


def _uses_second_order(d: Derivation) -> bool:
    if d.conclusion.is_second_order():
        return True
    i = d.inst
    if any(s.kind.relational for s in (*i.eigen, *i.witnesses)):
        return True
    return i.cut_formula is not None and is_second_order(i.cut_formula)


def check(
    d: Derivation,
    system: str = "rl2",
    allow_cut: bool = True,
    assumptions=(),
    cut_on_assumptions_only: bool = False,
    strict_eigen: bool = False,
    strict_multiset: bool = False,
) -> CheckReport:
    """Verify every node of ``d``; failures are collected, never raised."""
    system = system.lower()
    if system not in ("rl", "rl2"):
        raise ValueError("system must be 'rl' or 'rl2'")
    assumptions = tuple(assumptions)
    assumption_keys = {alpha_key(f) for a in assumptions for f in a.formulas()}
    out: list[Violation] = []
    eigen_uses: Counter = Counter()

    for path, node in d.nodes():
        rule = node.rule
        name = rule.value

        def bad(reason, detail=""):
            out.append(Violation(path, name, reason, detail))

        try:
            for f in node.conclusion.formulas():
                check_wff(f)
        except ArityMismatch as e:
            bad("ArityMismatch", str(e))
            continue
        except TypeError as e:
            bad("BadInstantiation", str(e))
            continue
        if system == "rl" and (rule in SECOND_ORDER_RULES or _uses_second_order(node)):
            bad("WrongSystem", "second-order material in an RL derivation")
            continue
        if rule is RuleId.Cut:
            if not allow_cut:
                bad("CutForbidden", "cut is not allowed")
            elif cut_on_assumptions_only and (
                node.inst.cut_formula is None or alpha_key(node.inst.cut_formula) not in assumption_keys
            ):
                bad("CutForbidden", "cut formula does not occur in any assumption")
        want = PREMISE_COUNT[rule]
        if len(node.premises) != want:
            bad("WrongPremiseCount", f"{name} takes {want} premise(s), found {len(node.premises)}")
            continue
        eigen_uses.update(node.inst.eigen)
        inst = node.inst
        actual = [p.conclusion for p in node.premises]
        try:
            if rule is RuleId.Cut and inst.split is None and inst.cut_formula is not None:
                if strict_multiset:
                    inst = replace(inst, split=_infer_split(node.conclusion, actual[0], inst.cut_formula))
                else:
                    if not _cut_support_ok(node.conclusion, actual[0], actual[1], inst.cut_formula):
                        bad("PremiseMismatch", "premises do not combine into the conclusion")
                    continue
            expected = apply_rule(node.conclusion, rule, inst, assumptions)
        except RuleError as e:
            bad(e.reason, e.detail)
            continue
        for i, (exp, act) in enumerate(zip(expected, actual)):
            if not _matches(exp, act, strict_multiset):
                bad("PremiseMismatch", f"premise {i}: expected {exp}, found {act}")

    if strict_eigen:
        root_syms = d.conclusion.free_symbols()
        for e, n in sorted(eigen_uses.items(), key=lambda kv: kv[0].sort_key()):
            if n > 1 or e in root_syms:
                out.append(Violation((), d.rule.value, "EigenvariableViolation", f"{e.name} is not globally fresh"))

    return CheckReport(
        "accepted" if not out else "rejected",
        tuple(out),
        height(d),
        uses_cut(d),
    )


# ---------------------------------------------------------------------------
# derived rules


def fresh_params(avoid: set, n: int, kind: Kind = Kind.IND_PAR, arity: int = 0, base: str | None = None) -> list[Sym]:
    """First ``n`` parameters of the given kind not in ``avoid``, in name order."""
    bases = [base] if base else (["a", "b", "c", "d"] if kind is Kind.IND_PAR else ["A", "B", "C"])
    out: list[Sym] = []
    taken = {(s.kind, s.name) for s in avoid}
    index = None
    while len(out) < n:
        for b in bases:
            s = Sym(kind, b, index, arity)
            if (kind, s.name) not in taken and s not in out:
                out.append(s)
                if len(out) == n:
                    break
        index = 1 if index is None else index + 1
    return out


def _principal(s: Sequent, side: str, f, skip: int = 0) -> tuple[str, int]:
    i = index_of(s.side(side), f, skip)
    if i is None:
        raise RuleError("BadInstantiation", f"{_pstr(f)} does not occur in the {side}")
    return (side, i)


def _symbols_of(*items) -> set:
    out = set()
    for it in items:
        if isinstance(it, Sequent):
            out |= it.free_symbols()
        else:
            out |= free_symbols(it)
    return out


def expand_derived(rule: str, context: Sequent, inst: Instantiation) -> Derivation:
    """Proof tree of a derived rule instance, closed by one assumption leaf.

    ``Eq2Plus``: ``context`` is the conclusion Γ => Δ and ``inst.witnesses``
    names the relational symbol X; the open leaf is ``X = X, Γ => Δ``.

    ``Eq2Minus``: ``context`` is the conclusion ``B = C, 𝒜_B, Γ => Δ``,
    ``inst.witnesses`` is ``[B, C]`` and ``inst.atomic_schema`` is ``(𝒜, X)``
    with 𝒜 of the form ``X(t1,...,tn)``; the open leaf is ``𝒜_C, Γ => Δ``.
    """
    R = RuleId
    if rule == "Eq2Plus":
        if len(inst.witnesses) != 1 or not inst.witnesses[0].kind.relational or inst.witnesses[0].kind is Kind.PRED:
            raise RuleError("BadInstantiation", "Eq2Plus needs one relational symbol")
        X = inst.witnesses[0]
        eigen = tuple(inst.eigen) or tuple(fresh_params(_symbols_of(context) | {X}, X.arity))
        if len(eigen) != X.arity:
            raise RuleError("ArityMismatch", f"{X!r} needs {X.arity} eigen parameters")
        eq = RelEq(X, X)
        atom = _relapp(X, eigen)
        ax = Derivation(Sequent((atom,), (atom,)), R.AX)
        top = Sequent((), (eq,))
        eq2r = Derivation(top, R.Eq2R, Instantiation(principal=("suc", 0), eigen=eigen), (ax, ax))
        hyp = Derivation(Sequent((eq,) + context.ant, context.suc), R.Hyp)
        cut = Derivation(context, R.Cut, Instantiation(cut_formula=eq, split=((), ())), (eq2r, hyp))
        return cut
    if rule == "Eq2Minus":
        if inst.atomic_schema is None:
            raise RuleError("BadInstantiation", "Eq2Minus needs the atomic schema")
        schema, X = inst.atomic_schema
        if not is_atomic(schema):
            raise RuleError("NotAtomic", f"{_pstr(schema)} is not atomic")
        if not (isinstance(schema, RelApp) and schema.rel == X):
            raise RuleError("BadInstantiation", "only schemas of the form X(t1,...,tn) are supported")
        if len(inst.witnesses) != 2:
            raise RuleError("BadInstantiation", "Eq2Minus needs witnesses B, C")
        B, C = inst.witnesses
        _rel_witness_arity((B, C), X.arity)
        ts = schema.args
        if any(t.kind.variable for t in ts):
            raise RuleError("BadInstantiation", "schema arguments must be parameters or constants")
        eq = RelEq(B, C)
        aB = _sub(schema, X, B)
        aC = _sub(schema, X, C)
        rest = _remove(context.ant, eq)
        rest = None if rest is None else _remove(rest, aB)
        if rest is None:
            raise RuleError("BadInstantiation", "context lacks B = C or the schema instance at B")
        ax_b = Derivation(Sequent((aB,), (aB,)), R.AX)
        wr = Derivation(Sequent((aB,), (aB, aC)), R.WR, Instantiation(principal=_principal(Sequent((aB,), (aB, aC)), "suc", aC, 1 if alpha_eq(aB, aC) else 0)), (ax_b,))
        ax_c = Derivation(Sequent((aC,), (aC,)), R.AX)
        wl_s = Sequent((aC, aB), (aC,))
        wl = Derivation(wl_s, R.WL, Instantiation(principal=_principal(wl_s, "ant", aB, 1 if alpha_eq(aB, aC) else 0)), (ax_c,))
        mid = Sequent((eq, aB), (aC,))
        eq2l = Derivation(mid, R.Eq2L, Instantiation(principal=_principal(mid, "ant", eq), witnesses=ts), (wr, wl))
        hyp = Derivation(Sequent((aC,) + rest, context.suc), R.Hyp)
        left_idx = tuple(sorted(i for i, pos in enumerate(canonical_order(context.ant)) if pos in _positions(context.ant, (eq, aB))))
        cut = Derivation(context, R.Cut, Instantiation(cut_formula=aC, split=(left_idx, ())), (eq2l, hyp))
        return cut
    raise RuleError("BadInstantiation", f"unknown derived rule {rule!r}")


def _positions(items: tuple, wanted) -> set[int]:
    """Positions of one alpha-copy of each wanted formula (distinct positions)."""
    used: set[int] = set()
    for w in wanted:
        k = alpha_key(w)
        for i, f in enumerate(items):
            if i not in used and alpha_key(f) == k:
                used.add(i)
                break
    return used


def derived_premise(rule: str, context: Sequent, inst: Instantiation) -> Sequent:
    """The single open premise of a derived-rule instance."""
    leaf = [n for _, n in expand_derived(rule, context, inst).nodes() if n.rule is RuleId.Hyp]
    return leaf[0].conclusion


# ---------------------------------------------------------------------------
# renaming


def _derivation_symbols(d: Derivation) -> set:
    out: set = set()
    for _, n in d.nodes():
        out |= n.conclusion.free_symbols()
        i = n.inst
        out.update(i.eigen)
        out.update(i.witnesses)
        if i.cut_formula is not None:
            out |= free_symbols(i.cut_formula)
        if i.atomic_schema is not None:
            out |= free_symbols(i.atomic_schema[0])
    return out


def _reindex(old_side: tuple, new_side: tuple, idx: int) -> int:
    pos = canonical_order(old_side)[idx]
    return canonical_order(new_side).index(pos)


def rename_parameter(d: Derivation, frm: Sym, to: Sym, assumptions=()) -> Derivation:
    """Replace the parameter ``frm`` by the globally fresh ``to`` throughout ``d``."""
    if frm.kind not in (Kind.IND_PAR, Kind.REL_PAR):
        raise RuleError("BadInstantiation", f"{frm.name} is not a parameter")
    if to.kind is not frm.kind or to.arity != frm.arity:
        raise RuleError("BadInstantiation", f"{to!r} is not a parameter of the same kind and arity as {frm!r}")
    used = _derivation_symbols(d) | {s for a in assumptions for s in a.free_symbols()}
    if to in used:
        raise RuleError("BadInstantiation", f"{to.name} is not fresh for the derivation")
    m = {frm: to}

    def ren_sym(s: Sym) -> Sym:
        return to if s == frm else s

    def go(n: Derivation) -> Derivation:
        old = n.conclusion
        new = Sequent(tuple(replace_free(f, m) for f in old.ant), tuple(replace_free(f, m) for f in old.suc))
        i = n.inst
        principal = i.principal
        if principal is not None and 0 <= principal[1] < len(old.side(principal[0])):
            principal = (principal[0], _reindex(old.side(principal[0]), new.side(principal[0]), principal[1]))
        split = i.split
        if split is not None:
            try:
                split = (
                    tuple(sorted(_reindex(old.ant, new.ant, j) for j in split[0])),
                    tuple(sorted(_reindex(old.suc, new.suc, j) for j in split[1])),
                )
            except IndexError:
                pass
        schema = i.atomic_schema
        if schema is not None:
            schema = (replace_free(schema[0], m), schema[1])
        inst = Instantiation(
            principal=principal,
            eigen=tuple(ren_sym(e) for e in i.eigen),
            witnesses=tuple(ren_sym(w) for w in i.witnesses),
            cut_formula=None if i.cut_formula is None else replace_free(i.cut_formula, m),
            atomic_schema=schema,
            split=split,
        )
        return Derivation(new, n.rule, inst, tuple(go(p) for p in n.premises))

    return go(d)


def rename_sequent(s: Sequent, frm: Sym, to: Sym) -> Sequent:
    m = {frm: to}
    return Sequent(tuple(replace_free(f, m) for f in s.ant), tuple(replace_free(f, m) for f in s.suc))


def close_hypotheses(d: Derivation) -> Sequent:
    """End-sequent with each assumption leaf internalized as an antecedent implication.

    An assumption ``Π => Σ`` becomes ``∧Π -> ∨Σ`` in the antecedent, so the
    result is valid whenever the derivation is sound relative to its leaves.
    """
    extra = []
    for leaf in d.leaves():
        if leaf.rule is RuleId.Hyp:
            extra.append(internalize(leaf.conclusion))
    return Sequent(tuple(extra) + d.conclusion.ant, d.conclusion.suc)


def internalize(s: Sequent):
    """The formula ``∧ant -> ∨suc`` (an empty side is dropped)."""
    from functools import reduce

    conj = reduce(And, s.ant) if s.ant else None
    disj = reduce(Or, s.suc) if s.suc else None
    if conj is None and disj is None:
        raise RuleError("BadInstantiation", "the empty sequent has no formula form")
    if conj is None:
        return disj
    if disj is None:
        return Neg(conj)
    return Imp(conj, disj)


__all__ = [
    "CheckReport",
    "Derivation",
    "Instantiation",
    "PREMISE_COUNT",
    "REASONS",
    "RL2_RULES",
    "RL_RULES",
    "RuleId",
    "SECOND_ORDER_RULES",
    "Violation",
    "apply_rule",
    "canonical",
    "canonical_order",
    "check",
    "close_hypotheses",
    "derived_premise",
    "expand_derived",
    "fresh_params",
    "height",
    "index_of",
    "internalize",
    "rename_parameter",
    "rename_sequent",
    "rule_id",
    "size",
    "uses_cut",
]
