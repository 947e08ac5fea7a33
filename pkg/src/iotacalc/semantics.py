"""Finite models, Henkin general models, and the satisfaction relation.

The domain of a model of size ``n`` is ``range(n)``.  A relation is a frozenset
of tuples.  A general model carries, per arity, the family of relations that
second-order quantifiers and descriptions range over; an arity with no family
listed ranges over the full powerset, so a general model with no families at
all is a full (standard) model.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .errors import ArityMismatch, ResourceLimit, UninterpretedSymbol
from .syntax import (
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
    Sequent,
    Sym,
    all_symbols,
    free_symbols,
)

Relation = frozenset

# default cap on |D|^n when a full powerset has to be materialized
FULL_POWERSET_CAP = 12


@lru_cache(maxsize=None)
def tuples(size: int, arity: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.product(range(size), repeat=arity))


@lru_cache(maxsize=None)
def powerset(size: int, arity: int, cap: int = FULL_POWERSET_CAP) -> tuple[Relation, ...]:
    """All relations of the given arity, in canonical order (see :func:`rel_key`)."""
    ts = tuples(size, arity)
    if len(ts) > cap:
        raise ResourceLimit(f"powerset of D^{arity} with |D|={size} exceeds the cap of 2^{cap}")
    out = [frozenset(c) for r in range(len(ts) + 1) for c in itertools.combinations(ts, r)]
    return tuple(sorted(out, key=rel_key))


def rel_key(r: Relation):
    """Lexicographic order on relations by their sorted tuple lists."""
    return (len(r), sorted(r))


def family_key(fam) -> tuple:
    return (len(fam), [rel_key(r) for r in fam])


@dataclass(frozen=True)
class Model:
    domain_size: int
    preds: dict = field(default_factory=dict)
    consts: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("a domain has at least one element")
        for p, rel in self.preds.items():
            for t in rel:
                if len(t) != p.arity or any(not 0 <= e < self.domain_size for e in t):
                    raise ValueError(f"bad tuple {t} in the interpretation of {p.name}")
        for k, e in self.consts.items():
            if not 0 <= e < self.domain_size:
                raise ValueError(f"constant {k.name} is interpreted outside the domain")

    @property
    def domain(self) -> range:
        return range(self.domain_size)


@dataclass(frozen=True)
class GeneralModel:
    base: Model
    families: dict = field(default_factory=dict)
    relconsts: dict = field(default_factory=dict)
    cap: int = FULL_POWERSET_CAP

    def __post_init__(self):
        size = self.base.domain_size
        for n, fam in self.families.items():
            if not fam:
                raise ValueError(f"the family of arity {n} is empty")
            for rel in fam:
                if any(len(t) != n or any(not 0 <= e < size for e in t) for t in rel):
                    raise ValueError(f"family {n} holds a relation that is not {n}-ary over the domain")
        for k, rel in self.relconsts.items():
            if rel not in self.family(k.arity):
                raise ValueError(f"relational constant {k.name} is not interpreted inside its family")

    @property
    def domain_size(self) -> int:
        return self.base.domain_size

    def family(self, n: int) -> tuple[Relation, ...]:
        fam = self.families.get(n)
        if fam is None:
            return powerset(self.base.domain_size, n, self.cap)
        return tuple(fam)

    def is_full(self, n: int) -> bool:
        return n not in self.families or set(self.families[n]) == set(powerset(self.domain_size, n))


def full_model(m: Model, relconsts: dict | None = None, cap: int = FULL_POWERSET_CAP) -> GeneralModel:
    return GeneralModel(m, {}, dict(relconsts or {}), cap)


@dataclass(frozen=True)
class Assignment:
    ind: dict = field(default_factory=dict)
    rel: dict = field(default_factory=dict)

    def with_ind(self, s: Sym, o: int) -> "Assignment":
        return Assignment({**self.ind, s: o}, self.rel)

    def with_rel(self, s: Sym, o: Relation) -> "Assignment":
        return Assignment(self.ind, {**self.rel, s: o})


# ---------------------------------------------------------------------------
# satisfaction


def _term(gm: GeneralModel, ind: dict, t: Sym) -> int:
    if t.kind is Kind.IND_CONST:
        try:
            return gm.base.consts[t]
        except KeyError:
            raise UninterpretedSymbol(f"constant {t.name}") from None
    try:
        return ind[t]
    except KeyError:
        raise UninterpretedSymbol(f"{t.name} has no value under the assignment") from None


def _rel(gm: GeneralModel, rel: dict, r: Sym) -> Relation:
    if r.kind is Kind.REL_CONST:
        try:
            return gm.relconsts[r]
        except KeyError:
            raise UninterpretedSymbol(f"relational constant {r.name}") from None
    if r.kind is Kind.PRED:
        try:
            return gm.base.preds[r]
        except KeyError:
            raise UninterpretedSymbol(f"predicate {r.name}") from None
    try:
        return rel[r]
    except KeyError:
        raise UninterpretedSymbol(f"{r.name} has no value under the assignment") from None


def _args(gm, ind, r: Sym, args) -> tuple:
    if len(args) != r.arity:
        raise ArityMismatch(f"{r.name} has arity {r.arity} but is applied to {len(args)} terms")
    return tuple(_term(gm, ind, t) for t in args)


def _ev(gm: GeneralModel, ind: dict, rel: dict, f) -> bool:
    match f:
        case PredAtom(p, args) | RelApp(p, args):
            return _args(gm, ind, p, args) in _rel(gm, rel, p)
        case IndEq(l, r):
            return _term(gm, ind, l) == _term(gm, ind, r)
        case RelEq(l, r):
            if l.arity != r.arity:
                raise ArityMismatch(f"{l.name} = {r.name} compares different arities")
            return _rel(gm, rel, l) == _rel(gm, rel, r)
        case Neg(body):
            return not _ev(gm, ind, rel, body)
        case And(l, r):
            return _ev(gm, ind, rel, l) and _ev(gm, ind, rel, r)
        case Or(l, r):
            return _ev(gm, ind, rel, l) or _ev(gm, ind, rel, r)
        case Imp(l, r):
            return (not _ev(gm, ind, rel, l)) or _ev(gm, ind, rel, r)
        case Iff(l, r):
            return _ev(gm, ind, rel, l) == _ev(gm, ind, rel, r)
        case Forall(x, body):
            return all(_ev(gm, {**ind, x: o}, rel, body) for o in gm.base.domain)
        case Exists(x, body):
            return any(_ev(gm, {**ind, x: o}, rel, body) for o in gm.base.domain)
        case Forall2(X, body):
            return all(_ev(gm, ind, {**rel, X: o}, body) for o in gm.family(X.arity))
        case Exists2(X, body):
            return any(_ev(gm, ind, {**rel, X: o}, body) for o in gm.family(X.arity))
        case LamAtom1(x, body, arg) if isinstance(arg, Sym):
            return _ev(gm, {**ind, x: _term(gm, ind, arg)}, rel, body)
        case LamAtom1(x, body, arg):
            y, cond = arg.var, arg.cond
            sat = [o for o in gm.base.domain if _ev(gm, {**ind, y: o}, rel, cond)]
            return len(sat) == 1 and _ev(gm, {**ind, x: sat[0]}, rel, body)
        case LamAtom2(X, body, arg):
            Y, cond = arg.var, arg.cond
            if X.arity != Y.arity:
                raise ArityMismatch(f"abstract over {X!r} applied to description of {Y!r}")
            sat = [o for o in gm.family(Y.arity) if _ev(gm, ind, {**rel, Y: o}, cond)]
            return len(sat) == 1 and _ev(gm, ind, {**rel, X: sat[0]}, body)
        case _:
            raise TypeError(f"not a formula: {f!r}")


def eval(gm: GeneralModel, v: Assignment, f) -> bool:  # noqa: A001 - mirrors the satisfaction relation
    """Truth of ``f`` in the general model ``gm`` under ``v``."""
    return _ev(gm, v.ind, v.rel, f)


def eval_full(m: Model, v: Assignment, f, relconsts: dict | None = None, cap: int = FULL_POWERSET_CAP) -> bool:
    """Truth of ``f`` under the standard semantics: relations range over full powersets."""
    for n in {s.arity for s in all_symbols(f) if s.kind is not Kind.PRED and s.kind.relational}:
        if m.domain_size**n > cap:
            raise ResourceLimit(f"|D|^{n} = {m.domain_size ** n} exceeds the enumeration cap {cap}")
    return eval(full_model(m, relconsts, cap), v, f)


def holds_sequent(gm: GeneralModel, v: Assignment, s: Sequent) -> bool:
    return any(not eval(gm, v, f) for f in s.ant) or any(eval(gm, v, f) for f in s.suc)


# ---------------------------------------------------------------------------
# enumeration of models


@dataclass(frozen=True)
class Signature:
    """The symbols a query needs interpreted, in canonical order."""

    preds: tuple[Sym, ...] = ()
    consts: tuple[Sym, ...] = ()
    relconsts: tuple[Sym, ...] = ()
    ind: tuple[Sym, ...] = ()
    rel: tuple[Sym, ...] = ()
    arities: tuple[int, ...] = ()

    @classmethod
    def of(cls, *items) -> "Signature":
        free: set[Sym] = set()
        every: set[Sym] = set()
        for it in items:
            fs = it.formulas() if isinstance(it, Sequent) else (it,)
            for f in fs:
                free |= free_symbols(f)
                every |= all_symbols(f)
        pick = lambda *kinds: tuple(sorted((s for s in free if s.kind in kinds), key=Sym.sort_key))  # noqa: E731
        arities = {s.arity for s in every if s.kind in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST)}
        return cls(
            preds=pick(Kind.PRED),
            consts=pick(Kind.IND_CONST),
            relconsts=pick(Kind.REL_CONST),
            ind=pick(Kind.IND_VAR, Kind.IND_PAR),
            rel=pick(Kind.REL_VAR, Kind.REL_PAR),
            arities=tuple(sorted(arities)),
        )


FAMILY_MODES = ("full", "all", "sampled", "auto")


@dataclass(frozen=True)
class SearchBounds:
    max_domain: int = 2
    min_domain: int = 1
    max_arity: int = 2
    families: str = "auto"
    seed: int = 0
    count: int = 8
    max_models: int = 2_000_000
    cap: int = FULL_POWERSET_CAP

    def __post_init__(self):
        if self.families not in FAMILY_MODES:
            raise ValueError(f"family mode must be one of {', '.join(FAMILY_MODES)}")
        if not 1 <= self.min_domain <= self.max_domain:
            raise ValueError("need 1 <= min_domain <= max_domain")


def _nonempty_subfamilies(rels: tuple) -> list[tuple]:
    fams = [c for r in range(1, len(rels) + 1) for c in itertools.combinations(rels, r)]
    return sorted(fams, key=family_key)


def family_choices(size: int, arity: int, mode: str, seed: int = 0, count: int = 8, cap: int = FULL_POWERSET_CAP) -> list:
    """Candidate families for one arity; ``None`` stands for the full powerset."""
    cells = size**arity
    if mode == "auto":
        mode = "all" if cells <= 2 else "full" if cells <= 4 else "sampled"
    if mode == "full":
        return [None]
    rels = powerset(size, arity, cap)
    if mode == "all":
        if len(rels) > 4:
            raise ResourceLimit(f"all subfamilies of {len(rels)} relations is too many to enumerate")
        return _nonempty_subfamilies(rels)
    # sampled: the full powerset first, then random nonempty subfamilies
    rng = random.Random(f"{seed}:{size}:{arity}")
    out: list = [None]
    seen = set()
    for _ in range(count * 4):
        if len(out) > count:
            break
        fam = tuple(sorted({rels[rng.randrange(len(rels))] for _ in range(rng.randint(1, len(rels)))}, key=rel_key))
        if fam not in seen:
            seen.add(fam)
            out.append(fam)
    return out


def count_models(sig: Signature, size: int, bounds: SearchBounds) -> int:
    """Exact number of (model, assignment) pairs enumerated at one domain size."""
    base = 1
    for p in sig.preds:
        base *= 2 ** (size**p.arity)
    base *= size ** (len(sig.consts) + len(sig.ind))
    per_arity = [family_choices(size, n, bounds.families, bounds.seed, bounds.count, bounds.cap) for n in sig.arities]
    total = 0
    for fams in itertools.product(*per_arity):
        sizes = {n: len(powerset(size, n, bounds.cap)) if fam is None else len(fam) for n, fam in zip(sig.arities, fams)}
        combos = 1
        for r in (*sig.relconsts, *sig.rel):
            combos *= sizes[r.arity]
        total += combos
    return base * total


def enumerate_models(sig: Signature, bounds: SearchBounds = SearchBounds()) -> Iterator[tuple[GeneralModel, Assignment]]:
    """Every (general model, assignment) pair within bounds, in canonical order.

    Order: domain size ascending; then families (arity ascending, each in
    family order); then predicate interpretations, constants, relational
    constants, individual values, relational values.
    """
    for s in (*sig.relconsts, *sig.rel, *sig.preds):
        if s.arity > bounds.max_arity:
            raise ResourceLimit(f"{s.name} has arity {s.arity}, above the bound {bounds.max_arity}")
    for n in sig.arities:
        if n > bounds.max_arity:
            raise ResourceLimit(f"arity {n} is above the bound {bounds.max_arity}")
    for size in range(bounds.min_domain, bounds.max_domain + 1):
        if count_models(sig, size, bounds) > bounds.max_models:
            raise ResourceLimit(f"more than {bounds.max_models} candidate models at |D| = {size}")
        per_arity = [family_choices(size, n, bounds.families, bounds.seed, bounds.count, bounds.cap) for n in sig.arities]
        pred_spaces = [powerset(size, p.arity, bounds.cap) for p in sig.preds]
        dom = range(size)
        for fams in itertools.product(*per_arity):
            families = {n: fam for n, fam in zip(sig.arities, fams) if fam is not None}

            def fam_of(n, families=families):
                return families.get(n) or powerset(size, n, bounds.cap)

            for pvals in itertools.product(*pred_spaces):
                for cvals in itertools.product(dom, repeat=len(sig.consts)):
                    m = Model(size, dict(zip(sig.preds, pvals)), dict(zip(sig.consts, cvals)))
                    for kvals in itertools.product(*(fam_of(k.arity) for k in sig.relconsts)):
                        gm = GeneralModel(m, families, dict(zip(sig.relconsts, kvals)), bounds.cap)
                        for ivals in itertools.product(dom, repeat=len(sig.ind)):
                            ind = dict(zip(sig.ind, ivals))
                            for rvals in itertools.product(*(fam_of(r.arity) for r in sig.rel)):
                                yield gm, Assignment(ind, dict(zip(sig.rel, rvals)))


def find_countermodel(s: Sequent, bounds: SearchBounds = SearchBounds()):
    """First (general model, assignment) falsifying ``s`` in enumeration order, or None."""
    for gm, v in enumerate_models(Signature.of(s), bounds):
        if not holds_sequent(gm, v, s):
            # re-check from scratch so that enumeration bugs cannot leak out
            fresh = GeneralModel(Model(gm.base.domain_size, dict(gm.base.preds), dict(gm.base.consts)), dict(gm.families), dict(gm.relconsts), gm.cap)
            if holds_sequent(fresh, v, s):
                raise RuntimeError("countermodel failed its own verification")
            return gm, v
    return None


def is_valid(s: Sequent, bounds: SearchBounds = SearchBounds()) -> bool:
    """Validity within bounds: no countermodel in the enumerated space."""
    return find_countermodel(s, bounds) is None
