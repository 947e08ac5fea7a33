"""Abstract syntax for the first- and second-order description languages.

Formulas are immutable trees.  Individual terms are plain :class:`Sym` values
(variables, parameters, constants); relational symbols are ``Sym`` values with
an arity.  Definite descriptions (:class:`Iota1`, :class:`Iota2`) only ever
occur as the argument of a lambda atom, so they are not terms.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ArityMismatch, CaptureError


class Kind(enum.Enum):
    IND_VAR = "IndVar"
    IND_PAR = "IndPar"
    IND_CONST = "IndConst"
    REL_VAR = "RelVar"
    REL_PAR = "RelPar"
    REL_CONST = "RelConst"
    PRED = "PredSym"

    @property
    def individual(self) -> bool:
        return self in (Kind.IND_VAR, Kind.IND_PAR, Kind.IND_CONST)

    @property
    def relational(self) -> bool:
        return not self.individual

    @property
    def variable(self) -> bool:
        return self in (Kind.IND_VAR, Kind.REL_VAR)


_KIND_ORDER = {k: i for i, k in enumerate(Kind)}

# lexical namespaces: first letter decides the kind, optional digits index it
_NAMESPACES = [
    (re.compile(r"[xyzuw](\d*)"), Kind.IND_VAR),
    (re.compile(r"[abcd](\d*)"), Kind.IND_PAR),
    (re.compile(r"k(\d*)"), Kind.IND_CONST),
    (re.compile(r"[XYZ](\d*)"), Kind.REL_VAR),
    (re.compile(r"[ABC](\d*)"), Kind.REL_PAR),
    (re.compile(r"K(\d*)"), Kind.REL_CONST),
    (re.compile(r"[PQRS](\d*)"), Kind.PRED),
]


def classify(name: str) -> Kind | None:
    """Namespace of an identifier, or None if it belongs to no namespace."""
    for pattern, kind in _NAMESPACES:
        if pattern.fullmatch(name):
            return kind
    return None


@dataclass(frozen=True)
class Sym:
    kind: Kind
    base: str
    index: int | None = None
    arity: int = 0

    @property
    def name(self) -> str:
        return self.base if self.index is None else f"{self.base}{self.index}"

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        if self.kind.relational:
            return f"{self.name}/{self.arity}"
        return self.name

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.kind.value, self.base, self.index, self.arity))
            object.__setattr__(self, "_hash", h)
        return h

    def sort_key(self):
        return (_KIND_ORDER[self.kind], self.base, -1 if self.index is None else self.index, self.arity)

    def with_arity(self, arity: int) -> "Sym":
        return Sym(self.kind, self.base, self.index, arity)


def sym(name: str, arity: int = 0) -> Sym:
    """Build a symbol from its surface name, e.g. ``sym("a1")`` or ``sym("B", 2)``."""
    kind = classify(name)
    if kind is None:
        raise ValueError(f"{name!r} is not in any symbol namespace")
    digits = name[1:]
    index = int(digits) if digits else None
    if kind.relational:
        if arity < 1:
            arity = 1
    else:
        arity = 0
    return Sym(kind, name[0], index, arity)


def syms(names: str, arity: int = 0) -> list[Sym]:
    return [sym(n, arity) for n in names.split()]


class Node:
    """Structural equality with a cached hash; subclasses are frozen dataclasses."""

    __slots__ = ()

    def _fields(self) -> tuple:
        return tuple(getattr(self, n) for n in self.__dataclass_fields__)

    def __eq__(self, other):
        if self is other:
            return True
        return type(self) is type(other) and self._fields() == other._fields()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        d = self.__dict__
        h = d.get("_hash")
        if h is None:
            h = hash((type(self).__name__, *self._fields()))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self):
        from .parser import print_formula

        return print_formula(self)


class Formula(Node):
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class PredAtom(Formula):
    pred: Sym
    args: tuple[Sym, ...]


@dataclass(frozen=True, eq=False)
class IndEq(Formula):
    left: Sym
    right: Sym


@dataclass(frozen=True, eq=False)
class RelApp(Formula):
    rel: Sym
    args: tuple[Sym, ...]


@dataclass(frozen=True, eq=False)
class RelEq(Formula):
    left: Sym
    right: Sym


@dataclass(frozen=True, eq=False)
class Neg(Formula):
    body: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Forall(Formula):
    var: Sym
    body: Formula


@dataclass(frozen=True, eq=False)
class Exists(Formula):
    var: Sym
    body: Formula


@dataclass(frozen=True, eq=False)
class Forall2(Formula):
    var: Sym
    body: Formula


@dataclass(frozen=True, eq=False)
class Exists2(Formula):
    var: Sym
    body: Formula


@dataclass(frozen=True, eq=False)
class Iota1(Node):
    var: Sym
    cond: Formula


@dataclass(frozen=True, eq=False)
class Iota2(Node):
    var: Sym
    cond: Formula


@dataclass(frozen=True, eq=False)
class LamAtom1(Formula):
    var: Sym
    body: Formula
    arg: Union[Sym, Iota1]


@dataclass(frozen=True, eq=False)
class LamAtom2(Formula):
    var: Sym
    body: Formula
    arg: Iota2


ATOMIC = (PredAtom, IndEq, RelApp, RelEq)
BINARY = (And, Or, Imp, Iff)
QUANTIFIERS = (Forall, Exists, Forall2, Exists2)
SECOND_ORDER_NODES = (RelApp, RelEq, Forall2, Exists2, LamAtom2)


def is_atomic(f: Formula) -> bool:
    return isinstance(f, ATOMIC)


# ---------------------------------------------------------------------------
# traversal


def subformulas(f) -> Iterator:
    """Pre-order walk over every node (formulas and descriptions)."""
    yield f
    match f:
        case Neg(body):
            yield from subformulas(body)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            yield from subformulas(l)
            yield from subformulas(r)
        case Forall(_, body) | Exists(_, body) | Forall2(_, body) | Exists2(_, body):
            yield from subformulas(body)
        case LamAtom1(_, body, arg) | LamAtom2(_, body, arg):
            yield from subformulas(body)
            if isinstance(arg, Node):
                yield from subformulas(arg)
        case Iota1(_, cond) | Iota2(_, cond):
            yield from subformulas(cond)


def all_symbols(f) -> set[Sym]:
    """Every symbol occurrence, bound or free, binders included."""
    out: set[Sym] = set()
    for g in subformulas(f):
        match g:
            case PredAtom(p, args):
                out.add(p)
                out.update(args)
            case RelApp(r, args):
                out.add(r)
                out.update(args)
            case IndEq(l, r) | RelEq(l, r):
                out.add(l)
                out.add(r)
            case Forall(v, _) | Exists(v, _) | Forall2(v, _) | Exists2(v, _) | Iota1(v, _) | Iota2(v, _):
                out.add(v)
            case LamAtom1(v, _, arg):
                out.add(v)
                if isinstance(arg, Sym):
                    out.add(arg)
            case LamAtom2(v, _, _):
                out.add(v)
    return out


def is_second_order(f) -> bool:
    return any(isinstance(g, SECOND_ORDER_NODES) for g in subformulas(f)) or any(
        s.kind in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST) for s in all_symbols(f)
    )


def free_symbols(f) -> set[Sym]:
    """Parameters, constants, predicate symbols and free variables of ``f``."""
    if not isinstance(f, Node):
        out: set[Sym] = set()
        _free(f, frozenset(), out)
        return out
    cached = f.__dict__.get("_free")
    if cached is None:
        out = set()
        _free(f, frozenset(), out)
        cached = frozenset(out)
        object.__setattr__(f, "_free", cached)
    return set(cached)


def _add(s: Sym, bound, out):
    if not (s.kind.variable and s in bound):
        out.add(s)


def _free(f, bound, out):
    match f:
        case PredAtom(p, args) | RelApp(p, args):
            _add(p, bound, out)
            for a in args:
                _add(a, bound, out)
        case IndEq(l, r) | RelEq(l, r):
            _add(l, bound, out)
            _add(r, bound, out)
        case Neg(body):
            _free(body, bound, out)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            _free(l, bound, out)
            _free(r, bound, out)
        case Forall(v, body) | Exists(v, body) | Forall2(v, body) | Exists2(v, body):
            _free(body, bound | {v}, out)
        case LamAtom1(v, body, arg) | LamAtom2(v, body, arg):
            _free(body, bound | {v}, out)
            if isinstance(arg, Sym):
                _add(arg, bound, out)
            else:
                _free(arg.cond, bound | {arg.var}, out)
        case _:
            raise TypeError(f"not a formula: {f!r}")


def free_in(s: Sym, f) -> bool:
    return s in free_symbols(f)


def relational_arities(f) -> set[int]:
    """Arities of all relational variables, parameters and constants (bound ones too)."""
    return {s.arity for s in all_symbols(f) if s.kind in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST)}


# ---------------------------------------------------------------------------
# substitution


def _footnote_expansion(left: Sym, right: Sym) -> Formula:
    n = left.arity
    xs = tuple(Sym(Kind.IND_VAR, "x", i) for i in range(1, n + 1))

    def atom(s: Sym) -> Formula:
        return PredAtom(s, xs) if s.kind is Kind.PRED else RelApp(s, xs)

    body: Formula = Iff(atom(left), atom(right))
    for x in reversed(xs):
        body = Forall(x, body)
    return body


def replace_free(f, mapping: dict[Sym, Sym]):
    """Simultaneously replace free occurrences of symbols per ``mapping``.

    Raises CaptureError when a variable in the image would become bound.
    Relational images that are predicate symbols turn ``RelApp`` into
    ``PredAtom``; a ``RelEq`` with a predicate side is expanded into its
    universally quantified biconditional.
    """
    if not mapping:
        return f
    return _repl(f, mapping, frozenset())


def _image(s: Sym, mapping, bound) -> Sym:
    t = mapping.get(s)
    if t is None or t == s:
        return s
    if t.kind.variable and t in bound:
        raise CaptureError(f"{t} is not free for {s}: it would be captured")
    return t


def _repl(f, mapping, bound):
    if not mapping:
        return f
    match f:
        case PredAtom(p, args):
            return PredAtom(_image(p, mapping, bound), tuple(_image(a, mapping, bound) for a in args))
        case RelApp(r, args):
            r2 = _image(r, mapping, bound)
            args2 = tuple(_image(a, mapping, bound) for a in args)
            if r2.kind is Kind.PRED:
                return PredAtom(r2, args2)
            return RelApp(r2, args2)
        case IndEq(l, r):
            return IndEq(_image(l, mapping, bound), _image(r, mapping, bound))
        case RelEq(l, r):
            l2, r2 = _image(l, mapping, bound), _image(r, mapping, bound)
            if l2.kind is Kind.PRED or r2.kind is Kind.PRED:
                return _footnote_expansion(l2, r2)
            return RelEq(l2, r2)
        case Neg(body):
            return Neg(_repl(body, mapping, bound))
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            return type(f)(_repl(l, mapping, bound), _repl(r, mapping, bound))
        case Forall(v, body) | Exists(v, body) | Forall2(v, body) | Exists2(v, body):
            inner = {k: w for k, w in mapping.items() if k != v}
            return type(f)(v, _repl(body, inner, bound | {v}))
        case LamAtom1(v, body, arg) | LamAtom2(v, body, arg):
            inner = {k: w for k, w in mapping.items() if k != v}
            body2 = _repl(body, inner, bound | {v})
            if isinstance(arg, Sym):
                arg2 = _image(arg, mapping, bound)
            else:
                y = arg.var
                inner_y = {k: w for k, w in mapping.items() if k != y}
                arg2 = type(arg)(y, _repl(arg.cond, inner_y, bound | {y}))
            return type(f)(v, body2, arg2)
        case _:
            raise TypeError(f"not a formula: {f!r}")


def _check_ind_target(x: Sym, t: Sym):
    if x.kind is not Kind.IND_VAR:
        raise TypeError(f"{x} is not an individual variable")
    if not t.kind.individual:
        raise TypeError(f"{t} is not a term")


def subst_ind(f, x: Sym, t: Sym):
    """``f`` with every free occurrence of the individual variable ``x`` replaced by ``t``."""
    _check_ind_target(x, t)
    return replace_free(f, {x: t})


def subst_ind_multi(f, xs, ts):
    """Simultaneous substitution of terms ``ts`` for the variables ``xs``."""
    xs, ts = list(xs), list(ts)
    if len(xs) != len(ts):
        raise ArityMismatch(f"{len(xs)} variables but {len(ts)} terms")
    if len(set(xs)) != len(xs):
        raise ValueError("substituted variables must be pairwise distinct")
    for x, t in zip(xs, ts):
        _check_ind_target(x, t)
    return replace_free(f, dict(zip(xs, ts)))


def subst_rel(f, X: Sym, R: Sym):
    """``f`` with free occurrences of the relational variable ``X`` replaced by ``R``."""
    if not X.kind.relational or not R.kind.relational:
        raise TypeError("relational substitution needs relational symbols")
    if X.arity != R.arity:
        raise ArityMismatch(f"{X!r} and {R!r} differ in arity")
    return replace_free(f, {X: R})


def subst(f, x: Sym, t: Sym):
    """Substitute for an individual or relational variable, whichever ``x`` is."""
    if x.kind.individual:
        return subst_ind(f, x, t)
    return subst_rel(f, x, t)


# ---------------------------------------------------------------------------
# alpha-equivalence


def alpha_key(f):
    """Canonical hashable form: bound variables become binder levels."""
    d = f.__dict__
    k = d.get("_akey")
    if k is None:
        k = _key(f, {}, 0)
        object.__setattr__(f, "_akey", k)
    return k


def _tk(s: Sym, env):
    lvl = env.get(s)
    return s if lvl is None else lvl


def _key(f, env, depth):
    match f:
        case PredAtom(p, args):
            return ("P", p, tuple(_tk(a, env) for a in args))
        case RelApp(r, args):
            return ("R", _tk(r, env), tuple(_tk(a, env) for a in args))
        case IndEq(l, r):
            return ("=", _tk(l, env), _tk(r, env))
        case RelEq(l, r):
            return ("=2", _tk(l, env), _tk(r, env))
        case Neg(body):
            return ("!", _key(body, env, depth))
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            return (type(f).__name__, _key(l, env, depth), _key(r, env, depth))
        case Forall(v, body) | Exists(v, body) | Forall2(v, body) | Exists2(v, body):
            # binder arity is part of the key: X/1 and X/2 bind different things
            return (type(f).__name__, v.arity, _key(body, {**env, v: depth}, depth + 1))
        case LamAtom1(v, body, arg) | LamAtom2(v, body, arg):
            kb = _key(body, {**env, v: depth}, depth + 1)
            if isinstance(arg, Sym):
                ka = _tk(arg, env)
            else:
                ka = ("iota", arg.var.arity, _key(arg.cond, {**env, arg.var: depth}, depth + 1))
            return (type(f).__name__, v.arity, kb, ka)
        case _:
            raise TypeError(f"not a formula: {f!r}")


def alpha_eq(f, g) -> bool:
    return f is g or alpha_key(f) == alpha_key(g)


# ---------------------------------------------------------------------------
# well-formedness


def check_wff(f, arities: dict | None = None) -> None:
    """Raise ArityMismatch unless every symbol is used at one arity throughout ``f``."""
    seen: dict[tuple, int] = {} if arities is None else arities

    def note(s: Sym, n: int):
        if s.kind.relational:
            if n < 1:
                raise ArityMismatch(f"{s.name} has arity {n}")
            if s.arity != n:
                raise ArityMismatch(f"{s.name} declared with arity {s.arity} but applied to {n} terms")
            key = (s.kind, s.name)
            prev = seen.setdefault(key, n)
            if prev != n:
                raise ArityMismatch(f"{s.name} used with arities {prev} and {n}")

    def term(t):
        if not isinstance(t, Sym) or not t.kind.individual:
            raise TypeError(f"{t!r} is not a term")

    for g in subformulas(f):
        match g:
            case PredAtom(p, args):
                if p.kind is not Kind.PRED:
                    raise TypeError(f"{p} is not a predicate symbol")
                for a in args:
                    term(a)
                note(p, len(args))
            case RelApp(r, args):
                if r.kind not in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST):
                    raise TypeError(f"{r} cannot head a relational application")
                for a in args:
                    term(a)
                note(r, len(args))
            case IndEq(l, r):
                term(l)
                term(r)
            case RelEq(l, r):
                for s in (l, r):
                    if s.kind not in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST):
                        raise TypeError(f"{s} cannot stand in a relational identity")
                if l.arity != r.arity:
                    raise ArityMismatch(f"{l!r} = {r!r} compares different arities")
                note(l, l.arity)
                note(r, r.arity)
            case Forall(v, _) | Exists(v, _) | Iota1(v, _):
                if v.kind is not Kind.IND_VAR:
                    raise TypeError(f"{v} cannot be bound here")
            case Forall2(v, _) | Exists2(v, _) | Iota2(v, _):
                if v.kind is not Kind.REL_VAR:
                    raise TypeError(f"{v} cannot be bound here")
                note(v, v.arity)
            case LamAtom1(v, _, arg):
                if v.kind is not Kind.IND_VAR:
                    raise TypeError(f"{v} cannot be bound here")
                if isinstance(arg, Sym):
                    term(arg)
                elif not isinstance(arg, Iota1):
                    raise TypeError("a predicate abstract applies to a term or quasi-term")
            case LamAtom2(v, _, arg):
                if v.kind is not Kind.REL_VAR or not isinstance(arg, Iota2):
                    raise TypeError("a relational abstract applies only to a pseudo-term")
                if v.arity != arg.var.arity:
                    raise ArityMismatch(f"abstract over {v!r} applied to description of {arg.var!r}")
                note(v, v.arity)


# ---------------------------------------------------------------------------
# sequents


@dataclass(frozen=True)
class Sequent:
    """``ant => suc`` over finite multisets; tuple order is presentation only."""

    ant: tuple = ()
    suc: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ant", tuple(self.ant))
        object.__setattr__(self, "suc", tuple(self.suc))

    def __str__(self):
        from .parser import print_sequent

        return print_sequent(self)

    def side(self, name: str) -> tuple:
        if name == "ant":
            return self.ant
        if name == "suc":
            return self.suc
        raise ValueError(f"unknown side {name!r}")

    def formulas(self) -> tuple:
        return self.ant + self.suc

    def counts(self) -> tuple[Counter, Counter]:
        return Counter(alpha_key(f) for f in self.ant), Counter(alpha_key(f) for f in self.suc)

    def support(self) -> tuple[frozenset, frozenset]:
        return frozenset(alpha_key(f) for f in self.ant), frozenset(alpha_key(f) for f in self.suc)

    def same(self, other: "Sequent") -> bool:
        """Multiset equality up to alpha-equivalence."""
        return self.counts() == other.counts()

    def free_symbols(self) -> set[Sym]:
        out: set[Sym] = set()
        for f in self.formulas():
            out |= free_symbols(f)
        return out

    def is_second_order(self) -> bool:
        return any(is_second_order(f) for f in self.formulas())

    def map(self, fn) -> "Sequent":
        return Sequent(tuple(fn(f) for f in self.ant), tuple(fn(f) for f in self.suc))
