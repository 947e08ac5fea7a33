"""Concrete ASCII syntax: lexer, recursive-descent parser and printers.

Surface syntax::

    !φ   φ & ψ   φ | ψ   φ -> ψ   φ <-> ψ
    A x. φ   E x. φ   A2 X. φ   E2 X. φ
    P(a,b)   a = b   X(a)   X = Y
    (\\x φ) a   (\\x φ) (iota y. ψ)   (\\X φ) (iota Y. ψ)
    φ1, φ2 => ψ1, ψ2

``!`` binds tightest, then ``&``, ``|``, ``->`` (right associative) and
``<->``.  Quantifier bodies extend as far right as possible.  Relational
arities are inferred from applications anywhere in the same document; a
relational symbol that is never applied gets arity 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SourceSpan
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
    classify,
)

MAX_NESTING = 150

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<IFF><->|↔)
  | (?P<IMP>->|→)
  | (?P<SEQ>=>|⇒)
  | (?P<EQ>=)
  | (?P<NOT>!|¬)
  | (?P<AND>&|∧)
  | (?P<OR>\||∨)
  | (?P<LPAREN>\()
  | (?P<RPAREN>\))
  | (?P<COMMA>,)
  | (?P<DOT>\.)
  | (?P<LAMBDA>\\|λ)
  | (?P<UALL>∀)
  | (?P<UEX>∃)
  | (?P<IOTA>ι)
  | (?P<IDENT>[A-Za-z][A-Za-z0-9]*)
    """,
    re.VERBOSE,
)

_DESCRIBE = {
    "IFF": "'<->'",
    "IMP": "'->'",
    "SEQ": "'=>'",
    "EQ": "'='",
    "NOT": "'!'",
    "AND": "'&'",
    "OR": "'|'",
    "LPAREN": "'('",
    "RPAREN": "')'",
    "COMMA": "','",
    "DOT": "'.'",
    "LAMBDA": "'\\'",
    "EOF": "end of input",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int
    end: int

    def describe(self) -> str:
        if self.kind == "IDENT":
            return repr(self.text)
        return _DESCRIBE.get(self.kind, repr(self.text))


def _span(src: str, start: int, end: int) -> SourceSpan:
    prefix = src[:start]
    line = prefix.count("\n") + 1
    column = start - (prefix.rfind("\n") + 1) + 1
    b0 = len(prefix.encode("utf-8"))
    b1 = b0 + len(src[start:end].encode("utf-8"))
    return SourceSpan(b0, b1, line, column)


def _normalize(src: str) -> str:
    return src.replace("\r\n", "\n").replace("\r", "\n")


def tokenize(src: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(_span(src, pos, pos + 1), ["a token"], repr(src[pos]), "unexpected character")
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "IOTA":
                kind, text = "IDENT", "iota"
            out.append(Token(kind, text, pos, m.end()))
        pos = m.end()
    out.append(Token("EOF", "", n, n))
    return out


def _split_name(text: str) -> tuple[str, int | None]:
    digits = text[1:]
    return text[0], (int(digits) if digits else None)


class _Arities:
    """Per-document relational arity table with unification for ``X = Y``."""

    def __init__(self):
        self.known: dict[tuple, int] = {}
        self.where: dict[tuple, tuple[int, int]] = {}
        self.parent: dict[tuple, tuple] = {}

    def find(self, k):
        self.parent.setdefault(k, k)
        while self.parent[k] != k:
            self.parent[k] = self.parent[self.parent[k]]
            k = self.parent[k]
        return k

    def fix(self, k, n: int, span, src):
        r = self.find(k)
        prev = self.known.get(r)
        if prev is None:
            self.known[r] = n
            self.where[r] = span
        elif prev != n:
            raise ParseError(
                _span(src, *span),
                [f"{k[1]} applied to {prev} term(s)"],
                f"{k[1]} with {n} term(s)",
                "a symbol keeps one arity throughout a document",
            )

    def unify(self, a, b, span, src):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        na, nb = self.known.get(ra), self.known.get(rb)
        if na is not None and nb is not None and na != nb:
            raise ParseError(
                _span(src, *span),
                [f"symbols of equal arity ({a[1]} has {na})"],
                f"{b[1]} of arity {nb}",
                "both sides of a relational identity, and an abstract and its description, share an arity",
            )
        self.parent[rb] = ra
        if na is None and nb is not None:
            self.known[ra] = nb

    def arity(self, k) -> int:
        return self.known.get(self.find(k), 1)


def _resolve(x, table: _Arities):
    """Rewrite every relational symbol in ``x`` with its document arity."""

    def s(v: Sym) -> Sym:
        if v.kind.relational:
            n = table.arity((v.kind, v.name))
            return v if v.arity == n else v.with_arity(n)
        return v

    def go(f):
        match f:
            case PredAtom(p, args):
                return PredAtom(s(p), args)
            case RelApp(r, args):
                return RelApp(s(r), args)
            case IndEq():
                return f
            case RelEq(l, r):
                return RelEq(s(l), s(r))
            case Neg(b):
                return Neg(go(b))
            case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
                return type(f)(go(l), go(r))
            case Forall(v, b) | Exists(v, b) | Forall2(v, b) | Exists2(v, b):
                return type(f)(s(v), go(b))
            case LamAtom1(v, b, arg):
                return LamAtom1(v, go(b), arg if isinstance(arg, Sym) else Iota1(arg.var, go(arg.cond)))
            case LamAtom2(v, b, arg):
                return LamAtom2(s(v), go(b), Iota2(s(arg.var), go(arg.cond)))
        raise TypeError(f"cannot resolve {f!r}")

    return go(x)


class _Parser:
    def __init__(self, src: str, table: _Arities | None = None):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.depth = 0
        self.table = table if table is not None else _Arities()

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def error(self, expected, hint=None, tok=None):
        t = tok or self.tok
        raise ParseError(_span(self.src, t.start, t.end), expected, t.describe(), hint)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.error([_DESCRIBE.get(kind, kind)])
        return self.advance()

    def enter(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.error(["shallower nesting"], f"nesting deeper than {MAX_NESTING}")

    def leave(self):
        self.depth -= 1

    # -- symbols
    def ident(self, kinds, what: str) -> tuple[Sym, Token]:
        t = self.tok
        if t.kind != "IDENT":
            self.error([what])
        kind = classify(t.text)
        if kind not in kinds:
            hint = None
            if kind is None:
                hint = "names follow namespaces: x,y,z,u,w variables; a,b,c,d parameters; k constants; X,Y,Z / A,B,C / K relational; P,Q,R,S predicates"
            self.error([what], hint)
        self.advance()
        base, index = _split_name(t.text)
        return Sym(kind, base, index, 0), t

    def term(self) -> Sym:
        return self.ident((Kind.IND_VAR, Kind.IND_PAR, Kind.IND_CONST), "a term")[0]

    def terms(self) -> list[Sym]:
        self.expect("LPAREN")
        out = [self.term()]
        while self.tok.kind == "COMMA":
            self.advance()
            out.append(self.term())
        self.expect("RPAREN")
        return out

    def relvar(self) -> tuple[Sym, Token]:
        return self.ident((Kind.REL_VAR,), "a relational variable")

    def key(self, s: Sym):
        return (s.kind, s.name)

    # -- grammar
    def formula(self):
        self.enter()
        left = self.imp()
        while self.tok.kind == "IFF":
            self.advance()
            left = Iff(left, self.imp())
        self.leave()
        return left

    def imp(self):
        left = self.or_()
        if self.tok.kind == "IMP":
            self.advance()
            self.enter()
            right = self.imp()
            self.leave()
            return Imp(left, right)
        return left

    def or_(self):
        left = self.and_()
        while self.tok.kind == "OR":
            self.advance()
            left = Or(left, self.and_())
        return left

    def and_(self):
        left = self.unary()
        while self.tok.kind == "AND":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        t = self.tok
        if t.kind == "NOT":
            self.advance()
            self.enter()
            body = self.unary()
            self.leave()
            return Neg(body)
        if t.kind in ("UALL", "UEX"):
            return self.unicode_quant()
        if t.kind == "IDENT" and self.peek().kind == "IDENT":
            if t.text in ("A", "E"):
                return self.quant(first_order=True)
            if t.text in ("A2", "E2"):
                return self.quant(first_order=False)
        return self.atom()

    def quant(self, first_order: bool):
        q = self.advance().text
        if first_order:
            v = self.ident((Kind.IND_VAR,), "an individual variable")[0]
        else:
            v = self.relvar()[0]
        self.expect("DOT")
        body = self.formula()
        if first_order:
            return (Forall if q == "A" else Exists)(v, body)
        return (Forall2 if q == "A2" else Exists2)(v, body)

    def unicode_quant(self):
        universal = self.advance().kind == "UALL"
        v, _ = self.ident((Kind.IND_VAR, Kind.REL_VAR), "a variable")
        if self.tok.kind == "DOT":
            self.advance()
        body = self.formula()
        if v.kind is Kind.IND_VAR:
            return (Forall if universal else Exists)(v, body)
        return (Forall2 if universal else Exists2)(v, body)

    def atom(self):
        t = self.tok
        if t.kind == "LPAREN":
            if self.peek().kind == "LAMBDA":
                return self.lambda_atom()
            self.advance()
            f = self.formula()
            self.expect("RPAREN")
            return f
        if t.kind != "IDENT":
            self.error(["a formula"])
        kind = classify(t.text)
        if kind is None:
            self.error(["a formula"], f"{t.text!r} is not in any symbol namespace")
        if kind is Kind.PRED:
            p, _ = self.ident((Kind.PRED,), "a predicate")
            args = self.terms()
            self.table.fix(self.key(p), len(args), (t.start, t.end), self.src)
            return PredAtom(p.with_arity(len(args)), tuple(args))
        if kind in (Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST):
            r, _ = self.ident((kind,), "a relational symbol")
            if self.tok.kind == "LPAREN":
                args = self.terms()
                self.table.fix(self.key(r), len(args), (t.start, t.end), self.src)
                return RelApp(r.with_arity(len(args)), tuple(args))
            if self.tok.kind == "EQ":
                self.advance()
                r2, t2 = self.ident((Kind.REL_VAR, Kind.REL_PAR, Kind.REL_CONST), "a relational symbol")
                self.table.unify(self.key(r), self.key(r2), (t.start, t2.end), self.src)
                return RelEq(r, r2)
            self.error(["'('", "'='"], "relational symbols are not terms")
        left = self.term()
        self.expect("EQ")
        right = self.term()
        return IndEq(left, right)

    def lambda_atom(self):
        self.expect("LPAREN")
        self.expect("LAMBDA")
        v, vt = self.ident((Kind.IND_VAR, Kind.REL_VAR), "a variable")
        if self.tok.kind == "DOT":
            self.advance()
        body = self.formula()
        self.expect("RPAREN")
        if v.kind is Kind.IND_VAR:
            if self.tok.kind == "IDENT":
                return LamAtom1(v, body, self.term())
            y, cond, _ = self.description(Kind.IND_VAR)
            return LamAtom1(v, body, Iota1(y, cond))
        y, cond, yt = self.description(Kind.REL_VAR)
        self.table.unify(self.key(v), self.key(y), (vt.start, yt.end), self.src)
        return LamAtom2(v, body, Iota2(y, cond))

    def description(self, kind: Kind):
        self.expect("LPAREN")
        t = self.tok
        if not (t.kind == "IDENT" and t.text == "iota"):
            hint = "a relational abstract applies only to a description" if kind is Kind.REL_VAR else None
            self.error(["'iota'"], hint)
        self.advance()
        what = "an individual variable" if kind is Kind.IND_VAR else "a relational variable"
        y, yt = self.ident((kind,), what)
        self.expect("DOT")
        cond = self.formula()
        self.expect("RPAREN")
        return y, cond, yt

    def formula_list(self, stop) -> list:
        out = []
        if self.tok.kind in stop:
            return out
        out.append(self.formula())
        while self.tok.kind == "COMMA":
            self.advance()
            out.append(self.formula())
        return out

    def sequent(self) -> Sequent:
        ant = self.formula_list(("SEQ",))
        if self.tok.kind != "SEQ":
            self.error(["','", "'=>'"])
        self.advance()
        suc = self.formula_list(("EOF",))
        self.expect("EOF")
        return Sequent(tuple(ant), tuple(suc))


class Document:
    """Parses several formulas/sequents that share one arity table."""

    def __init__(self):
        self.table = _Arities()
        self._pending: list = []

    def formula(self, src: str):
        p = _Parser(_normalize(src), self.table)
        f = p.formula()
        p.expect("EOF")
        return f

    def sequent(self, src: str) -> Sequent:
        return _Parser(_normalize(src), self.table).sequent()

    def resolve(self, x):
        if isinstance(x, Sequent):
            return Sequent(tuple(_resolve(f, self.table) for f in x.ant), tuple(_resolve(f, self.table) for f in x.suc))
        return _resolve(x, self.table)

    def symbol(self, name: str) -> Sym:
        """Resolve a bare symbol name; relational arities come from the table (1 if unseen)."""
        kind = classify(name)
        if kind is None:
            raise ParseError(SourceSpan(0, len(name.encode()), 1, 1), ["a symbol name"], repr(name))
        base, index = _split_name(name)
        arity = self.table.arity((kind, name)) if kind.relational else 0
        return Sym(kind, base, index, arity)


def parse_formula(src: str):
    doc = Document()
    return doc.resolve(doc.formula(src))


def parse_sequent(src: str) -> Sequent:
    doc = Document()
    return doc.resolve(doc.sequent(src))


def parse_sequents(srcs) -> list[Sequent]:
    doc = Document()
    raw = [doc.sequent(s) for s in srcs]
    return [doc.resolve(s) for s in raw]


# ---------------------------------------------------------------------------
# printing


@dataclass(frozen=True)
class _Style:
    neg: str
    conn: dict
    quant: dict
    lam: str
    iota: str
    eq: str
    arrow: str
    name: object


def _latex_name(s: Sym) -> str:
    return s.base if s.index is None else f"{s.base}_{{{s.index}}}"


ASCII = _Style(
    neg="!",
    conn={And: " & ", Or: " | ", Imp: " -> ", Iff: " <-> "},
    quant={Forall: "A {}. ", Exists: "E {}. ", Forall2: "A2 {}. ", Exists2: "E2 {}. "},
    lam="\\{} ",
    iota="iota {}. ",
    eq=" = ",
    arrow="=>",
    name=lambda s: s.name,
)

LATEX = _Style(
    neg="\\neg ",
    conn={And: " \\land ", Or: " \\lor ", Imp: " \\to ", Iff: " \\leftrightarrow "},
    quant={
        Forall: "\\forall {}. ",
        Exists: "\\exists {}. ",
        Forall2: "\\forall^{{2}} {}. ",
        Exists2: "\\exists^{{2}} {}. ",
    },
    lam="\\lambda {} ",
    iota="\\iota {}. ",
    eq=" = ",
    arrow="\\Rightarrow",
    name=_latex_name,
)


def _fmt(f, st: _Style, top: bool) -> str:
    nm = st.name
    match f:
        case PredAtom(p, args) | RelApp(p, args):
            return f"{nm(p)}({','.join(nm(a) for a in args)})"
        case IndEq(l, r) | RelEq(l, r):
            return f"{nm(l)}{st.eq}{nm(r)}"
        case Neg(b):
            return st.neg + _fmt(b, st, False)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            return f"({_fmt(l, st, False)}{st.conn[type(f)]}{_fmt(r, st, False)})"
        case Forall(v, b) | Exists(v, b) | Forall2(v, b) | Exists2(v, b):
            s = st.quant[type(f)].format(nm(v)) + _fmt(b, st, True)
            return s if top else f"({s})"
        case LamAtom1(v, b, arg) | LamAtom2(v, b, arg):
            head = "(" + st.lam.format(nm(v)) + _fmt(b, st, True) + ")"
            if isinstance(arg, Sym):
                return f"{head} {nm(arg)}"
            return f"{head} (" + st.iota.format(nm(arg.var)) + _fmt(arg.cond, st, True) + ")"
    raise TypeError(f"not a formula: {f!r}")


def print_formula(f) -> str:
    return _fmt(f, ASCII, True)


def print_sequent(s: Sequent) -> str:
    left = ", ".join(print_formula(f) for f in s.ant)
    right = ", ".join(print_formula(f) for f in s.suc)
    return " ".join(x for x in (left, "=>", right) if x)


def latex_formula(f) -> str:
    return _fmt(f, LATEX, True)


def latex_sequent(s: Sequent) -> str:
    left = ", ".join(latex_formula(f) for f in s.ant)
    right = ", ".join(latex_formula(f) for f in s.suc)
    return " ".join(x for x in (left, LATEX.arrow, right) if x)


_LATEX_TOKEN = re.compile(
    r"\\forall\^\{2\}|\\exists\^\{2\}|\\[A-Za-z]+|\\,|[A-Za-z](?:_\{\d+\})?|[(),.=]|\s+"
)
_LATEX_TO_ASCII = {
    "\\neg": "!",
    "\\land": "&",
    "\\lor": "|",
    "\\to": "->",
    "\\leftrightarrow": "<->",
    "\\Rightarrow": "=>",
    "\\forall": "A",
    "\\exists": "E",
    "\\forall^{2}": "A2",
    "\\exists^{2}": "E2",
    "\\lambda": "\\",
    "\\iota": "iota",
}


def latex_to_ascii(src: str) -> str:
    """Invert :func:`latex_sequent` / :func:`latex_formula` back to the ASCII syntax."""
    out = []
    pos = 0
    while pos < len(src):
        m = _LATEX_TOKEN.match(src, pos)
        if m is None:
            raise ParseError(_span(src, pos, pos + 1), ["a LaTeX token"], repr(src[pos]))
        tok = m.group()
        pos = m.end()
        if tok.isspace() or tok == "\\,":
            continue
        if tok.startswith("\\"):
            if tok not in _LATEX_TO_ASCII:
                raise ParseError(_span(src, m.start(), m.end()), ["a known LaTeX command"], tok)
            out.append(_LATEX_TO_ASCII[tok])
        elif "_{" in tok:
            out.append(tok[0] + tok[3:-1])
        else:
            out.append(tok)
    return " ".join(out)


# ---------------------------------------------------------------------------
# model descriptions
#
#   domain = 2; P = {(0,1),(1,1)}; k = 0; G1 = {{}, {(0)}}; K = {(0)};
#   v: a = 0; X = {(0)};
#
# An empty relation takes its arity from ``P/2 = {}``, from the symbols passed
# in as hints, or defaults to 1.  Arities with no ``G`` line range over the full
# powerset.

_MODEL_TOKEN = re.compile(r"(?P<ws>\s+|#[^\n]*)|(?P<NUM>\d+)|(?P<NAME>[A-Za-z][A-Za-z0-9]*)|(?P<P>[{}(),;=:/])")


def _model_tokens(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _MODEL_TOKEN.match(src, pos)
        if m is None:
            raise ParseError(_span(src, pos, pos + 1), ["a model token"], repr(src[pos]))
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup if m.lastgroup != "P" else m.group(), m.group(), pos, m.end()))
        pos = m.end()
    out.append(Token("EOF", "", len(src), len(src)))
    return out


class _ModelParser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _model_tokens(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, expected, hint=None):
        t = self.tok
        raise ParseError(_span(self.src, t.start, t.end), expected, t.text or "end of input", hint)

    def eat(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.error([repr(kind) if len(kind) == 1 else kind.lower()])
        t = self.tok
        self.i += 1
        return t

    def number(self) -> int:
        return int(self.eat("NUM").text)

    def tuple_(self) -> tuple:
        self.eat("(")
        items = [self.number()]
        while self.tok.kind == ",":
            self.i += 1
            items.append(self.number())
        self.eat(")")
        return tuple(items)

    def relation(self) -> list[tuple]:
        self.eat("{")
        out = []
        if self.tok.kind != "}":
            out.append(self.tuple_())
            while self.tok.kind == ",":
                self.i += 1
                out.append(self.tuple_())
        self.eat("}")
        return out

    def family(self) -> list[list[tuple]]:
        self.eat("{")
        out = []
        if self.tok.kind != "}":
            out.append(self.relation())
            while self.tok.kind == ",":
                self.i += 1
                out.append(self.relation())
        self.eat("}")
        return out

    def entries(self):
        """Yield (section, name, arity hint, value, token) for each binding."""
        section = "model"
        while self.tok.kind != "EOF":
            if self.tok.kind == "NAME" and self.tok.text == "v" and self.toks[self.i + 1].kind == ":":
                self.i += 2
                section = "v"
                continue
            name_tok = self.eat("NAME")
            hint = None
            if self.tok.kind == "/":
                self.i += 1
                hint = self.number()
            self.eat("=")
            if self.tok.kind == "NUM":
                value = self.number()
            elif self.tok.kind == "{":
                if self.toks[self.i + 1].kind == "{" or re.fullmatch(r"G\d+", name_tok.text):
                    value = ("family", self.family())
                else:
                    value = ("relation", self.relation())
            else:
                self.error(["a number", "'{'"])
            yield section, name_tok.text, hint, value, name_tok
            if self.tok.kind == ";":
                self.i += 1
            elif self.tok.kind != "EOF":
                self.error(["';'"])


def parse_model(src: str, hints=()):
    """Parse a model description into ``(GeneralModel, Assignment)``.

    ``hints`` is an iterable of symbols whose arities disambiguate empty
    relations; symbols in the result carry the arities used there.
    """
    from .semantics import Assignment, GeneralModel, Model

    src = _normalize(src)
    p = _ModelParser(src)
    by_name = {s.name: s.arity for s in hints if s.kind.relational}
    size = None
    preds, consts, families, relconsts, ind, rel = {}, {}, {}, {}, {}, {}

    def fail(tok, msg):
        raise ParseError(_span(src, tok.start, tok.end), ["a valid binding"], repr(tok.text), msg)

    def arity_of(name, hint, rels, tok):
        lengths = {len(t) for r in rels for t in r}
        if len(lengths) > 1:
            fail(tok, f"{name} mixes tuple lengths")
        n = lengths.pop() if lengths else (hint or by_name.get(name, 1))
        if hint is not None and hint != n:
            fail(tok, f"{name} declared with arity {hint} but holds {n}-tuples")
        if name in by_name and by_name[name] != n:
            fail(tok, f"{name} has arity {by_name[name]} in the formula but {n} here")
        return n

    for section, name, hint, value, tok in p.entries():
        if section == "model" and name == "domain":
            if not isinstance(value, int) or value < 1:
                fail(tok, "domain must be a positive number")
            size = value
            continue
        if size is None:
            fail(tok, "the domain size must come first")
        fam = re.fullmatch(r"G(\d+)", name)
        if section == "model" and fam:
            n = int(fam.group(1))
            if not isinstance(value, tuple) or value[0] != "family":
                fail(tok, "a family is a set of relations")
            rels = value[1]
            for r in rels:
                if any(len(t) != n for t in r):
                    fail(tok, f"G{n} must hold {n}-ary relations")
            families[n] = tuple(frozenset(r) for r in rels)
            continue
        kind = classify(name)
        if kind is None:
            fail(tok, f"{name} is not a symbol name")
        if kind.individual:
            if not isinstance(value, int):
                fail(tok, f"{name} denotes an element")
            s = Sym(kind, name[0], int(name[1:]) if name[1:] else None, 0)
            if kind is Kind.IND_CONST:
                if section == "v":
                    fail(tok, "constants belong to the model, not the assignment")
                consts[s] = value
            else:
                if section != "v":
                    fail(tok, "variables and parameters are bound after 'v:'")
                ind[s] = value
            continue
        if not isinstance(value, tuple) or value[0] != "relation":
            fail(tok, f"{name} denotes a relation")
        n = arity_of(name, hint, [value[1]], tok)
        s = Sym(kind, name[0], int(name[1:]) if name[1:] else None, n)
        r = frozenset(value[1])
        if kind is Kind.PRED:
            preds[s] = r
        elif kind is Kind.REL_CONST:
            relconsts[s] = r
        else:
            if section != "v":
                fail(tok, "relational variables and parameters are bound after 'v:'")
            rel[s] = r
    if size is None:
        raise ParseError(_span(src, len(src), len(src)), ["'domain = N'"], "end of input")
    try:
        gm = GeneralModel(Model(size, preds, consts), families, relconsts)
    except ValueError as e:
        raise ParseError(_span(src, 0, len(src)), ["a consistent model"], "model", str(e)) from None
    for s, o in ind.items():
        if not 0 <= o < size:
            raise ParseError(_span(src, 0, len(src)), ["a domain element"], str(o), f"{s.name} is out of range")
    for s, r in rel.items():
        if r not in gm.family(s.arity):
            raise ParseError(_span(src, 0, len(src)), ["a family member"], s.name, f"{s.name} is not in G{s.arity}")
    return gm, Assignment(ind, rel)


def _print_rel(r) -> str:
    return "{" + ", ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(r)) + "}"


def print_model(gm, v=None) -> str:
    """Inverse of :func:`parse_model`; one binding per line."""
    lines = [f"domain = {gm.base.domain_size};"]

    def rel_line(s, r):
        head = s.name if r else f"{s.name}/{s.arity}"
        return f"{head} = {_print_rel(r)};"

    for s in sorted(gm.base.preds, key=Sym.sort_key):
        lines.append(rel_line(s, gm.base.preds[s]))
    for s in sorted(gm.base.consts, key=Sym.sort_key):
        lines.append(f"{s.name} = {gm.base.consts[s]};")
    from .semantics import rel_key

    for n in sorted(gm.families):
        fam = sorted(gm.families[n], key=rel_key)
        lines.append(f"G{n} = {{" + ", ".join(_print_rel(r) for r in fam) + "};")
    for s in sorted(gm.relconsts, key=Sym.sort_key):
        lines.append(rel_line(s, gm.relconsts[s]))
    if v is not None and (v.ind or v.rel):
        lines.append("v:")
        for s in sorted(v.ind, key=Sym.sort_key):
            lines.append(f"  {s.name} = {v.ind[s]};")
        for s in sorted(v.rel, key=Sym.sort_key):
            lines.append("  " + rel_line(s, v.rel[s]))
    return "\n".join(lines)


def parse_derivation(src: str):
    """Read a proof document (JSON or indented text); see :mod:`iotacalc.interchange`."""
    from .interchange import parse_derivation as read

    return read(src)


def print_derivation(d, fmt: str = "json", assumptions=()) -> str:
    """Print a derivation as ``json``, ``text``, ``ascii`` tree or ``latex`` tree."""
    from . import interchange

    writers = {
        "json": lambda: interchange.write_json(d, assumptions),
        "text": lambda: interchange.write_text(d, assumptions),
        "ascii": lambda: interchange.render_ascii(d),
        "latex": lambda: interchange.render_latex(d),
    }
    if fmt not in writers:
        raise ValueError(f"unknown derivation format {fmt!r}")
    return writers[fmt]()
