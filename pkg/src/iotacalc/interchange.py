"""Proof interchange: JSON and indented-text documents, plus tree rendering.

A document is a list of node records.  Each record has an ``id``, a ``rule``,
a ``conclusion`` (sequent text), a list of ``premises`` (ids) and an ``inst``
table.  The JSON form::

    {"assumptions": ["C(a), Q(a) => Q(b)"],
     "nodes": [
       {"id": "n1", "rule": "AX", "conclusion": "B(a) => B(a)", "premises": []},
       {"id": "n2", "rule": "WR", "conclusion": "B(a) => B(a), C(a)",
        "premises": ["n1"], "inst": {"principal": "suc:1"}}, ...],
     "root": "n7"}

The text form carries the same records::

    assumption: C(a), Q(a) => Q(b)
    n1: AX
      conclusion: B(a) => B(a)
    n2: WR n1
      conclusion: B(a) => B(a), C(a)
      principal: suc:1

``inst`` keys: ``principal`` (``ant:i`` / ``suc:i``), ``eigen`` and
``witnesses`` (symbol names), ``cut`` (formula), ``schema`` (atomic formula)
with ``schema_var``, and ``split`` (``{"ant": [...], "suc": [...]}``; in text
``split: ant 0 1 | suc``).
"""

from __future__ import annotations

import json
import re

from .calculus import Derivation, Instantiation, RuleId, rule_id
from .errors import LogicError, ParseError
from .parser import Document, _normalize, _span, latex_sequent, print_formula, print_sequent
from .syntax import Sequent

FORMAT_VERSION = 1


def _err(src: str, start: int, end: int, expected, found: str, hint=None) -> ParseError:
    start = max(0, min(start, len(src)))
    end = max(start, min(end, len(src)))
    return ParseError(_span(src, start, end), expected, found, hint)


# ---------------------------------------------------------------------------
# reading


class _Builder:
    """Turns raw records into a Derivation; ``locate`` maps a record to a source offset."""

    def __init__(self, src: str, locate):
        self.src = src
        self.locate = locate
        self.doc = Document()

    def fail(self, rec_index, expected, found, hint=None):
        start, end = self.locate(rec_index)
        raise _err(self.src, start, end, expected, found, hint)

    def text(self, i, parse, value, what):
        if not isinstance(value, str):
            self.fail(i, [what], repr(value))
        try:
            return parse(value)
        except ParseError as e:
            self.fail(i, [what], repr(value), f"{e}")

    def symbols(self, i, names, what):
        if isinstance(names, str):
            names = [n for n in re.split(r"[\s,]+", names) if n]
        if not isinstance(names, list):
            self.fail(i, [f"a list of {what}"], repr(names))
        out = []
        for n in names:
            if not isinstance(n, str):
                self.fail(i, [what], repr(n))
            try:
                out.append(self.doc.symbol(n))
            except (ValueError, LogicError) as e:
                self.fail(i, [what], repr(n), str(e))
        return out

    def build(self, records: list[dict], assumptions: list, root_id=None):
        doc = self.doc
        raw_assumptions = [self.text(-1, doc.sequent, a, "an assumption sequent") for a in assumptions]
        by_id: dict[str, int] = {}
        parsed = []
        for i, rec in enumerate(records):
            if not isinstance(rec, dict):
                self.fail(i, ["a node record"], repr(rec))
            nid = rec.get("id")
            if not isinstance(nid, str) or not nid:
                self.fail(i, ["a node id"], repr(nid))
            if nid in by_id:
                self.fail(i, ["a unique node id"], repr(nid))
            by_id[nid] = i
            rule_name = rec.get("rule")
            if not isinstance(rule_name, str):
                self.fail(i, ["a rule name"], repr(rule_name))
            rule = rule_id(rule_name)
            concl = self.text(i, doc.sequent, rec.get("conclusion"), "a conclusion sequent")
            prem = rec.get("premises", [])
            if not isinstance(prem, list) or not all(isinstance(p, str) for p in prem):
                self.fail(i, ["a list of premise ids"], repr(prem))
            inst = rec.get("inst", {}) or {}
            if not isinstance(inst, dict):
                self.fail(i, ["an inst table"], repr(inst))
            parsed.append((nid, rule, concl, prem, inst))

        # formulas are all read; symbol arities are now fixed document-wide
        def inst_of(i, raw: dict) -> Instantiation:
            known = {"principal", "eigen", "witnesses", "cut", "cut_formula", "schema", "schema_var", "atomic_schema", "split"}
            for k in raw:
                if k not in known:
                    self.fail(i, ["a known inst key"], repr(k))
            principal = None
            if raw.get("principal") is not None:
                m = re.fullmatch(r"\s*(ant|suc)\s*:\s*(\d+)\s*", str(raw["principal"]))
                if not m:
                    self.fail(i, ["'ant:N' or 'suc:N'"], repr(raw["principal"]))
                principal = (m.group(1), int(m.group(2)))
            cut = raw.get("cut", raw.get("cut_formula"))
            cut_f = None if cut is None else doc.resolve(self.text(i, doc.formula, cut, "a cut formula"))
            schema = raw.get("schema")
            schema_var = raw.get("schema_var")
            if isinstance(raw.get("atomic_schema"), dict):
                schema = raw["atomic_schema"].get("formula")
                schema_var = raw["atomic_schema"].get("var")
            atomic = None
            if schema is not None:
                if schema_var is None:
                    self.fail(i, ["schema_var"], "nothing")
                f = doc.resolve(self.text(i, doc.formula, schema, "an atomic schema"))
                (v,) = self.symbols(i, [schema_var], "a schema variable")
                atomic = (f, v)
            split = raw.get("split")
            if split is not None:
                if isinstance(split, str):
                    m = re.fullmatch(r"\s*ant\s*([\d\s]*)\|\s*suc\s*([\d\s]*)", split)
                    if not m:
                        self.fail(i, ["'ant I.. | suc J..'"], repr(split))
                    split = {"ant": [int(x) for x in m.group(1).split()], "suc": [int(x) for x in m.group(2).split()]}
                if not isinstance(split, dict) or not all(
                    isinstance(split.get(k, []), list) and all(isinstance(x, int) for x in split.get(k, [])) for k in ("ant", "suc")
                ):
                    self.fail(i, ["a split table"], repr(split))
                split = (tuple(split.get("ant", [])), tuple(split.get("suc", [])))
            return Instantiation(
                principal=principal,
                eigen=tuple(self.symbols(i, raw.get("eigen", []), "eigen parameters")),
                witnesses=tuple(self.symbols(i, raw.get("witnesses", []), "witnesses")),
                cut_formula=cut_f,
                atomic_schema=atomic,
                split=split,
            )

        insts = [inst_of(i, p[4]) for i, p in enumerate(parsed)]
        referenced = set()
        for i, (_, _, _, prem, _) in enumerate(parsed):
            for p in prem:
                if p not in by_id:
                    self.fail(i, ["a known premise id"], repr(p))
                referenced.add(p)
        if not parsed:
            raise _err(self.src, 0, len(self.src), ["at least one node"], "empty document")
        if root_id is None:
            roots = [p[0] for p in parsed if p[0] not in referenced]
            if len(roots) != 1:
                raise _err(self.src, 0, len(self.src), ["exactly one root node"], f"{len(roots)} roots")
            root_id = roots[0]
        if root_id not in by_id:
            raise _err(self.src, 0, len(self.src), ["a known root id"], repr(root_id))

        built: dict[str, Derivation] = {}
        visiting: set[str] = set()

        def make(nid: str) -> Derivation:
            if nid in built:
                return built[nid]
            i = by_id[nid]
            if nid in visiting:
                self.fail(i, ["an acyclic proof"], repr(nid), "premise cycle")
            visiting.add(nid)
            _, rule, concl, prem, _ = parsed[i]
            d = Derivation(doc.resolve(concl), rule, insts[i], tuple(make(p) for p in prem))
            visiting.discard(nid)
            built[nid] = d
            return d

        root = make(root_id)
        return root, [doc.resolve(a) for a in raw_assumptions]


def read_json(src: str) -> tuple[Derivation, list[Sequent]]:
    src = _normalize(src)
    try:
        data = json.loads(src)
    except json.JSONDecodeError as e:
        raise _err(src, e.pos, e.pos + 1, ["valid JSON"], repr(src[e.pos : e.pos + 1]) or "end of input", e.msg) from None
    if isinstance(data, list):
        data = {"nodes": data}
    if not isinstance(data, dict) or not isinstance(data.get("nodes"), list):
        raise _err(src, 0, len(src), ["an object with a 'nodes' list"], type(data).__name__)
    assumptions = data.get("assumptions", [])
    if not isinstance(assumptions, list):
        raise _err(src, 0, len(src), ["a list of assumptions"], repr(assumptions))
    records = data["nodes"]

    def locate(i):
        if i < 0:
            k = src.find('"assumptions"')
            return (max(k, 0), max(k, 0) + 1)
        rec = records[i] if 0 <= i < len(records) else None
        nid = rec.get("id") if isinstance(rec, dict) else None
        if isinstance(nid, str):
            k = src.find(json.dumps(nid))
            if k >= 0:
                return (k, k + len(json.dumps(nid)))
        return (0, len(src))

    return _Builder(src, locate).build(records, assumptions, data.get("root"))


_HEADER = re.compile(r"([A-Za-z0-9_.\-]+)\s*:\s*([A-Za-z0-9]+)\s*(.*)")


def read_text(src: str) -> tuple[Derivation, list[Sequent]]:
    src = _normalize(src)
    records: list[dict] = []
    offsets: list[tuple[int, int]] = []
    assumptions: list[str] = []
    root = None
    pos = 0
    for line in src.split("\n"):
        start = pos
        pos += len(line) + 1
        body = line.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        if body[0].isspace():
            if not records:
                raise _err(src, start, start + len(line), ["a node header"], repr(body.strip()))
            key, sep, value = body.strip().partition(":")
            if not sep:
                raise _err(src, start, start + len(line), ["'key: value'"], repr(body.strip()))
            key, value = key.strip(), value.strip()
            if key in ("eigen", "witnesses"):
                records[-1].setdefault("inst", {})[key] = [n for n in re.split(r"[\s,]+", value) if n]
            elif key == "conclusion":
                records[-1]["conclusion"] = value
            else:
                records[-1].setdefault("inst", {})[key] = value
            continue
        key, sep, value = body.partition(":")
        if key.strip() == "assumption" and sep:
            assumptions.append(value.strip())
            continue
        if key.strip() == "root" and sep:
            root = value.strip()
            continue
        m = _HEADER.fullmatch(body.strip())
        if not m:
            raise _err(src, start, start + len(line), ["'id: Rule premise-ids'"], repr(body.strip()))
        prem = [p for p in re.split(r"[\s,]+", m.group(3)) if p]
        records.append({"id": m.group(1), "rule": m.group(2), "premises": prem})
        offsets.append((start, start + len(line)))

    def locate(i):
        if 0 <= i < len(offsets):
            return offsets[i]
        return (0, len(src))

    return _Builder(src, locate).build(records, assumptions, root)


def parse_derivation(src: str) -> Derivation:
    """Read a derivation from JSON or indented text (sniffed by the first character)."""
    return read_derivation(src)[0]


def read_derivation(src: str) -> tuple[Derivation, list[Sequent]]:
    """Derivation plus any assumption sequents declared in the document."""
    if src.lstrip().startswith(("{", "[")):
        return read_json(src)
    return read_text(src)


# ---------------------------------------------------------------------------
# writing


def _postorder(d: Derivation) -> list[tuple[str, Derivation, list[str]]]:
    out: list = []

    def go(n: Derivation) -> str:
        ids = [go(p) for p in n.premises]
        nid = f"n{len(out) + 1}"
        out.append((nid, n, ids))
        return nid

    go(d)
    return out


def _inst_dict(inst: Instantiation) -> dict:
    out: dict = {}
    if inst.principal is not None:
        out["principal"] = f"{inst.principal[0]}:{inst.principal[1]}"
    if inst.eigen:
        out["eigen"] = [s.name for s in inst.eigen]
    if inst.witnesses:
        out["witnesses"] = [s.name for s in inst.witnesses]
    if inst.cut_formula is not None:
        out["cut"] = print_formula(inst.cut_formula)
    if inst.atomic_schema is not None:
        out["schema"] = print_formula(inst.atomic_schema[0])
        out["schema_var"] = inst.atomic_schema[1].name
    if inst.split is not None:
        out["split"] = {"ant": list(inst.split[0]), "suc": list(inst.split[1])}
    return out


def to_dict(d: Derivation, assumptions=()) -> dict:
    nodes = []
    for nid, n, ids in _postorder(d):
        rec = {"id": nid, "rule": n.rule.value, "conclusion": print_sequent(n.conclusion), "premises": ids}
        inst = _inst_dict(n.inst)
        if inst:
            rec["inst"] = inst
        nodes.append(rec)
    out = {"format": "iotacalc-proof", "version": FORMAT_VERSION, "nodes": nodes, "root": nodes[-1]["id"]}
    if assumptions:
        out["assumptions"] = [print_sequent(a) for a in assumptions]
    return out


def write_json(d: Derivation, assumptions=()) -> str:
    """Canonical JSON: post-order ids n1, n2, ..., sorted keys, two-space indent."""
    return json.dumps(to_dict(d, assumptions), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text(d: Derivation, assumptions=()) -> str:
    lines = [f"assumption: {print_sequent(a)}" for a in assumptions]
    for nid, n, ids in _postorder(d):
        lines.append(f"{nid}: {n.rule.value}" + (" " + " ".join(ids) if ids else ""))
        lines.append(f"  conclusion: {print_sequent(n.conclusion)}")
        inst = _inst_dict(n.inst)
        for k in ("principal", "eigen", "witnesses", "cut", "schema", "schema_var"):
            if k in inst:
                v = inst[k]
                lines.append(f"  {k}: {' '.join(v) if isinstance(v, list) else v}")
        if "split" in inst:
            sp = inst["split"]
            lines.append(("  split: ant " + " ".join(map(str, sp["ant"])) + " | suc " + " ".join(map(str, sp["suc"]))).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# rendering


def _label(n: Derivation) -> str:
    return n.rule.value


def render_ascii(d: Derivation) -> str:
    """Premises side by side above a rule bar labelled with the rule name."""

    def box(n: Derivation) -> tuple[list[str], int, int]:
        # returns lines, total width, and the column span of the conclusion's centre
        concl = print_sequent(n.conclusion)
        if not n.premises:
            if n.rule is RuleId.AX:
                return [concl], len(concl), len(concl) // 2
            bar = "-" * len(concl) + f" {_label(n)}"
            return [bar, concl], max(len(bar), len(concl)), len(concl) // 2
        subs = [box(p) for p in n.premises]
        gap = 3
        height = max(len(s[0]) for s in subs)
        width = sum(s[1] for s in subs) + gap * (len(subs) - 1)
        rows = []
        for r in range(height):
            parts = []
            for lines, w, _ in subs:
                pad = height - len(lines)
                parts.append((lines[r - pad] if r >= pad else "").ljust(w))
            rows.append((" " * gap).join(parts).rstrip())
        prem_w = max(width, 1)
        bar_w = max(prem_w, len(concl))
        indent = (bar_w - prem_w) // 2
        rows = [" " * indent + r if r else r for r in rows]
        bar = "-" * bar_w + f" {_label(n)}"
        cpad = (bar_w - len(concl)) // 2
        out = rows + [bar, " " * cpad + concl]
        return out, max(len(bar), bar_w), cpad + len(concl) // 2

    lines, _, _ = box(d)
    return "\n".join(line.rstrip() for line in lines) + "\n"


_LATEX_RULE = {
    RuleId.Cut: "(Cut)",
    RuleId.WL: "(W$\\Rightarrow$)",
    RuleId.WR: "($\\Rightarrow$W)",
    RuleId.CL: "(C$\\Rightarrow$)",
    RuleId.CR: "($\\Rightarrow$C)",
    RuleId.AndL: "($\\land\\Rightarrow$)",
    RuleId.AndR: "($\\Rightarrow\\land$)",
    RuleId.NegL: "($\\neg\\Rightarrow$)",
    RuleId.NegR: "($\\Rightarrow\\neg$)",
    RuleId.OrL: "($\\lor\\Rightarrow$)",
    RuleId.OrR: "($\\Rightarrow\\lor$)",
    RuleId.ImpL: "($\\to\\Rightarrow$)",
    RuleId.ImpR: "($\\Rightarrow\\to$)",
    RuleId.IffL: "($\\leftrightarrow\\Rightarrow$)",
    RuleId.IffR: "($\\Rightarrow\\leftrightarrow$)",
    RuleId.AllL: "($\\forall\\Rightarrow$)",
    RuleId.AllR: "($\\Rightarrow\\forall$)",
    RuleId.ExL: "($\\exists\\Rightarrow$)",
    RuleId.ExR: "($\\Rightarrow\\exists$)",
    RuleId.EqPlus: "($=+$)",
    RuleId.EqMinus: "($=-$)",
    RuleId.LamL: "($\\lambda\\Rightarrow$)",
    RuleId.LamR: "($\\Rightarrow\\lambda$)",
    RuleId.Iota1L: "($\\iota_1\\Rightarrow$)",
    RuleId.Iota2L: "($\\iota_2\\Rightarrow$)",
    RuleId.IotaR: "($\\Rightarrow\\iota$)",
    RuleId.Eq2L: "($=^2\\Rightarrow$)",
    RuleId.Eq2R: "($\\Rightarrow=^2$)",
    RuleId.All2L: "($\\forall^2\\Rightarrow$)",
    RuleId.All2R: "($\\Rightarrow\\forall^2$)",
    RuleId.Ex2L: "($\\exists^2\\Rightarrow$)",
    RuleId.Ex2R: "($\\Rightarrow\\exists^2$)",
    RuleId.Iota1L2: "($\\iota^2_1\\Rightarrow$)",
    RuleId.Iota2L2: "($\\iota^2_2\\Rightarrow$)",
    RuleId.IotaR2: "($\\Rightarrow\\iota^2$)",
}

_INF = {1: "\\UnaryInfC", 2: "\\BinaryInfC", 3: "\\TrinaryInfC"}


def render_latex(d: Derivation, standalone: bool = True) -> str:
    """bussproofs source for the tree; a complete document unless ``standalone`` is False."""
    body: list[str] = []

    def go(n: Derivation):
        if not n.premises:
            body.append(f"\\AxiomC{{${latex_sequent(n.conclusion)}$}}")
            if n.rule is RuleId.Hyp:
                body.append("\\RightLabel{\\scriptsize (Hyp)}")
                body.append(f"\\UnaryInfC{{${latex_sequent(n.conclusion)}$}}")
            return
        for p in n.premises:
            go(p)
        body.append(f"\\RightLabel{{\\scriptsize {_LATEX_RULE.get(n.rule, n.rule.value)}}}")
        body.append(f"{_INF[len(n.premises)]}{{${latex_sequent(n.conclusion)}$}}")

    go(d)
    tree = "\\begin{prooftree}\n" + "\n".join(body) + "\n\\end{prooftree}\n"
    if not standalone:
        return tree
    return (
        "\\documentclass{article}\n\\usepackage{amssymb}\n\\usepackage{bussproofs}\n"
        "\\begin{document}\n" + tree + "\\end{document}\n"
    )


_LATEX_SEQ = re.compile(r"\\(?:AxiomC|UnaryInfC|BinaryInfC|TrinaryInfC)\{\$(.*)\$\}")


def latex_sequents(src: str) -> list[str]:
    """ASCII forms of every sequent typeset in bussproofs output, in source order."""
    from .parser import latex_to_ascii

    return [latex_to_ascii(m.group(1)) for m in _LATEX_SEQ.finditer(src)]


__all__ = [
    "parse_derivation",
    "read_derivation",
    "read_json",
    "read_text",
    "render_ascii",
    "render_latex",
    "latex_sequents",
    "to_dict",
    "write_json",
    "write_text",
]
