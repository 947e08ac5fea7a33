"""Command-line front end: check, prove, eval, countermodel, render, saturate, selftest.

Exit codes: 0 success (accepted / found / true), 1 negative answer
(rejected / exhausted / false / none), 2 usage, parse or resource error.
Errors go to stderr, first line ``error: <kind>: <detail>``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus, interchange
from .calculus import check, rule_id
from .errors import BudgetExhausted, Exhausted, LogicError
from .parser import parse_formula, parse_model, parse_sequent, print_formula, print_model, print_sequent
from .search import ExtendedSequent, SaturationConfig, SearchConfig, check_witness_property, prove, saturate
from .semantics import FAMILY_MODES, SearchBounds, eval as evaluate, find_countermodel, full_model
from .syntax import Sequent, free_symbols


class UsageError(Exception):
    pass


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(arg: str, stdin) -> str:
    """Argument text: ``@path`` reads a file, ``-`` reads stdin, else literal."""
    if arg == "-":
        return stdin.read()
    if arg.startswith("@"):
        return _read_file(arg[1:])
    return arg


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _read_doc(arg: str, stdin) -> str:
    """Proof and model arguments are file paths (``@path`` and ``-`` also work)."""
    if arg == "-" or arg.startswith("@"):
        return _read(arg, stdin)
    return _read_file(arg)


def _color(text: str, code: str, out) -> str:
    if os.environ.get("NO_COLOR") or not getattr(out, "isatty", lambda: False)():
        return text
    return f"\033[{code}m{text}\033[0m"


# ---------------------------------------------------------------------------
# config


_CONFIG_KEYS = {
    "max_depth": int,
    "max_contractions_per_formula": int,
    "instantiation_pool_extra": int,
    "time_budget_ms": int,
    "rule_order": lambda v: tuple(rule_id(n.strip()) for n in v.split(",") if n.strip()),
}


def load_config(text: str) -> dict:
    """``key = value`` lines for SearchConfig; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise UsageError(f"config line {n}: unknown key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except ValueError as e:
            raise UsageError(f"config line {n}: {e}") from None
    return out


def _search_config(args) -> SearchConfig:
    opts = load_config(_read_file(args.config)) if args.config else {}
    if args.depth is not None:
        opts["max_depth"] = args.depth
    if args.pool is not None:
        opts["instantiation_pool_extra"] = args.pool
    if args.time_ms is not None:
        opts["time_budget_ms"] = args.time_ms
    if args.contractions is not None:
        opts["max_contractions_per_formula"] = args.contractions
    try:
        return SearchConfig(**opts)
    except ValueError as e:
        raise UsageError(str(e)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(args, out, stdin) -> int:
    d, assumptions = interchange.read_derivation(_read_doc(args.proof, stdin))
    if args.assumptions:
        extra = [parse_sequent(line) for line in _read_file(args.assumptions).splitlines() if line.strip() and not line.lstrip().startswith("#")]
        assumptions = list(assumptions) + extra
    report = check(
        d,
        args.system,
        allow_cut=not args.no_cut,
        assumptions=assumptions,
        strict_eigen=args.strict_eigen,
        strict_multiset=args.strict_multiset,
    )
    if args.json:
        print(report.to_json(), file=out)
    else:
        text = str(report)
        first, _, rest = text.partition("\n")
        print(_color(first, "32" if report.accepted else "31", out) + ("\n" + rest if rest else ""), file=out)
    return 0 if report.accepted else 1


def cmd_prove(args, out, stdin) -> int:
    goal = parse_sequent(_read(args.sequent, stdin))
    cfg = _search_config(args)
    try:
        d = prove(goal, args.system, cfg)
    except Exhausted as e:
        if args.json:
            print(json.dumps({"result": "exhausted", "depth": e.depth, "frontier": [print_sequent(s) for s in e.frontier]}, indent=2), file=out)
        else:
            print("exhausted", file=out)
            if args.dump_frontier:
                for s in e.frontier:
                    print(print_sequent(s), file=out)
        return 1
    if args.json:
        print(interchange.write_json(d), file=out)
    elif args.format in ("ascii", "latex"):
        print(interchange.render_ascii(d) if args.format == "ascii" else interchange.render_latex(d), file=out)
    else:
        print(interchange.write_text(d), end="", file=out)
    return 0


def cmd_eval(args, out, stdin) -> int:
    f = parse_formula(_read(args.formula, stdin))
    if args.model is None:
        if not args.full:
            raise UsageError("eval needs --model FILE, or --full to quantify over all full models")
        # truth in every full model up to the size bound
        s = Sequent((), (f,))
        found = find_countermodel(s, SearchBounds(max_domain=args.max_domain, families="full"))
        value = found is None
        if args.json:
            doc = {"value": value, "scope": f"all full models with |D| <= {args.max_domain}"}
            if found:
                doc["countermodel"] = print_model(*found)
            print(json.dumps(doc, indent=2), file=out)
        else:
            print("true" if value else "false", file=out)
            if found:
                print(print_model(*found), file=out)
        return 0 if value else 1
    gm, v = parse_model(_read_doc(args.model, stdin), hints=free_symbols(f))
    if args.full:
        gm = full_model(gm.base, dict(gm.relconsts), gm.cap)
    value = evaluate(gm, v, f)
    if args.json:
        print(json.dumps({"value": value, "formula": print_formula(f)}), file=out)
    else:
        print("true" if value else "false", file=out)
    return 0 if value else 1


def cmd_countermodel(args, out, stdin) -> int:
    s = parse_sequent(_read(args.sequent, stdin))
    try:
        bounds = SearchBounds(
            max_domain=args.max_domain,
            min_domain=args.min_domain,
            max_arity=args.max_arity,
            families=args.families,
            seed=args.seed,
            count=args.count,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    found = find_countermodel(s, bounds)
    if args.json:
        print(json.dumps({"found": found is not None, "model": print_model(*found) if found else None}, indent=2), file=out)
    else:
        print(print_model(*found) if found else "none within bounds", file=out)
    return 0 if found else 1


def cmd_render(args, out, stdin) -> int:
    d, assumptions = interchange.read_derivation(_read_doc(args.proof, stdin))
    fmt = "json" if args.json else args.format
    if fmt == "ascii":
        text = interchange.render_ascii(d)
    elif fmt == "latex":
        text = interchange.render_latex(d)
    elif fmt == "text":
        text = interchange.write_text(d, assumptions).rstrip("\n")
    else:
        text = interchange.write_json(d, assumptions)
    print(text, file=out)
    return 0


def cmd_saturate(args, out, stdin) -> int:
    es = ExtendedSequent.of(parse_sequent(_read_doc(args.file, stdin)))
    try:
        order = tuple(int(c) for c in args.clauses.split(",")) if args.clauses else tuple(range(1, 10))
    except ValueError:
        raise UsageError("--clauses takes comma-separated clause numbers") from None
    if sorted(order) != list(range(1, 10)):
        raise UsageError("--clauses must list each of 1..9 once")
    cfg = SaturationConfig(clause_order=order, prove_guided=args.prove_guided)
    exhausted = False
    try:
        result = saturate(es, args.budget, cfg)
        remaining = check_witness_property(result, order)
    except BudgetExhausted as e:
        result, remaining, exhausted = e.partial, e.remaining_violations, True
    if args.json:
        doc = {
            "sequent": str(result),
            "antecedent": [print_formula(f) for f in result.ant],
            "succedent": [print_formula(f) for f in result.suc],
            "budget_exhausted": exhausted,
            "violations": [str(v) for v in remaining],
        }
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(str(result), file=out)
        if exhausted:
            print("budget exhausted", file=out)
        for v in remaining:
            print(f"violation: {v}", file=out)
    return 0 if not remaining else 1


def cmd_selftest(args, out, stdin) -> int:
    results = corpus.selftest()
    passed = sum(1 for _, ok, _ in results if ok)
    if args.json:
        print(json.dumps({"passed": passed, "failed": len(results) - passed, "cases": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}, indent=2), file=out)
    else:
        for name, ok, detail in results:
            if not ok or args.verbose:
                print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""), file=out)
        print(f"{passed} passed, {len(results) - passed} failed", file=out)
    return 0 if passed == len(results) else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="iotacalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="structured output")
        return sp

    systems = ("rl", "rl2")
    c = common(sub.add_parser("check", help="check a proof document"))
    c.add_argument("--system", choices=systems, default="rl2")
    c.add_argument("--no-cut", action="store_true")
    c.add_argument("--assumptions", metavar="FILE", help="one assumption sequent per line")
    c.add_argument("--strict-eigen", action="store_true", help="eigen parameters must be fresh for the whole tree")
    c.add_argument("--strict-multiset", action="store_true", help="premises must match as exact multisets")
    c.add_argument("proof")
    c.set_defaults(run=cmd_check)

    pr = common(sub.add_parser("prove", help="search for a cut-free derivation"))
    pr.add_argument("--system", choices=systems, default="rl2")
    pr.add_argument("--depth", type=int)
    pr.add_argument("--pool", type=int, help="fresh terms added to each instantiation pool")
    pr.add_argument("--contractions", type=int, help="uses of one principal formula per branch")
    pr.add_argument("--time-ms", type=int)
    pr.add_argument("--config", metavar="FILE", help="key = value defaults for the search")
    pr.add_argument("--format", choices=("text", "ascii", "latex"), default="text")
    pr.add_argument("--dump-frontier", action="store_true")
    pr.add_argument("sequent")
    pr.set_defaults(run=cmd_prove)

    e = common(sub.add_parser("eval", help="evaluate a formula"))
    e.add_argument("--model", metavar="FILE")
    e.add_argument("--full", action="store_true", help="use full powerset families")
    e.add_argument("--max-domain", type=int, default=2)
    e.add_argument("formula")
    e.set_defaults(run=cmd_eval)

    m = common(sub.add_parser("countermodel", help="search for a falsifying general model"))
    m.add_argument("--max-domain", type=int, default=2)
    m.add_argument("--min-domain", type=int, default=1)
    m.add_argument("--max-arity", type=int, default=2)
    m.add_argument("--families", choices=FAMILY_MODES, default="auto")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--count", type=int, default=8, help="families per arity in sampled mode")
    m.add_argument("sequent")
    m.set_defaults(run=cmd_countermodel)

    r = common(sub.add_parser("render", help="draw a proof tree"))
    r.add_argument("--format", choices=("ascii", "latex", "json", "text"), default="ascii")
    r.add_argument("proof")
    r.set_defaults(run=cmd_render)

    s = common(sub.add_parser("saturate", help="close an extended sequent under the witness clauses"))
    s.add_argument("--budget", type=int, default=32, help="fresh constants available")
    s.add_argument("--clauses", help="clause order, e.g. 9,1,2,3,4,5,6,7,8")
    s.add_argument("--prove-guided", action="store_true")
    s.add_argument("file")
    s.set_defaults(run=cmd_saturate)

    t = common(sub.add_parser("selftest", help="run the embedded fixture corpus"))
    t.add_argument("--verbose", "-v", action="store_true")
    t.set_defaults(run=cmd_selftest)
    return p


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out, stdin)
    except UsageError as e:
        print(f"error: usage: {e}", file=err)
    except LogicError as e:
        print(f"error: {e.kind}: {e}", file=err)
    except ValueError as e:
        print(f"error: value: {e}", file=err)
    return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
