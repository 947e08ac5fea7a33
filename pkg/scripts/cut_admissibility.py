"""Re-prove the end-sequents of derivations that use Cut without Cut.

Covers the two derived-rule trees for relational identity at several
contexts.  Open assumption leaves are folded into the end-sequent as
antecedent implications before searching.

    python3 scripts/cut_admissibility.py --depth 12
"""

import argparse
import time

from iotacalc.calculus import Instantiation, RuleId, check, close_hypotheses, expand_derived, height, uses_cut
from iotacalc.errors import Exhausted, ResourceLimit
from iotacalc.parser import print_sequent, parse_sequent
from iotacalc.search import SearchConfig, prove
from iotacalc.syntax import RelApp, sym

CONTEXTS = ["=> P(a)", "Q(a) => Q(b)", "P(a), Q(b) =>", "A x. P(x) => E x. Q(x)"]


def instances():
    X, B, C, a = sym("X", 1), sym("B", 1), sym("C", 1), sym("a")
    for ctx in CONTEXTS:
        yield "reflexivity", expand_derived("Eq2Plus", parse_sequent(ctx), Instantiation(witnesses=(X,)))
        rewrite_ctx = parse_sequent("B = C, B(a), " + ctx if not ctx.startswith("=>") else "B = C, B(a) " + ctx)
        inst = Instantiation(witnesses=(B, C), atomic_schema=(RelApp(X, (a,)), X))
        yield "rewrite", expand_derived("Eq2Minus", rewrite_ctx, inst)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=12)
    args = ap.parse_args()
    failures = 0
    for name, d in instances():
        hyps = [n.conclusion for _, n in d.nodes() if n.rule is RuleId.Hyp]
        assert uses_cut(d) and check(d, "rl2", assumptions=hyps).accepted
        goal = close_hypotheses(d)
        start = time.perf_counter()
        try:
            found = prove(goal, "rl2", SearchConfig(max_depth=args.depth))
            result = f"cut-free, height {height(found)} (with cut {height(d)})"
        except (Exhausted, ResourceLimit) as e:
            failures += 1
            result = type(e).__name__
        print(f"{name:<12} {time.perf_counter() - start:6.2f}s  {result:<32} {print_sequent(goal)}")
    print(f"{failures} failures")


if __name__ == "__main__":
    main()
