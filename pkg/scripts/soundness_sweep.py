"""Prove random valid goals and look for countermodels to the results.

    python3 scripts/soundness_sweep.py --goals 300 --seed 0
"""

import argparse
import random
import time
from dataclasses import dataclass

from iotacalc.calculus import check
from iotacalc.errors import Exhausted, ResourceLimit
from iotacalc.generators import SMALL, SMALL_SECOND_ORDER, TEMPLATES, template_goal
from iotacalc.search import SearchConfig, prove
from iotacalc.semantics import SearchBounds, find_countermodel


@dataclass(frozen=True)
class SweepConfig:
    goals: int = 300
    seed: int = 0
    depth: int = 10
    max_domain: int = 2


def sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    bounds = {
        "full": SearchBounds(max_domain=cfg.max_domain, families="full"),
        "general": SearchBounds(max_domain=cfg.max_domain, families="auto"),
    }
    stats = {t: [0, 0] for t in TEMPLATES}  # proved, unproved
    counterexamples = []
    for i in range(cfg.goals):
        template = rng.choice(TEMPLATES)
        goal = template_goal(rng, SMALL if i % 2 else SMALL_SECOND_ORDER, template)
        try:
            d = prove(goal, "rl2", SearchConfig(max_depth=cfg.depth))
        except (Exhausted, ResourceLimit):
            stats[template][1] += 1
            continue
        stats[template][0] += 1
        assert check(d, "rl2", allow_cut=False).accepted
        for name, b in bounds.items():
            if find_countermodel(d.conclusion, b) is not None:
                counterexamples.append((name, str(d.conclusion)))
    return {"stats": stats, "counterexamples": counterexamples}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--goals", type=int, default=SweepConfig.goals)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--depth", type=int, default=SweepConfig.depth)
    ap.add_argument("--max-domain", type=int, default=SweepConfig.max_domain)
    args = ap.parse_args()
    cfg = SweepConfig(args.goals, args.seed, args.depth, args.max_domain)
    start = time.perf_counter()
    out = sweep(cfg)
    print(f"{'template':<20} {'proved':>7} {'unproved':>9}")
    for t, (p, u) in out["stats"].items():
        print(f"{t:<20} {p:>7} {u:>9}")
    print(f"counterexamples: {len(out['counterexamples'])}")
    for bounds, s in out["counterexamples"]:
        print(f"  [{bounds}] {s}")
    print(f"elapsed {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
