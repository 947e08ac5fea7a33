"""Run the prover and the countermodel finder side by side on a sequent corpus.

Prints one row per sequent and a confusion table; a sequent that is both
proved and refuted would point at a soundness bug.

    python3 scripts/exclusivity.py --random 60 --depth 8
"""

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from iotacalc.corpus import INVALID, VALID, parsed
from iotacalc.errors import Exhausted, ResourceLimit
from iotacalc.generators import GenConfig, random_sequent
from iotacalc.parser import print_sequent
from iotacalc.search import SearchConfig, prove
from iotacalc.semantics import SearchBounds, find_countermodel


@dataclass(frozen=True)
class ExclusivityConfig:
    random: int = 60
    seed: int = 5
    depth: int = 8
    max_domain: int = 2
    verbose: bool = False


def classify(s, system, cfg: ExclusivityConfig) -> tuple[str, str]:
    try:
        prove(s, system, SearchConfig(max_depth=cfg.depth))
        proof = "proved"
    except Exhausted:
        proof = "exhausted"
    except ResourceLimit:
        proof = "timeout"
    if find_countermodel(s, SearchBounds(max_domain=cfg.max_domain, families="full")) is not None:
        model = "full countermodel"
    elif find_countermodel(s, SearchBounds(max_domain=cfg.max_domain, families="auto")) is not None:
        model = "general countermodel"
    else:
        model = "none found"
    return proof, model


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", type=int, default=ExclusivityConfig.random)
    ap.add_argument("--seed", type=int, default=ExclusivityConfig.seed)
    ap.add_argument("--depth", type=int, default=ExclusivityConfig.depth)
    ap.add_argument("--max-domain", type=int, default=ExclusivityConfig.max_domain)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    cfg = ExclusivityConfig(args.random, args.seed, args.depth, args.max_domain, args.verbose)

    rng = random.Random(cfg.seed)
    corpus = parsed(VALID) + parsed(INVALID)
    corpus += [(random_sequent(rng, GenConfig(depth=2)), "rl") for _ in range(cfg.random)]
    table = Counter()
    start = time.perf_counter()
    for s, system in corpus:
        proof, model = classify(s, system, cfg)
        table[proof, model] += 1
        if cfg.verbose or (proof == "proved" and model != "none found"):
            print(f"{proof:<10} {model:<21} {print_sequent(s)}")
    print(f"\n{len(corpus)} sequents in {time.perf_counter() - start:.1f}s")
    for (proof, model), n in sorted(table.items()):
        print(f"  {proof:<10} {model:<21} {n:>4}")


if __name__ == "__main__":
    main()
