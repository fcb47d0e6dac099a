"""Synthesize on random arenas for every condition and verify memory and almost-sure winning."""
import argparse
import time
from dataclasses import dataclass

from muller.condition import all_conditions
from muller.generate import ArenaConfig, arena_batch
from muller.lar import lar_parity_oracle
from muller.solver import solve, synthesize
from muller.verifier import Verdict, check_almost_sure
from muller.zielonka import build_zielonka_tree, memory_number_r


@dataclass
class SweepConfig:
    colours: str = "abc"
    arenas: int = 200
    seed: int = 2024
    max_states: int = 6
    random_states: float = 0.0
    oracle: bool = True


def sweep(config: SweepConfig) -> dict:
    arenas = arena_batch(
        config.seed, config.arenas, config.colours,
        ArenaConfig(max_states=config.max_states, random_states=config.random_states),
    )
    counts = {"instances": 0, "memory_exceeded": 0, "refuted": 0, "oracle_mismatch": 0}
    for cond in all_conditions(config.colours):
        r = memory_number_r(build_zielonka_tree(cond))
        for a in arenas:
            counts["instances"] += 1
            region = solve(a, cond).eve_region
            if config.oracle and config.random_states == 0 and region != lar_parity_oracle(a, cond):
                counts["oracle_mismatch"] += 1
            if not region:
                continue
            sub = a.restrict(region)
            s = synthesize(sub, cond)
            if s.size > r:
                counts["memory_exceeded"] += 1
            elif check_almost_sure(sub, cond, s).verdict is not Verdict.ALMOST_SURE:
                counts["refuted"] += 1
    return counts


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--colours", default=SweepConfig.colours)
    parser.add_argument("--arenas", type=int, default=SweepConfig.arenas)
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    parser.add_argument("--max-states", type=int, default=SweepConfig.max_states)
    parser.add_argument("--random-states", type=float, default=SweepConfig.random_states)
    parser.add_argument("--no-oracle", action="store_true")
    args = parser.parse_args()
    config = SweepConfig(args.colours, args.arenas, args.seed, args.max_states, args.random_states, not args.no_oracle)
    start = time.perf_counter()
    counts = sweep(config)
    print(config)
    for k, v in counts.items():
        print(f"{k}: {v}")
    print(f"time: {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
