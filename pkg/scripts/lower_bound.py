"""Check that no strategy with fewer than r memory states wins the witness arena.

Exhaustive over support strategies, so only small conditions are feasible.
"""
import argparse
from dataclasses import dataclass

from muller.condition import MullerCondition, all_conditions
from muller.solver import synthesize
from muller.verifier import ResourceLimit, Verdict, check_almost_sure, search_almost_sure
from muller.witness import build_witness
from muller.zielonka import build_zielonka_dag, build_zielonka_tree, memory_number_r, optimal_cropped_dag


@dataclass
class LowerBoundConfig:
    colours: str = "abc"
    max_states: int = 40


def check(cond: MullerCondition, config: LowerBoundConfig) -> str:
    tree = build_zielonka_tree(cond)
    r = memory_number_r(tree)
    w = build_witness(optimal_cropped_dag(build_zielonka_dag(tree), tree), cond.alphabet)
    if len(w.arena.states) > config.max_states:
        return f"r={r} skipped ({len(w.arena.states)} states)"
    strategy = synthesize(w.arena, cond)
    ok = strategy.size <= r and check_almost_sure(w.arena, cond, strategy).verdict is Verdict.ALMOST_SURE
    if r == 1:
        return f"r=1 synthesized {'ok' if ok else 'FAILED'}"
    try:
        result = search_almost_sure(w.arena, cond, r - 1, stop_at_first=True)
    except ResourceLimit as exc:
        return f"r={r} synthesized {'ok' if ok else 'FAILED'}, search over budget ({exc.count})"
    smaller = "none" if not result.almost_sure else "FOUND"
    return f"r={r} synthesized {'ok' if ok else 'FAILED'}, {result.candidates} smaller candidates, winning: {smaller}"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--colours", default=LowerBoundConfig.colours)
    parser.add_argument("--max-states", type=int, default=LowerBoundConfig.max_states)
    args = parser.parse_args()
    config = LowerBoundConfig(args.colours, args.max_states)
    for cond in all_conditions(config.colours):
        if cond.winning:
            sets = ["".join(sorted(u)) or "{}" for u in sorted(cond.winning, key=lambda u: (len(u), sorted(u)))]
            print(f"F={{{', '.join(sets)}}}: {check(cond, config)}")


if __name__ == "__main__":
    main()
