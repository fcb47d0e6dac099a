"""Memory numbers, witness arena and synthesized strategy for F = {ab, abc, abcd}."""
import json
from pathlib import Path

from muller.arena import load_arena
from muller.condition import load_condition
from muller.solver import synthesize
from muller.verifier import check_almost_sure, check_sure_win, search_almost_sure
from muller.witness import branch_strategy, build_witness, sure_strategy
from muller.zielonka import (
    branches,
    build_zielonka_dag,
    build_zielonka_tree,
    memory_number_m,
    memory_number_mU,
    memory_number_r,
    optimal_cropped_dag,
)

DATA = Path(__file__).resolve().parent.parent / "data"


def main():
    cond = load_condition(DATA / "recurring_condition.json")
    game = load_arena(DATA / "recurring_game.json", cond.alphabet)
    tree = build_zielonka_tree(cond)
    print(f"m={memory_number_m(tree)} mU={memory_number_mU(tree, cond)} r={memory_number_r(tree)}")

    strategy = synthesize(game, cond)
    report = check_almost_sure(game, cond, strategy)
    print(f"game: {strategy.size} memory states, {report.verdict.value}")
    print(json.dumps(strategy.to_json(), indent=2, sort_keys=True))

    cropped = optimal_cropped_dag(build_zielonka_dag(tree), tree)
    w = build_witness(cropped, cond.alphabet)
    print(f"witness arena: {len(w.arena.states)} states, {len(branches(cropped))} branches")
    sigma = sure_strategy(cropped, w)
    print(f"sure strategy ({sigma.size} memory): {check_sure_win(w.arena, cond, sigma).verdict.value}")
    for b in branches(cropped):
        verdict = check_sure_win(w.arena, cond, sigma, adam=branch_strategy(cropped, b, w)).verdict
        print(f"  against branch {b}: {verdict.value}")
    search = search_almost_sure(w.arena, cond, 1)
    print(f"memoryless candidates: {search.candidates}, almost-sure: {len(search.almost_sure)}")


if __name__ == "__main__":
    main()
