from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from muller.arena import Arena, is_trap, subarena
from muller.condition import MullerCondition, all_conditions
from muller.generate import arena_batch, random_condition
from muller.lar import lar_parity_oracle
from muller.players import ADAM, EVE, RANDOM
from muller.solver import (
    AlphabetMismatch,
    NotWinningEverywhere,
    _split_adam,
    solve,
    synthesize,
    synthesize_on_region,
)
from muller.strategy import pure_memoryless, support_of, uniformize
from muller.verifier import Verdict, check_almost_sure, enumerate_support_strategies
from muller.zielonka import admits_memoryless_randomised, build_zielonka_tree, memory_number_r

from conftest import arenas, conditions
from oracles import positional_adam_strategies


def test_recurring_game_is_won_everywhere(game, cond):
    result = solve(game, cond)
    assert result.eve_region == game.state_set
    assert result.adam_region == frozenset()


def test_self_loop():
    a = Arena(("x",), {"x": ADAM}, (("x", "x"),), {}, {"x": "a"}, ("a",))
    assert solve(a, MullerCondition.of("a", ["a"])).eve_region == {"x"}
    assert solve(a, MullerCondition.of("a", [])).eve_region == frozenset()


def test_alphabet_mismatch():
    a = Arena(("x",), {"x": ADAM}, (("x", "x"),), {}, {"x": "z"}, ("z",))
    with pytest.raises(AlphabetMismatch):
        solve(a, MullerCondition.of("a", ["a"]))


def test_regions_partition(game, cond):
    for c in (cond, cond.complement()):
        r = solve(game, c)
        assert r.eve_region | r.adam_region == game.state_set
        assert not r.eve_region & r.adam_region


def test_recurring_strategy_shape(game, cond):
    s = synthesize(game, cond)
    assert s.size == 2
    right, left = s.memory
    assert s.initial == right
    # one memory state plays towards the two right-hand Adam states ...
    assert set(s.move("4", right)) == {"5", "6"}
    # ... the other randomises over every move, in particular the left ones
    assert {"2", "3"} <= set(s.move("4", left))
    # seeing c switches right to left for sure; left returns with probability one half
    for c_state in ("0", "9"):
        assert s.update(c_state, right) == {left: 1}
    assert s.update("4", left) == {left: Fraction(1, 2), right: Fraction(1, 2)}
    assert check_almost_sure(game, cond, s).verdict is Verdict.ALMOST_SURE


def test_recurring_supports_uniformize_back(game, cond):
    s = synthesize(game, cond)
    u = uniformize(support_of(s))
    assert support_of(u) == support_of(s)
    assert check_almost_sure(game, cond, u).verdict is Verdict.ALMOST_SURE


def test_single_winning_loop_is_memoryless():
    a = Arena(("x",), {"x": EVE}, (("x", "x"),), {}, {"x": "a"}, ("a",))
    s = synthesize(a, MullerCondition.of("a", ["a"]))
    assert s.size == 1 and s.move("x", s.initial) == {"x": 1}


def test_not_winning_everywhere_names_a_state():
    a = Arena(("x", "y"), {"x": ADAM, "y": EVE}, (("x", "x"), ("x", "y"), ("y", "y")), {}, {"x": "a", "y": "b"}, ("a", "b"))
    with pytest.raises(NotWinningEverywhere) as err:
        synthesize(a, MullerCondition.of("ab", ["b"]))
    assert err.value.state == "x"
    region = synthesize_on_region(a, MullerCondition.of("ab", ["b"]))
    assert region.region == {"y"}


def test_random_state_with_losing_branch_is_not_won():
    # the random hub reaches a winning loop and a losing loop with positive probability
    a = Arena(
        ("hub", "win", "lose"),
        {"hub": RANDOM, "win": EVE, "lose": RANDOM},
        (("hub", "win"), ("hub", "lose"), ("win", "win"), ("lose", "lose")),
        {"hub": {"win": "1/2", "lose": "1/2"}, "lose": {"lose": 1}},
        {"win": "a", "lose": "b"},
        ("a", "b", "c"),
    )
    assert solve(a, MullerCondition.of("abc", [(), "a"])).eve_region == {"win"}


def test_lar_oracle_agrees_on_seeded_instances():
    rng = np.random.default_rng(5)
    for i, arena in enumerate(arena_batch(5, 200, "abc")):
        c = random_condition(rng, "abc")
        assert solve(arena, c).eve_region == lar_parity_oracle(arena, c), i


@settings(max_examples=150)
@given(arenas(max_states=6, random_states=False), conditions())
def test_lar_oracle_agrees(a, c):
    assert solve(a, c).eve_region == lar_parity_oracle(a, c)


@settings(max_examples=60)
@given(arenas(max_states=4), conditions())
def test_memoryless_supports_reach_exactly_the_region_when_r_is_one(a, c):
    """With r = 1 some memoryless randomised strategy wins the whole region,
    so the region is the set of states won by some memoryless support."""
    if memory_number_r(build_zielonka_tree(c)) != 1:
        return
    winners = set()
    candidates = list(enumerate_support_strategies(a, 1))
    for s in a.states:
        if any(check_almost_sure(a, c, cand, [s]).verdict is Verdict.ALMOST_SURE for cand in candidates):
            winners.add(s)
    assert solve(a, c).eve_region == winners


@settings(max_examples=60)
@given(arenas(max_states=4), conditions())
def test_region_contains_every_state_won_by_small_supports(a, c):
    region = solve(a, c).eve_region
    for cand in enumerate_support_strategies(a, 1):
        for s in a.states:
            if check_almost_sure(a, c, cand, [s]).verdict is Verdict.ALMOST_SURE:
                assert s in region


@settings(max_examples=200)
@given(arenas(max_states=6), conditions())
def test_synthesized_strategy_wins_on_region(a, c):
    tree = build_zielonka_tree(c)
    result = synthesize_on_region(a, c)
    if not result.region:
        return
    subarena(a, result.region)
    assert result.strategy.size <= memory_number_r(tree)
    if admits_memoryless_randomised(tree):
        assert result.strategy.is_memoryless
    assert check_almost_sure(result.arena, c, result.strategy).verdict is Verdict.ALMOST_SURE


@settings(max_examples=80)
@given(arenas(max_states=5, random_states=False), conditions())
def test_synthesized_strategy_beats_every_positional_adam(a, c):
    result = synthesize_on_region(a, c)
    if not result.region:
        return
    for moves in positional_adam_strategies(result.arena):
        adam = pure_memoryless(result.arena, moves, ADAM)
        assert check_almost_sure(result.arena, c, result.strategy, adam=adam).verdict is Verdict.ALMOST_SURE


@settings(max_examples=150)
@given(arenas(max_states=6), conditions())
def test_adam_node_decomposition_is_sound(a, c):
    tree = build_zielonka_tree(c)
    if tree.owner is not ADAM or tree.is_leaf:
        return
    region = solve(a, c).eve_region
    if not region:
        return
    sub = a.restrict(region)
    _, layers, leftover = _split_adam(sub, tree, None)
    assert not leftover.states
    for layer in layers:
        assert is_trap(layer.residual, ADAM, layer.trap)
        assert sub.colours_of(layer.trap) <= layer.child.label
        assert layer.child in tree.children


def test_full_three_colour_sweep_sample():
    # a slice of the exhaustive sweep run by the acceptance module
    batch = arena_batch(17, 20, "abc")
    for c in list(all_conditions("abc"))[::7]:
        r = memory_number_r(build_zielonka_tree(c))
        for a in batch:
            result = synthesize_on_region(a, c)
            if result.region:
                assert result.strategy.size <= r
                assert check_almost_sure(result.arena, c, result.strategy).ok


def test_trace_records_decomposition(game, cond):
    trace = solve(game, cond).to_json(game)["decomposition"]
    assert trace["owner"] == "eve" and trace["node"] == ["a", "b", "c", "d"]
