import json
from fractions import Fraction

import pytest
from hypothesis import given

from muller.arena import (
    Arena,
    NotClosed,
    NotLive,
    arena_to_dot,
    attractor,
    is_trap,
    load_arena,
    subarena,
    validate,
)
from muller.players import ADAM, EVE, RANDOM

from conftest import DATA, arenas
from oracles import attractor_fixpoint


def two_states():
    return Arena(("x", "y"), {"x": EVE, "y": ADAM}, (("x", "y"), ("y", "x")), {}, {"x": "a"}, ("a",))


def test_well_formed_arena_validates():
    assert validate(two_states()) == []


def test_support_mismatch_names_the_state():
    a = Arena(
        ("r", "x", "y"),
        {"r": RANDOM, "x": EVE, "y": EVE},
        (("r", "x"), ("r", "y"), ("x", "x"), ("y", "y")),
        {"r": {"x": Fraction(1)}},
    )
    problems = validate(a)
    assert len(problems) == 1 and "'r'" in problems[0] and "support" in problems[0]


def test_sink_and_bad_distribution_are_reported():
    a = Arena(("x", "r"), {"x": EVE, "r": RANDOM}, (("r", "x"),), {"r": {"x": "1/2"}})
    problems = validate(a)
    assert any("'x' has no successor" in p for p in problems)
    assert any("sum" in p for p in problems)


def test_colour_outside_alphabet():
    a = Arena(("x",), {"x": EVE}, (("x", "x"),), {}, {"x": "z"}, ("a",))
    assert validate(a) == ["state 'x' has colour 'z' outside the alphabet"]


def test_file_round_trip(tmp_path, game):
    loaded = load_arena(DATA / "recurring_game.json")
    assert loaded == game
    path = tmp_path / "a.json"
    path.write_text(json.dumps(game.to_json()))
    assert load_arena(path) == game


def test_random_probabilities_are_exact():
    a = Arena.from_json(
        {
            "states": [{"id": "s0", "owner": "eve", "colour": "a"}, {"id": "r0", "owner": "random", "colour": None}],
            "edges": [["s0", "r0"], ["r0", "s0"]],
            "delta": {"r0": {"s0": "1/1"}},
        }
    )
    assert a.delta["r0"]["s0"] == Fraction(1)
    assert a.alphabet == ("a",)
    assert validate(a) == []


# -- subarenas and traps ------------------------------------------------------


def test_subarena_whole_and_errors():
    r = Arena(
        ("x", "r", "y"),
        {"x": EVE, "r": RANDOM, "y": ADAM},
        (("x", "r"), ("x", "x"), ("r", "x"), ("r", "y"), ("y", "y")),
        {"r": {"x": "1/2", "y": "1/2"}},
    )
    assert subarena(r, r.states).arena == r
    with pytest.raises(NotClosed) as err:
        subarena(r, {"x", "r"})
    assert err.value.state == "r"
    sub = subarena(r, {"y"})
    assert sub.arena.states == ("y",) and sub.arena.edges == (("y", "y"),)


def test_not_live_state_is_named():
    a = Arena(("x", "y"), {"x": EVE, "y": EVE}, (("x", "y"), ("y", "y")))
    with pytest.raises(NotLive) as err:
        subarena(a, {"x"})
    assert err.value.state == "x"


@given(arenas(max_states=8))
def test_traps_are_subarenas(a):
    for player in (EVE, ADAM):
        rest = a.state_set - attractor(a, player, a.coloured_by("a")).region
        assert is_trap(a, player, rest)
        if rest:
            subarena(a, rest)


def test_trap_examples():
    a = Arena(("r", "x"), {"r": RANDOM, "x": EVE}, (("r", "x"), ("r", "r"), ("x", "r")), {"r": {"x": "1/2", "r": "1/2"}})
    assert is_trap(a, EVE, a.states)
    assert not is_trap(a, ADAM, {"r"})


# -- attractors ---------------------------------------------------------------


def test_attractor_of_nothing_is_empty(game):
    assert attractor(game, EVE, set()).region == frozenset()


def test_forced_chain():
    a = Arena(("e1", "e2", "t"), {"e1": EVE, "e2": EVE, "t": ADAM}, (("e1", "e2"), ("e2", "t"), ("t", "t")))
    res = attractor(a, EVE, {"t"})
    assert res.region == {"e1", "e2", "t"}
    assert res.strategy == {"e1": "e2", "e2": "t"}
    assert res.rank == {"t": 0, "e2": 1, "e1": 2}


def test_adam_with_an_escape_stays_out():
    a = Arena(
        ("q", "t", "o", "e"),
        {"q": ADAM, "t": EVE, "o": EVE, "e": EVE},
        (("q", "t"), ("q", "o"), ("t", "t"), ("o", "o"), ("e", "q"), ("e", "t")),
    )
    assert attractor(a, EVE, {"t"}).region == {"t", "e"}
    assert attractor_fixpoint(a, EVE, {"t"}) == {"t", "e"}


def test_random_state_needs_one_successor():
    a = Arena(
        ("r", "t", "o"),
        {"r": RANDOM, "t": EVE, "o": EVE},
        (("r", "t"), ("r", "o"), ("t", "t"), ("o", "o")),
        {"r": {"t": "1/3", "o": "2/3"}},
    )
    assert attractor(a, EVE, {"t"}).region == {"r", "t"}
    assert attractor(a, ADAM, {"t"}).region == {"r", "t"}


@given(arenas(max_states=10))
def test_attractor_matches_fixpoint(a):
    target = a.coloured_by("a")
    for player in (EVE, ADAM):
        res = attractor(a, player, target)
        assert res.region == attractor_fixpoint(a, player, target)
        assert is_trap(a, player, a.state_set - res.region)


@given(arenas(max_states=8))
def test_attractor_monotone_and_idempotent(a):
    small = a.coloured_by("a")
    large = a.coloured_by("ab")
    r_small = attractor(a, EVE, small).region
    assert r_small <= attractor(a, EVE, large).region
    assert attractor(a, EVE, r_small).region == r_small


@given(arenas(max_states=8))
def test_attractor_moves_decrease_rank(a):
    res = attractor(a, EVE, a.coloured_by("b"))
    for s, r in res.rank.items():
        if r == 0:
            continue
        if a.owner[s] is EVE:
            assert res.rank[res.strategy[s]] < r
        elif a.owner[s] is ADAM:
            assert all(res.rank[t] < r for t in a.succ[s])
        else:
            assert any(res.rank.get(t, r) < r for t in a.succ[s])


def test_dot_shapes():
    a = Arena(("x", "r", "y"), {"x": EVE, "r": RANDOM, "y": ADAM}, (("x", "r"), ("r", "y"), ("y", "x")), {"r": {"y": 1}})
    dot = arena_to_dot(a)
    assert "shape=circle" in dot and "shape=box" in dot and "shape=triangle" in dot
    assert 'label="1/1"' in dot
