from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from muller.arena import Arena  # noqa: E402
from muller.condition import MullerCondition  # noqa: E402
from muller.players import ADAM, EVE, RANDOM  # noqa: E402
from muller.witness import build_witness  # noqa: E402
from muller.zielonka import build_zielonka_dag, build_zielonka_tree, optimal_cropped_dag  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent.parent / "data"


def recurring_condition() -> MullerCondition:
    return MullerCondition.of("abcd", ["ab", "abc", "abcd"])


def recurring_game() -> Arena:
    """The example game: Eve in the centre picks a direction, Adam answers."""
    owner = {s: EVE for s in "04789"} | {s: ADAM for s in "12356"}
    colouring = {"0": "c", "1": "d", "2": "a", "3": "b", "7": "a", "8": "b", "9": "c"}
    edges = [
        ("0", "4"), ("1", "4"), ("2", "1"), ("3", "1"),
        ("4", "2"), ("4", "3"), ("4", "5"), ("4", "6"),
        ("5", "0"), ("5", "7"), ("6", "8"), ("6", "9"),
        ("7", "4"), ("8", "4"), ("9", "4"),
    ]
    return Arena(tuple("0123456789"), owner, tuple(edges), {}, colouring, tuple("abcd"))


@pytest.fixture
def cond():
    return recurring_condition()


@pytest.fixture
def game():
    return recurring_game()


@pytest.fixture(scope="session")
def recurring_witness():
    c = recurring_condition()
    tree = build_zielonka_tree(c)
    cropped = optimal_cropped_dag(build_zielonka_dag(tree), tree)
    return cropped, build_witness(cropped, c.alphabet)


@st.composite
def arenas(draw, max_states=6, colours="abc", random_states=True, uncoloured=True):
    n = draw(st.integers(1, max_states))
    states = tuple(f"s{i}" for i in range(n))
    kinds = [EVE, ADAM, RANDOM] if random_states else [EVE, ADAM]
    owner, colouring, edges, delta = {}, {}, [], {}
    for s in states:
        owner[s] = draw(st.sampled_from(kinds))
        options = list(colours) + ([None] if uncoloured else [])
        c = draw(st.sampled_from(options))
        if c is not None:
            colouring[s] = c
        targets = draw(st.lists(st.sampled_from(states), min_size=1, max_size=3, unique=True))
        edges += [(s, t) for t in targets]
        if owner[s] is RANDOM:
            delta[s] = {t: Fraction(1, len(targets)) for t in targets}
    return Arena(states, owner, tuple(edges), delta, colouring, tuple(colours))


@st.composite
def conditions(draw, colours="abc"):
    from oracles import powerset

    family = draw(st.lists(st.sampled_from(powerset(colours)), unique=True))
    return MullerCondition.of(colours, family)
