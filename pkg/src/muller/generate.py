"""Seeded random arenas and conditions for differential testing and sweeps."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arena import Arena
from .condition import MullerCondition, subsets
from .players import ADAM, EVE, RANDOM


@dataclass(frozen=True)
class ArenaConfig:
    max_states: int = 6
    min_states: int = 1
    max_out: int = 3
    uncoloured: float = 0.2
    random_states: float = 0.0


def random_arena(rng: np.random.Generator, alphabet, config: ArenaConfig = ArenaConfig()) -> Arena:
    alphabet = tuple(alphabet)
    n = int(rng.integers(config.min_states, config.max_states + 1))
    states = tuple(str(i) for i in range(n))
    owner, colouring, edges, delta = {}, {}, [], {}
    for s in states:
        roll = rng.random()
        if roll < config.random_states:
            owner[s] = RANDOM
        else:
            owner[s] = EVE if rng.random() < 0.5 else ADAM
        if rng.random() >= config.uncoloured:
            colouring[s] = alphabet[int(rng.integers(len(alphabet)))]
        k = int(rng.integers(1, min(config.max_out, n) + 1))
        targets = [states[i] for i in sorted(rng.choice(n, size=k, replace=False))]
        edges += [(s, t) for t in targets]
        if owner[s] is RANDOM:
            delta[s] = {t: Fraction(1, k) for t in targets}
    return Arena(states, owner, tuple(edges), delta, colouring, alphabet)


def random_condition(rng: np.random.Generator, alphabet) -> MullerCondition:
    alphabet = tuple(alphabet)
    members = [u for u in subsets(alphabet) if rng.random() < 0.5]
    return MullerCondition(alphabet, frozenset(members))


def arena_batch(seed: int, count: int, alphabet, config: ArenaConfig = ArenaConfig()) -> list[Arena]:
    """``count`` arenas; arena ``i`` depends only on ``(seed, i)``."""
    return [random_arena(np.random.default_rng([seed, i]), alphabet, config) for i in range(count)]
