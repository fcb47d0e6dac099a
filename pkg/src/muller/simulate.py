"""Monte-Carlo play of a strategy against Adam.

Each episode draws from its own generator ``default_rng([seed, i])``, so
results do not depend on how many episodes run.  The colours seen
infinitely often are estimated by the states visited in the last half of
the horizon.

An episode that made no random draw at all (pure Eve, pure Adam, no
branching at random states) is fully determined by its start state; its
outcome is reused for later episodes from the same start instead of being
replayed.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .arena import Arena
from .condition import MullerCondition
from .players import EVE, RANDOM
from .strategy import StrategyTransducer, product


class HorizonWarning(UserWarning):
    pass


@dataclass
class Episode:
    start: object
    inf_states: frozenset
    inf_colours: frozenset
    won: bool
    closed: bool


@dataclass
class SimulationStats:
    episodes: int
    horizon: int
    seed: int
    wins: int = 0
    results: list = field(default_factory=list)

    @property
    def win_rate(self) -> float | None:
        return self.wins / self.episodes if self.episodes else None

    @property
    def losses(self) -> list[Episode]:
        return [e for e in self.results if not e.won]

    def to_json(self, alphabet=()) -> dict:
        def colours(cs):
            order = list(alphabet) or sorted(cs)
            return [c for c in order if c in cs]

        return {
            "episodes": self.episodes,
            "horizon": self.horizon,
            "seed": self.seed,
            "wins": self.wins,
            "win_rate": self.win_rate,
            "unclosed_windows": sum(1 for e in self.results if not e.closed),
            "inf_colours": [colours(e.inf_colours) for e in self.results],
        }


class _Draw:
    """Samples from a finite distribution and remembers whether it had to."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.used = False

    def __call__(self, dist: dict):
        items = list(dist.items())
        if len(items) == 1:
            return items[0][0]
        self.used = True
        weights = np.array([float(p) for _, p in items])
        return items[int(self.rng.choice(len(items), p=weights / weights.sum()))][0]

    def uniform(self, options):
        options = list(options)
        if len(options) == 1:
            return options[0]
        self.used = True
        return options[int(self.rng.integers(len(options)))]


class _ReplayAdam:
    """Plays a counterexample: the listed product moves, uniform inside the end component."""

    def __init__(self, example: dict):
        self.reach = example.get("reach", {})
        self.stay = example.get("stay", {})

    def choose(self, arena: Arena, s, eve_mem, draw: _Draw):
        key = f"{s}|{eve_mem}"
        if key in self.reach:
            allowed = {self.reach[key]}
        elif key in self.stay:
            allowed = set(self.stay[key])
        else:
            return draw.uniform(arena.succ[s])
        options = [t for t in arena.succ[s] if f"{s}|{eve_mem}|{t}" in allowed or _lands(t, allowed)]
        return draw.uniform(options or arena.succ[s])


def _lands(t, allowed: set) -> bool:
    prefix = f"{t}|"
    return any(name.startswith(prefix) and name.count("|") == 1 for name in allowed)


def simulate(
    arena: Arena,
    condition: MullerCondition,
    eve: StrategyTransducer,
    adam: StrategyTransducer | dict | None = None,
    episodes: int = 1000,
    horizon: int | None = None,
    seed: int = 0,
    initial_states=None,
) -> SimulationStats:
    """Play ``episodes`` runs; episode ``i`` starts from ``starts[i % len(starts)]``.

    ``adam`` is a strategy transducer for Adam, a counterexample dict from a
    refuted verification report, or ``None`` for uniformly random moves.
    """
    starts = tuple(arena.states if initial_states is None else initial_states)
    if horizon is None:
        horizon = 10 * len(product(arena, eve, starts))
    stats = SimulationStats(episodes, horizon, seed)
    if episodes <= 0 or not starts:
        stats.episodes = max(episodes, 0)
        return stats
    replay = _ReplayAdam(adam) if isinstance(adam, dict) else None
    fixed: dict = {}
    for i in range(episodes):
        start = starts[i % len(starts)]
        if start in fixed:
            episode = fixed[start]
        else:
            draw = _Draw(np.random.default_rng([seed, i]))
            episode = _run(arena, condition, eve, adam, replay, start, horizon, draw)
            if not draw.used:
                fixed[start] = episode
        stats.results.append(episode)
        stats.wins += episode.won
    if any(not e.closed for e in stats.results):
        warnings.warn(
            "some Inf estimates are not closed under random moves; the horizon may be too short",
            HorizonWarning,
            stacklevel=2,
        )
    return stats


def _run(arena, condition, eve, adam, replay, start, horizon, draw: _Draw) -> Episode:
    s = start
    mem = eve.initial
    adam_mem = adam.initial if isinstance(adam, StrategyTransducer) else None
    cut = horizon // 2
    window = set()
    for step in range(horizon):
        if step >= cut:
            window.add(s)
        kind = arena.owner[s]
        if kind is EVE:
            t = draw(eve.move(s, mem))
        elif kind is RANDOM:
            t = draw(arena.delta[s])
        elif replay is not None:
            t = replay.choose(arena, s, mem, draw)
        elif adam is not None:
            t = draw(adam.move(s, adam_mem))
        else:
            t = draw.uniform(arena.succ[s])
        mem = draw(eve.update(s, mem))
        if adam is not None and replay is None:
            adam_mem = draw(adam.update(s, adam_mem))
        s = t
    if not window:
        window.add(s)
    colours = arena.colours_of(window)
    closed = all(
        all(t in window for t in arena.succ[u]) for u in window if arena.owner[u] is RANDOM
    )
    return Episode(start, frozenset(window), colours, colours in condition.winning, closed)
