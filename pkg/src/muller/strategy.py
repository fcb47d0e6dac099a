"""Finite-memory randomised strategies and the arena x strategy product.

Semantics (Mealy style): at time t the token is on ``s`` and the strategy
holds memory ``m``.  If ``s`` belongs to the strategy's owner the next state
is drawn from ``next_move[s, m]``; whoever owns ``s``, the new memory is
drawn from ``memory_update[s, m]`` independently.  A missing update entry
keeps the memory unchanged.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

from .arena import Arena, parse_probability
from .players import ADAM, EVE, RANDOM, Owner


class StrategyError(ValueError):
    pass


class IllegalMove(StrategyError):
    def __init__(self, state, target):
        super().__init__(f"({state!r}, {target!r}) is not an edge of the arena")
        self.state = state
        self.target = target


def _dist(mapping) -> dict:
    return {k: parse_probability(p) for k, p in mapping.items() if parse_probability(p) > 0}


@dataclass(frozen=True)
class StrategyTransducer:
    memory: tuple
    initial: Hashable
    next_move: Mapping = field(default_factory=dict)
    memory_update: Mapping = field(default_factory=dict)
    owner: Owner = EVE

    def __post_init__(self):
        memory = tuple(self.memory)
        if self.initial not in memory:
            raise StrategyError(f"initial memory {self.initial!r} is not a memory state")
        object.__setattr__(self, "memory", memory)
        object.__setattr__(self, "owner", Owner(self.owner))
        object.__setattr__(self, "next_move", {k: _dist(v) for k, v in self.next_move.items()})
        object.__setattr__(self, "memory_update", {k: _dist(v) for k, v in self.memory_update.items()})

    @property
    def size(self) -> int:
        return len(self.memory)

    def move(self, state, mem) -> dict:
        try:
            return self.next_move[state, mem]
        except KeyError:
            raise StrategyError(f"no move defined at state {state!r} with memory {mem!r}") from None

    def update(self, state, mem) -> dict:
        return self.memory_update.get((state, mem)) or {mem: Fraction(1)}

    def move_support(self, state, mem) -> tuple:
        return tuple(self.move(state, mem))

    def update_support(self, state, mem) -> tuple:
        return tuple(self.update(state, mem))

    @property
    def is_pure(self) -> bool:
        return all(len(d) == 1 for d in self.next_move.values()) and all(
            len(d) == 1 for d in self.memory_update.values()
        )

    @property
    def is_memoryless(self) -> bool:
        return len(self.memory) == 1

    def with_initial(self, mem) -> "StrategyTransducer":
        return StrategyTransducer(self.memory, mem, self.next_move, self.memory_update, self.owner)

    def to_json(self) -> dict:
        def key(s, m):
            return f"{s}|{m}"

        return {
            "owner": self.owner.value,
            "memory": [str(m) for m in self.memory],
            "initial": str(self.initial),
            "next": {key(s, m): {str(t): _text(p) for t, p in d.items()} for (s, m), d in self.next_move.items()},
            "update": {
                key(s, m): {str(n): _text(p) for n, p in d.items()}
                for (s, m), d in self.memory_update.items()
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "StrategyTransducer":
        try:
            memory = tuple(data["memory"])
            initial = data["initial"]
            raw_next = data.get("next", {})
            raw_update = data.get("update", {})
        except (KeyError, TypeError) as exc:
            raise StrategyError(f"malformed strategy file: {exc!r}") from None

        def split(key: str):
            # the memory label is the longest known suffix after a '|'
            best = None
            for m in memory:
                if key.endswith("|" + m) and (best is None or len(m) > len(best)):
                    best = m
            if best is None:
                raise StrategyError(f"key {key!r} does not end in a memory state")
            return key[: -len(best) - 1], best

        return cls(
            memory,
            initial,
            {split(k): v for k, v in raw_next.items()},
            {split(k): v for k, v in raw_update.items()},
            Owner(data.get("owner", "eve")),
        )


def _text(p: Fraction) -> str:
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


@dataclass(frozen=True)
class SupportStrategy:
    """Qualitative strategy: only which moves and updates have positive probability."""

    memory: tuple
    initial: Hashable
    next_move: Mapping = field(default_factory=dict)
    memory_update: Mapping = field(default_factory=dict)
    owner: Owner = EVE

    def __post_init__(self):
        object.__setattr__(self, "memory", tuple(self.memory))
        object.__setattr__(self, "next_move", {k: tuple(v) for k, v in self.next_move.items()})
        object.__setattr__(self, "memory_update", {k: tuple(v) for k, v in self.memory_update.items()})
        for k, v in list(self.next_move.items()) + list(self.memory_update.items()):
            if not v:
                raise StrategyError(f"empty support at {k!r}")

    @property
    def size(self) -> int:
        return len(self.memory)

    def move_support(self, state, mem) -> tuple:
        try:
            return self.next_move[state, mem]
        except KeyError:
            raise StrategyError(f"no move defined at state {state!r} with memory {mem!r}") from None

    def update_support(self, state, mem) -> tuple:
        return self.memory_update.get((state, mem)) or (mem,)


def uniformize(support: SupportStrategy) -> StrategyTransducer:
    def flat(items):
        return {x: Fraction(1, len(items)) for x in items}

    return StrategyTransducer(
        support.memory,
        support.initial,
        {k: flat(v) for k, v in support.next_move.items()},
        {k: flat(v) for k, v in support.memory_update.items()},
        support.owner,
    )


def support_of(strategy: StrategyTransducer) -> SupportStrategy:
    return SupportStrategy(
        strategy.memory,
        strategy.initial,
        {k: tuple(d) for k, d in strategy.next_move.items()},
        {k: tuple(d) for k, d in strategy.memory_update.items()},
        strategy.owner,
    )


def pure_memoryless(arena: Arena, moves: Mapping, owner: Owner = EVE) -> StrategyTransducer:
    mem = "m0"
    table = {}
    for s, t in moves.items():
        if t not in arena.succ.get(s, ()):
            raise IllegalMove(s, t)
        table[s, mem] = {t: Fraction(1)}
    return StrategyTransducer((mem,), mem, table, {}, owner)


def strategy_problems(arena: Arena, strategy) -> list[str]:
    """Moves that leave the edge relation or distributions that do not sum to one."""
    problems = []
    for (s, m), d in strategy.next_move.items():
        if m not in strategy.memory:
            problems.append(f"unknown memory {m!r} at {s!r}")
        if s not in arena.index:
            problems.append(f"unknown state {s!r}")
            continue
        if arena.owner[s] is not strategy.owner:
            problems.append(f"state {s!r} is not owned by {strategy.owner.value}")
        for t in d:
            if t not in arena.succ[s]:
                problems.append(f"move {s!r} -> {t!r} is not an edge")
        if isinstance(d, dict) and sum(d.values()) != 1:
            problems.append(f"move distribution at ({s!r}, {m!r}) sums to {sum(d.values())}")
    for (s, m), d in strategy.memory_update.items():
        for n in d:
            if n not in strategy.memory:
                problems.append(f"update at ({s!r}, {m!r}) targets unknown memory {n!r}")
        if isinstance(d, dict) and sum(d.values()) != 1:
            problems.append(f"update distribution at ({s!r}, {m!r}) sums to {sum(d.values())}")
    return problems


def restrict_moves(arena: Arena, moves: Mapping) -> Arena:
    """Arena where the owners of ``moves`` keys are bound to the given successor."""
    for s, t in moves.items():
        if t not in arena.succ.get(s, ()):
            raise IllegalMove(s, t)
    edges = tuple((s, t) for s, t in arena.edges if s not in moves or moves[s] == t)
    return Arena(arena.states, arena.owner, edges, arena.delta, arena.colouring, arena.alphabet)


def positional_moves(strategy: StrategyTransducer) -> dict:
    """State -> successor table of a pure memoryless strategy."""
    if not strategy.is_memoryless or not strategy.is_pure:
        raise StrategyError("strategy is not pure and memoryless")
    (mem,) = strategy.memory
    return {s: next(iter(d)) for (s, m), d in strategy.next_move.items() if m == mem}


# -- product ----------------------------------------------------------------


@dataclass
class ProductMdp:
    """Arena composed with a fixed Eve strategy; only Adam still chooses.

    Product states are ``(s, m)``.  When Adam moves from ``s`` while Eve's
    memory update is random, the move goes through a gadget state
    ``(s, m, t)`` owned by the random player.  ``prob`` is ``None`` for
    support-only products.
    """

    states: tuple
    owner: dict
    succ: dict
    prob: dict | None
    project: dict
    colouring: dict
    initial: tuple

    def __len__(self) -> int:
        return len(self.states)

    def edge_set(self) -> frozenset:
        return frozenset((u, v) for u, vs in self.succ.items() for v in vs)


def product(arena: Arena, eve, initial_states: Iterable | None = None) -> ProductMdp:
    exact = isinstance(eve, StrategyTransducer)
    starts = arena.states if initial_states is None else tuple(initial_states)
    initial = tuple((s, eve.initial) for s in starts)
    owner, succ, project, colouring = {}, {}, {}, {}
    prob: dict | None = {} if exact else None
    order = []
    queue = deque(initial)
    seen = set(initial)

    def visit(node):
        if node not in seen:
            seen.add(node)
            queue.append(node)

    while queue:
        node = queue.popleft()
        order.append(node)
        if len(node) == 3:
            s, m, t = node
            owner[node] = RANDOM
            project[node] = None
            colouring[node] = None
            if exact:
                dist = {(t, n): p for n, p in eve.update(s, m).items()}
            else:
                dist = {(t, n): None for n in eve.update_support(s, m)}
            succ[node] = tuple(dist)
            if exact:
                prob[node] = dist
            for v in dist:
                visit(v)
            continue
        s, m = node
        project[node] = s
        colouring[node] = arena.colouring.get(s)
        kind = arena.owner[s]
        updates = eve.update(s, m) if exact else dict.fromkeys(eve.update_support(s, m))
        if kind is ADAM:
            owner[node] = ADAM
            if len(updates) == 1:
                (n,) = updates
                succ[node] = tuple((t, n) for t in arena.succ[s])
            else:
                succ[node] = tuple((s, m, t) for t in arena.succ[s])
            for v in succ[node]:
                visit(v)
            continue
        owner[node] = RANDOM
        if kind is EVE:
            moves = eve.move(s, m) if exact else dict.fromkeys(eve.move_support(s, m))
            for t in moves:
                if t not in arena.succ[s]:
                    raise IllegalMove(s, t)
        else:
            moves = arena.delta[s]
        dist = {}
        for t, p in moves.items():
            for n, q in updates.items():
                dist[t, n] = p * q if exact else None
        succ[node] = tuple(dist)
        if exact:
            prob[node] = dist
        for v in dist:
            visit(v)
    return ProductMdp(tuple(order), owner, succ, prob, project, colouring, initial)


def load_strategy(path) -> StrategyTransducer:
    with open(path, encoding="utf-8") as fh:
        return StrategyTransducer.from_json(json.load(fh))


def dump_strategy(strategy: StrategyTransducer, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(strategy.to_json(), fh, indent=2)
        fh.write("\n")
