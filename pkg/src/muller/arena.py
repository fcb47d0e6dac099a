"""Finite stochastic arenas: states owned by Eve, Adam or a random player.

State order is the declaration order and is the canonical order used for
tie-breaking everywhere (successor lists, attractor moves).  Random-state
probabilities are exact :class:`fractions.Fraction` values.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .players import ADAM, EVE, RANDOM, Owner

TOLERANCE = Fraction(1, 10**9)


class ArenaError(ValueError):
    pass


class NotClosed(ArenaError):
    def __init__(self, state):
        super().__init__(f"random state {state!r} has a successor outside the set")
        self.state = state


class NotLive(ArenaError):
    def __init__(self, state):
        super().__init__(f"state {state!r} has no successor inside the set")
        self.state = state


def parse_probability(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    raise ArenaError(f"cannot read probability {value!r}")


@dataclass(frozen=True)
class Arena:
    states: tuple
    owner: Mapping
    edges: tuple
    delta: Mapping = field(default_factory=dict)
    colouring: Mapping = field(default_factory=dict)
    alphabet: tuple = ()

    def __post_init__(self):
        states = tuple(self.states)
        index = {s: i for i, s in enumerate(states)}
        big = len(states)
        edges = tuple(sorted(set(map(tuple, self.edges)), key=lambda e: (index.get(e[0], big), index.get(e[1], big), str(e))))
        colouring = {s: self.colouring.get(s) for s in states}
        delta = {s: {t: parse_probability(p) for t, p in dist.items()} for s, dist in self.delta.items()}
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "owner", {s: Owner(self.owner[s]) for s in states})
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "colouring", colouring)
        object.__setattr__(self, "alphabet", tuple(self.alphabet))

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def succ(self) -> dict:
        out = {s: [] for s in self.states}
        for s, t in self.edges:
            if s in out and t in self.index:
                out[s].append(t)
        return {s: tuple(ts) for s, ts in out.items()}

    @cached_property
    def pred(self) -> dict:
        out = {s: [] for s in self.states}
        for s, t in self.edges:
            if s in self.index and t in out:
                out[t].append(s)
        return {s: tuple(ps) for s, ps in out.items()}

    @cached_property
    def state_set(self) -> frozenset:
        return frozenset(self.states)

    def states_of(self, owner: Owner) -> tuple:
        return tuple(s for s in self.states if self.owner[s] is owner)

    @property
    def is_two_player(self) -> bool:
        return not any(o is RANDOM for o in self.owner.values())

    def colour(self, state):
        return self.colouring.get(state)

    def colours_of(self, states: Iterable) -> frozenset:
        return frozenset(c for s in states if (c := self.colouring.get(s)) is not None)

    def coloured_by(self, colours: Iterable[str]) -> frozenset:
        """States whose colour lies in ``colours`` (uncoloured states never do)."""
        colours = frozenset(colours)
        return frozenset(s for s in self.states if self.colouring.get(s) in colours)

    def sorted(self, states: Iterable) -> list:
        return sorted(states, key=self.index.__getitem__)

    def restrict(self, keep: Iterable) -> "Arena":
        """Unchecked restriction to ``keep``; see :func:`subarena` for the checked one."""
        keep = frozenset(keep)
        states = tuple(s for s in self.states if s in keep)
        return Arena(
            states,
            {s: self.owner[s] for s in states},
            tuple((s, t) for s, t in self.edges if s in keep and t in keep),
            {s: d for s, d in self.delta.items() if s in keep},
            {s: self.colouring[s] for s in states},
            self.alphabet,
        )

    # -- serialisation --

    def to_json(self) -> dict:
        return {
            "colours": list(self.alphabet),
            "states": [
                {"id": s, "owner": self.owner[s].value, "colour": self.colouring.get(s)}
                for s in self.states
            ],
            "edges": [[s, t] for s, t in self.edges],
            "delta": {
                s: {t: _fraction_text(p) for t, p in self.delta[s].items()}
                for s in self.states
                if s in self.delta
            },
        }

    @classmethod
    def from_json(cls, data: dict, alphabet: Iterable[str] | None = None) -> "Arena":
        try:
            entries = data["states"]
            # ids are read as strings so they match strategy and report keys
            states = tuple(str(e["id"]) for e in entries)
            owner = {str(e["id"]): Owner(e["owner"]) for e in entries}
            colouring = {str(e["id"]): e.get("colour") for e in entries}
            edges = tuple((str(s), str(t)) for s, t in data["edges"])
            delta = {str(s): {str(t): p for t, p in d.items()} for s, d in data.get("delta", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ArenaError(f"malformed arena file: {exc!r}") from None
        if alphabet is None:
            alphabet = data.get("colours")
        if alphabet is None:
            seen = []
            for s in states:
                c = colouring[s]
                if c is not None and c not in seen:
                    seen.append(c)
            alphabet = seen
        return cls(states, owner, edges, delta, colouring, tuple(alphabet))


def _fraction_text(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def load_arena(path, alphabet=None) -> Arena:
    with open(path, encoding="utf-8") as fh:
        return Arena.from_json(json.load(fh), alphabet)


def dump_arena(arena: Arena, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(arena.to_json(), fh, indent=2)
        fh.write("\n")


def validate(arena: Arena) -> list[str]:
    """All invariant violations of ``arena``; an empty list means the arena is well formed."""
    problems: list[str] = []
    known = arena.index
    for s, t in arena.edges:
        if s not in known or t not in known:
            problems.append(f"edge ({s!r}, {t!r}) mentions an unknown state")
    alphabet = set(arena.alphabet)
    for s in arena.states:
        if not arena.succ[s]:
            problems.append(f"state {s!r} has no successor")
        c = arena.colouring.get(s)
        if c is not None and c not in alphabet:
            problems.append(f"state {s!r} has colour {c!r} outside the alphabet")
    for s in arena.states:
        if arena.owner[s] is not RANDOM:
            if s in arena.delta:
                problems.append(f"non-random state {s!r} has a probability distribution")
            continue
        dist = arena.delta.get(s)
        if dist is None:
            problems.append(f"random state {s!r} has no probability distribution")
            continue
        support = {t for t, p in dist.items() if p > 0}
        if any(p < 0 for p in dist.values()):
            problems.append(f"random state {s!r} has a negative probability")
        if support != set(arena.succ[s]):
            problems.append(
                f"random state {s!r}: support {sorted(map(str, support))} differs from successors {sorted(map(str, arena.succ[s]))}"
            )
        if abs(sum(dist.values(), Fraction(0)) - 1) > TOLERANCE:
            problems.append(f"random state {s!r}: probabilities sum to {sum(dist.values())}, not 1")
    return problems


@dataclass(frozen=True)
class SubArena:
    parent: Arena
    states: frozenset

    @cached_property
    def arena(self) -> Arena:
        return self.parent.restrict(self.states)


def subarena(arena: Arena, states: Iterable) -> SubArena:
    keep = frozenset(states)
    for s in arena.sorted(keep):
        if arena.owner[s] is RANDOM:
            if any(t not in keep for t in arena.succ[s]):
                raise NotClosed(s)
        elif not any(t in keep for t in arena.succ[s]):
            raise NotLive(s)
    return SubArena(arena, keep)


@dataclass(frozen=True)
class AttractorResult:
    region: frozenset
    strategy: dict
    rank: dict


def attractor(arena: Arena, player: Owner, target: Iterable) -> AttractorResult:
    """Positive-probability attractor of ``player`` to ``target``.

    Random states join as soon as one successor is in; opponent states when
    all of them are.  ``strategy`` maps the player's states outside the
    target to the first successor (canonical order) of strictly lower rank.
    """
    rank = {s: 0 for s in target if s in arena.index}
    waiting = {}
    for s in arena.states:
        if arena.owner[s] is not player and arena.owner[s] is not RANDOM:
            waiting[s] = len(arena.succ[s])
    frontier = list(rank)
    level = 0
    while frontier:
        level += 1
        fresh = []
        for t in frontier:
            for p in arena.pred[t]:
                if p in rank:
                    continue
                if p in waiting:
                    waiting[p] -= 1
                    if waiting[p] > 0:
                        continue
                rank[p] = level
                fresh.append(p)
        frontier = fresh
    strategy = {}
    for s, r in rank.items():
        if r > 0 and arena.owner[s] is player:
            strategy[s] = next(t for t in arena.succ[s] if rank.get(t, r) < r)
    return AttractorResult(frozenset(rank), strategy, rank)


def is_trap(arena: Arena, player: Owner, states: Iterable) -> bool:
    """True iff ``player`` cannot make the token leave ``states`` on her/his own."""
    inside = frozenset(states)
    for s in inside:
        succ = arena.succ[s]
        if arena.owner[s] is player or arena.owner[s] is RANDOM:
            if any(t not in inside for t in succ):
                return False
        elif not any(t in inside for t in succ):
            return False
    return True


_ARENA_SHAPES = {EVE: "circle", ADAM: "box", RANDOM: "triangle"}


def arena_to_dot(arena: Arena) -> str:
    names = {s: f"s{i}" for i, s in enumerate(arena.states)}
    lines = ["digraph arena {"]
    for s in arena.states:
        c = arena.colouring.get(s)
        text = f"{s}" if c is None else f"{s}\\n{c}"
        lines.append(f'  {names[s]} [label="{text}", shape={_ARENA_SHAPES[arena.owner[s]]}];')
    for s, t in arena.edges:
        if arena.owner[s] is RANDOM:
            p = arena.delta[s].get(t, 0)
            lines.append(f'  {names[s]} -> {names[t]} [label="{_fraction_text(Fraction(p))}"];')
        else:
            lines.append(f"  {names[s]} -> {names[t]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def describe_region(arena: Arena, states: Iterable) -> str:
    return "{" + ", ".join(map(str, arena.sorted(states))) + "}"

