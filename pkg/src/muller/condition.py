"""Muller conditions over an explicit colour alphabet.

A condition is a family of colour sets; Eve wins a play when the set of
colours seen infinitely often belongs to the family.  Colours are plain
strings and colour sets are frozensets of them.  Everything that needs a
deterministic order sorts through :meth:`MullerCondition.key`, i.e. by
position in the declared alphabet.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

ColourSet = frozenset


class ConditionError(ValueError):
    pass


def format_set(colours: Iterable[str], order: tuple[str, ...] | None = None) -> str:
    """Short human label for a colour set: ``abd`` for one-letter colours."""
    items = list(colours)
    if order is not None:
        pos = {c: i for i, c in enumerate(order)}
        items.sort(key=lambda c: pos.get(c, len(pos)))
    else:
        items.sort()
    if not items:
        return "{}"
    if all(len(c) == 1 for c in items):
        return "".join(items)
    return "{" + ",".join(items) + "}"


def subsets(colours: Iterable[str]) -> Iterator[frozenset]:
    items = list(colours)
    for k in range(len(items) + 1):
        for combo in combinations(items, k):
            yield frozenset(combo)


@dataclass(frozen=True)
class MullerCondition:
    alphabet: tuple[str, ...]
    winning: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        if not alphabet:
            raise ConditionError("colour alphabet must be non-empty")
        if len(set(alphabet)) != len(alphabet):
            raise ConditionError(f"duplicate colours in alphabet {alphabet!r}")
        members = frozenset(frozenset(u) for u in self.winning)
        full = set(alphabet)
        for u in members:
            if not u <= full:
                raise ConditionError(
                    f"winning set {sorted(u)} uses colours outside the alphabet"
                )
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "winning", members)

    @classmethod
    def of(cls, alphabet: Iterable[str], winning: Iterable[Iterable[str]]) -> "MullerCondition":
        return cls(tuple(alphabet), frozenset(frozenset(u) for u in winning))

    @property
    def colours(self) -> frozenset:
        return frozenset(self.alphabet)

    @property
    def empty_wins(self) -> bool:
        return frozenset() in self.winning

    def __contains__(self, colours) -> bool:
        return frozenset(colours) in self.winning

    def is_winning(self, colours: Iterable[str]) -> bool:
        return frozenset(colours) in self.winning

    def key(self, colours: Iterable[str]) -> tuple[int, ...]:
        """Canonical sort key: sorted alphabet positions of the members."""
        pos = self._positions
        return tuple(sorted(pos[c] for c in colours))

    @property
    def _positions(self) -> dict[str, int]:
        # recomputed cheaply; alphabets are tiny
        return {c: i for i, c in enumerate(self.alphabet)}

    def sorted_sets(self) -> list[frozenset]:
        return sorted(self.winning, key=lambda u: (len(u), self.key(u)))

    def fmt(self, colours: Iterable[str]) -> str:
        return format_set(colours, self.alphabet)

    def complement(self) -> "MullerCondition":
        everything = set(subsets(self.alphabet))
        return MullerCondition(self.alphabet, frozenset(everything - self.winning))

    def restrict(self, label: Iterable[str]) -> "MullerCondition":
        """The condition seen from inside ``label``: members that are subsets of it.

        The restricted alphabet keeps the parent order.  An empty label is
        allowed here even though public conditions need a non-empty alphabet,
        so the result for ``label == {}`` is represented specially.
        """
        label = frozenset(label)
        alphabet = tuple(c for c in self.alphabet if c in label)
        members = frozenset(u for u in self.winning if u <= label)
        return _restricted(alphabet, members)

    def to_json(self) -> dict:
        return {
            "colours": list(self.alphabet),
            "winning": [
                [c for c in self.alphabet if c in u] for u in self.sorted_sets() if u
            ],
            "empty_wins": self.empty_wins,
        }

    @classmethod
    def from_json(cls, data: dict) -> "MullerCondition":
        try:
            colours = data["colours"]
            winning = data["winning"]
        except (KeyError, TypeError) as exc:
            raise ConditionError(f"condition file needs 'colours' and 'winning': {exc}") from None
        if "empty_wins" not in data:
            raise ConditionError("condition file must state 'empty_wins' explicitly")
        empty_wins = data["empty_wins"]
        if not isinstance(empty_wins, bool):
            raise ConditionError("'empty_wins' must be true or false")
        members = {frozenset(u) for u in winning}
        if frozenset() in members and not empty_wins:
            raise ConditionError("winning lists the empty set but empty_wins is false")
        if empty_wins:
            members.add(frozenset())
        return cls(tuple(colours), frozenset(members))


def _restricted(alphabet: tuple[str, ...], members: frozenset) -> MullerCondition:
    if alphabet:
        return MullerCondition(alphabet, members)
    # the only colour set over an empty alphabet is {} itself
    cond = object.__new__(MullerCondition)
    object.__setattr__(cond, "alphabet", ())
    object.__setattr__(cond, "winning", members)
    return cond


def is_upward_closed(condition: MullerCondition) -> bool:
    """True iff every superset (within the alphabet) of a winning set wins."""
    full = condition.colours
    for u in condition.winning:
        rest = full - u
        for extra in subsets(rest):
            if (u | extra) not in condition.winning:
                return False
    return True


def all_conditions(alphabet: Iterable[str]) -> Iterator[MullerCondition]:
    """Every family of subsets of ``alphabet`` (2^(2^n) of them)."""
    alphabet = tuple(alphabet)
    universe = list(subsets(alphabet))
    for mask in range(1 << len(universe)):
        members = frozenset(u for i, u in enumerate(universe) if mask >> i & 1)
        yield MullerCondition(alphabet, members)


def load_condition(path) -> MullerCondition:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return MullerCondition.from_json(json.loads(text))


def dump_condition(condition: MullerCondition, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(condition.to_json(), fh, indent=2)
        fh.write("\n")
