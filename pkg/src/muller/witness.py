"""Lower-bound arenas built from a cropped Zielonka DAG.

The arena walks the cropped DAG from its root towards the leaves.  Eve
picks a child at each of her nodes; the pair state ``(E, A)`` then belongs
to Adam, who either proceeds to the unique child of ``A`` or stops.
Stopping runs two gadgets: ``Pick*(E)``, in which Adam visits any subset of
``E``, and ``Pick(E - A)``, in which he visits exactly one colour outside
``A``.  Then the token returns to the root.  An Eve leaf is followed by
``Pick*`` of its label.  Only gadget states carry colours.

State names: ``E:<label>`` for Eve nodes, ``P:<E>><A>`` for pairs, and
``<context>/<gadget>:<part>`` inside gadgets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .arena import Arena
from .condition import format_set
from .players import ADAM, EVE
from .strategy import StrategyTransducer, pure_memoryless
from .zielonka import Branch, CroppedDag, branches

PICK_STAR = "PickStar"
PICK = "Pick"


class EmptyChoice(ValueError):
    pass


class BranchMismatch(ValueError):
    pass


@dataclass
class Gadget:
    """A fragment of Adam states between ``entry`` and ``exit``."""

    kind: str
    colours: tuple
    entry: str
    exit: str
    states: list
    edges: list
    colouring: dict
    # Pick*: per colour (visit state, skip state); Pick: per colour the coloured state
    slots: list = field(default_factory=list)


def build_pick_star(colours: Iterable[str], prefix: str = "") -> Gadget:
    """Chain of visit/skip choices, one per colour, in the given order.

    ``2|C| + 2`` states; the entry-to-exit paths realise every subset of ``C``.
    """
    colours = tuple(colours)
    entry, exit_ = f"{prefix}S*:in", f"{prefix}S*:out"
    states, edges, colouring, slots = [entry], [], {}, []
    previous = [entry]
    for c in colours:
        visit, skip = f"{prefix}S*:{c}", f"{prefix}S*:{c}~skip"
        states += [visit, skip]
        colouring[visit] = c
        edges += [(p, t) for p in previous for t in (visit, skip)]
        slots.append((visit, skip))
        previous = [visit, skip]
    states.append(exit_)
    edges += [(p, exit_) for p in previous]
    return Gadget(PICK_STAR, colours, entry, exit_, states, edges, colouring, slots)


def build_pick(colours: Iterable[str], prefix: str = "") -> Gadget:
    """One-of-``D`` branch: ``|D| + 2`` states, every path visits exactly one colour."""
    colours = tuple(colours)
    if not colours:
        raise EmptyChoice("Pick needs at least one colour")
    entry, exit_ = f"{prefix}S:in", f"{prefix}S:out"
    states, edges, colouring, slots = [entry], [], {}, []
    for c in colours:
        s = f"{prefix}S:{c}"
        states.append(s)
        colouring[s] = c
        edges += [(entry, s), (s, exit_)]
        slots.append(s)
    states.append(exit_)
    return Gadget(PICK, colours, entry, exit_, states, edges, colouring, slots)


def gadget_paths(gadget: Gadget) -> list[tuple]:
    """All entry-to-exit paths (gadgets are acyclic)."""
    succ: dict = {}
    for s, t in gadget.edges:
        succ.setdefault(s, []).append(t)
    out = []

    def walk(path):
        if path[-1] == gadget.exit:
            out.append(tuple(path))
            return
        for t in succ.get(path[-1], ()):
            walk(path + [t])

    walk([gadget.entry])
    return out


def visit_sets(gadget: Gadget) -> set[frozenset]:
    return {frozenset(gadget.colouring[s] for s in p if s in gadget.colouring) for p in gadget_paths(gadget)}


@dataclass
class WitnessArena:
    arena: Arena
    root_state: str
    eve_nodes: dict  # Eve node label -> state
    pair_states: dict  # (Eve label, Adam label) -> state
    gadget_index: dict  # gadget state -> (kind, context)
    stops: dict = field(default_factory=dict)  # pair -> (Pick*, Pick) gadgets
    leaf_gadgets: dict = field(default_factory=dict)  # Eve leaf label -> Pick* gadget
    alphabet: tuple = ()

    def sidecar(self) -> dict:
        fmt = lambda lab: [c for c in self.alphabet if c in lab]  # noqa: E731
        return {
            "root": self.root_state,
            "eve_nodes": [{"label": fmt(n), "state": s} for n, s in self.eve_nodes.items()],
            "pair_states": [
                {"eve": fmt(e), "adam": fmt(a), "state": s} for (e, a), s in self.pair_states.items()
            ],
            "gadgets": {s: {"kind": k, "context": c} for s, (k, c) in self.gadget_index.items()},
        }


def _name(label, alphabet) -> str:
    return format_set(label, alphabet)


def build_witness(cropped: CroppedDag, alphabet: Iterable[str] | None = None) -> WitnessArena:
    alphabet = tuple(alphabet) if alphabet is not None else tuple(sorted(cropped.root))
    order = {c: i for i, c in enumerate(alphabet)}

    def ordered(label):
        return tuple(sorted(label, key=order.__getitem__))

    if cropped.owner[cropped.root] is ADAM:
        # only possible when no colour set wins: a single losing loop
        state = f"A:{_name(cropped.root, alphabet)}"
        arena = Arena((state,), {state: ADAM}, ((state, state),), {}, {}, alphabet)
        return WitnessArena(arena, state, {}, {}, {}, alphabet=alphabet)

    eve_labels = [n for n in cropped.nodes if cropped.owner[n] is EVE]
    eve_nodes = {n: f"E:{_name(n, alphabet)}" for n in eve_labels}
    root_state = eve_nodes[cropped.root]
    states = list(eve_nodes.values())
    owner = {s: EVE for s in states}
    edges: list = []
    colouring: dict = {}
    gadget_index: dict = {}
    pair_states: dict = {}
    stops: dict = {}
    leaf_gadgets: dict = {}

    def add_gadget(g: Gadget, context: str) -> None:
        states.extend(g.states)
        for s in g.states:
            owner[s] = ADAM
            gadget_index[s] = (g.kind, context)
        edges.extend(g.edges)
        colouring.update(g.colouring)

    for e in eve_labels:
        for a in cropped.children[e]:
            s = f"P:{_name(e, alphabet)}>{_name(a, alphabet)}"
            pair_states[e, a] = s
            states.append(s)
            owner[s] = ADAM

    for e in eve_labels:
        kids = cropped.children[e]
        if not kids:
            g = build_pick_star(ordered(e), f"{eve_nodes[e]}/")
            add_gadget(g, eve_nodes[e])
            leaf_gadgets[e] = g
            edges += [(eve_nodes[e], g.entry), (g.exit, root_state)]
            continue
        for a in kids:
            pair = pair_states[e, a]
            edges.append((eve_nodes[e], pair))
            below = cropped.children[a]
            if below:
                edges.append((pair, eve_nodes[below[0]]))
            star = build_pick_star(ordered(e), f"{pair}/")
            pick = build_pick(ordered(e - a), f"{pair}/")
            add_gadget(star, pair)
            add_gadget(pick, pair)
            stops[e, a] = (star, pick)
            edges += [(pair, star.entry), (star.exit, pick.entry), (pick.exit, root_state)]

    arena = Arena(tuple(states), owner, tuple(edges), {}, colouring, alphabet)
    return WitnessArena(arena, root_state, eve_nodes, pair_states, gadget_index, stops, leaf_gadgets, alphabet)


# -- strategies ---------------------------------------------------------------


def _branch_pairs(branch: Branch) -> list[tuple]:
    """(E_i, A_i) for every Eve node of the branch that has a chosen child."""
    nodes = branch.nodes
    return [(nodes[i], nodes[i + 1]) for i in range(0, len(nodes) - 1, 2)]


def sure_strategy(cropped: CroppedDag, witness: WitnessArena) -> StrategyTransducer:
    """Eve follows the branch held in memory and moves to the next sibling after a stop."""
    arena = witness.arena
    if not witness.eve_nodes:
        return StrategyTransducer(("b0",), "b0", {}, {})
    bs = branches(cropped)
    names = [f"b{i}" for i in range(len(bs))]
    moves: dict = {}
    updates: dict = {}
    for b, mem in zip(bs, names):
        follow = dict(_branch_pairs(b))
        for e, state in witness.eve_nodes.items():
            if e in follow:
                moves[state, mem] = {witness.pair_states[e, follow[e]]: Fraction(1)}
            else:
                moves[state, mem] = {arena.succ[state][0]: Fraction(1)}
        for i, (e, a) in enumerate(_branch_pairs(b)):
            kids = cropped.children[e]
            if len(kids) <= 1:
                continue
            sibling = kids[(kids.index(a) + 1) % len(kids)]
            prefix = b.nodes[: 2 * i + 1] + (sibling,)
            target = next(j for j, other in enumerate(bs) if other.nodes[: len(prefix)] == prefix)
            star, _ = witness.stops[e, a]
            updates[star.entry, mem] = {names[target]: Fraction(1)}
    return StrategyTransducer(tuple(names), names[0], moves, updates)


def branch_strategy(cropped: CroppedDag, branch: Branch, witness: WitnessArena) -> StrategyTransducer:
    """Positional Adam strategy punishing every deviation from ``branch``."""
    if branch not in branches(cropped):
        raise BranchMismatch(f"{branch!r} is not a branch of the cropped DAG")
    arena = witness.arena
    moves = {s: arena.succ[s][0] for s in arena.states_of(ADAM)}

    def steer(star: Gadget, pick: Gadget | None, visit: frozenset) -> None:
        for c, (on, off) in zip(star.colours, star.slots):
            chosen = on if c in visit else off
            for p, t in star.edges:
                if t == chosen:
                    moves[p] = t
        if pick is not None:
            d = next(c for c in pick.colours if c in visit)
            moves[pick.entry] = pick.slots[pick.colours.index(d)]

    pairs = _branch_pairs(branch)
    last = branch.nodes[-1]
    for i, (e, a_i) in enumerate(pairs):
        for a in cropped.children[e]:
            pair = witness.pair_states[e, a]
            star, pick = witness.stops[e, a]
            if a != a_i:
                moves[pair] = star.entry
                steer(star, pick, a_i)
            elif cropped.children[a]:
                moves[pair] = witness.eve_nodes[cropped.children[a][0]]
            else:
                moves[pair] = star.entry
                steer(star, pick, e)
    if cropped.owner[last] is EVE and not cropped.children[last]:
        steer(witness.leaf_gadgets[last], None, last)
    return pure_memoryless(arena, moves, ADAM)


def traversal_colours(witness: WitnessArena, play: list) -> list[frozenset]:
    """Split a finite play at root visits and return each traversal's colour set."""
    out, current, started = [], set(), False
    for s in play:
        if s == witness.root_state:
            if started:
                out.append(frozenset(current))
            current, started = set(), True
        elif started and (c := witness.arena.colouring.get(s)) is not None:
            current.add(c)
    return out


def dump_witness(witness: WitnessArena, arena_path, sidecar_path) -> None:
    with open(arena_path, "w", encoding="utf-8") as fh:
        json.dump(witness.arena.to_json(), fh, indent=2)
        fh.write("\n")
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(witness.sidecar(), fh, indent=2)
        fh.write("\n")
