"""Almost-sure winning regions and randomised strategies for Muller games.

Both the region computation and the synthesis walk the Zielonka tree of the
condition.  At a node labelled ``C``:

* Adam node: Eve's region is grown from embedded traps.  For a child ``E``
  we take the largest trap for Adam avoiding colours outside ``E`` and solve
  it for the child; a non-empty Eve region there is the next trap ``A_i``,
  and its Eve attractor is peeled off.  If states remain once no child
  yields a trap, Adam wins them with positive probability; his attractor
  to them is removed and the split starts over.
* Eve node: for every child ``A`` we drop Eve's attractor to the colours
  outside ``A`` and solve the rest for the child.  Whatever Adam wins there
  he also wins in the whole game; his attractor to it is peeled off and we
  start over.

The strategy built for an Eve-everywhere game uses at most ``r_F`` memory
states: traps of an Adam node share one memory set, the non-leaf children
of an Eve node each get their own block (visited cyclically), and all leaf
children of an Eve node share a single extra state in which Eve moves
uniformly at random and leaves with probability one half per step.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .arena import Arena, attractor, is_trap
from .condition import MullerCondition
from .players import ADAM, EVE
from .strategy import StrategyTransducer
from .zielonka import ZielonkaTree, build_zielonka_tree, memory_number_r

HALF = Fraction(1, 2)
ONE = Fraction(1)


class AlphabetMismatch(ValueError):
    pass


class NotWinningEverywhere(ValueError):
    def __init__(self, state):
        super().__init__(f"Eve does not win almost-surely from {state!r}")
        self.state = state


@dataclass
class SolveResult:
    eve_region: frozenset
    adam_region: frozenset
    decomposition: dict = field(default_factory=dict)

    def to_json(self, arena: Arena) -> dict:
        return {
            "eve_region": [str(s) for s in arena.sorted(self.eve_region)],
            "adam_region": [str(s) for s in arena.sorted(self.adam_region)],
            "decomposition": _jsonable(self.decomposition, arena),
        }


def _jsonable(obj, arena):
    if isinstance(obj, dict):
        return {k: _jsonable(v, arena) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_jsonable(v, arena) for v in obj]
    if isinstance(obj, frozenset):
        if all(s in arena.index for s in obj):
            return [str(s) for s in arena.sorted(obj)]
        return [c for c in arena.alphabet if c in obj]
    return obj


def _check_alphabet(arena: Arena, condition: MullerCondition) -> None:
    if arena.alphabet and tuple(arena.alphabet) != condition.alphabet:
        raise AlphabetMismatch(
            f"arena colours {list(arena.alphabet)} differ from condition colours {list(condition.alphabet)}"
        )
    stray = arena.colours_of(arena.states) - condition.colours
    if stray:
        raise AlphabetMismatch(f"arena uses colours {sorted(stray)} missing from the condition")


def _label(node: ZielonkaTree, condition: MullerCondition) -> list[str]:
    return [c for c in condition.alphabet if c in node.label]


# -- regions ----------------------------------------------------------------


def _solve(arena: Arena, node: ZielonkaTree, trace: dict | None) -> frozenset:
    if not arena.states:
        return frozenset()
    if node.is_leaf:
        return arena.state_set if node.owner is EVE else frozenset()
    if node.owner is EVE:
        return _solve_eve(arena, node, trace)
    return _solve_adam(arena, node, trace)


def _solve_eve(arena: Arena, node: ZielonkaTree, trace: dict | None) -> frozenset:
    current = arena
    steps = []
    while current.states:
        for child in node.children:
            escape = attractor(current, EVE, current.coloured_by(node.label - child.label)).region
            rest = current.restrict(current.state_set - escape)
            lost = rest.state_set - _solve(rest, child, None)
            if lost:
                grab = attractor(current, ADAM, lost).region
                steps.append({"child": child.label, "adam_wins": lost, "removed": grab})
                current = current.restrict(current.state_set - grab)
                break
        else:
            break
    if trace is not None:
        trace.update(node=node.label, owner="eve", states=arena.state_set, removed=steps)
    return current.state_set


@dataclass
class _Layer:
    trap: frozenset
    child: ZielonkaTree
    residual: Arena
    reach: object  # AttractorResult of Eve towards the trap inside the residual


def _split_adam(arena: Arena, node: ZielonkaTree, trace: dict | None):
    """Peel embedded traps for Adam off ``arena``; returns (Eve region, layers, leftover)."""
    residual = arena
    layers: list[_Layer] = []
    while residual.states:
        for child in node.children:
            avoid = attractor(residual, ADAM, residual.coloured_by(node.label - child.label)).region
            inner = residual.restrict(residual.state_set - avoid)
            sub_trace = {} if trace is not None else None
            won = _solve(inner, child, sub_trace)
            if won:
                reach = attractor(residual, EVE, won)
                layers.append(_Layer(won, child, residual, reach))
                if trace is not None:
                    trace.setdefault("traps", []).append(
                        {"child": child.label, "trap": won, "layer": reach.region, "sub": sub_trace}
                    )
                residual = residual.restrict(residual.state_set - reach.region)
                break
        else:
            break
    region = frozenset().union(*(layer.reach.region for layer in layers))
    if trace is not None:
        trace.update(node=node.label, owner="adam", states=arena.state_set)
        trace.setdefault("traps", [])
    return region, layers, residual


def _solve_adam(arena: Arena, node: ZielonkaTree, trace: dict | None) -> frozenset:
    """Split into traps; a non-empty leftover is a trap for Eve without any
    almost-sure state, so Adam's attractor to it is removed and we split again."""
    current = arena
    removed = []
    while True:
        sub_trace = {} if trace is not None else None
        region, _, leftover = _split_adam(current, node, sub_trace)
        if not leftover.states:
            break
        grab = attractor(current, ADAM, leftover.state_set).region
        removed.append({"adam_wins": leftover.state_set, "removed": grab})
        current = current.restrict(current.state_set - grab)
    if trace is not None:
        trace.update(sub_trace)
        trace.update(states=arena.state_set, removed=removed)
    return region


def solve(arena: Arena, condition: MullerCondition) -> SolveResult:
    _check_alphabet(arena, condition)
    tree = build_zielonka_tree(condition)
    trace: dict = {}
    region = _solve(arena, tree, trace)
    if not trace:
        trace = {"node": tree.label, "owner": tree.owner.value, "states": arena.state_set}
    return SolveResult(region, arena.state_set - region, trace)


# -- synthesis --------------------------------------------------------------
#
# Internal strategies use memory 0..n-1 with initial state 0.


def _first_moves(arena: Arena) -> StrategyTransducer:
    moves = {(s, 0): {arena.succ[s][0]: ONE} for s in arena.states_of(EVE)}
    return StrategyTransducer((0,), 0, moves, {})


def _synth(arena: Arena, node: ZielonkaTree) -> StrategyTransducer:
    if not arena.states:
        return StrategyTransducer((0,), 0, {}, {})
    if node.is_leaf:
        if node.owner is ADAM:
            raise NotWinningEverywhere(arena.states[0])
        return _first_moves(arena)
    if node.owner is ADAM:
        return _synth_adam(arena, node)
    return _synth_eve(arena, node)


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise AssertionError(f"trap decomposition invariant violated: {what}")


def _synth_adam(arena: Arena, node: ZielonkaTree) -> StrategyTransducer:
    _, layers, leftover = _split_adam(arena, node, None)
    if leftover.states:
        raise NotWinningEverywhere(leftover.states[0])
    seen: set = set()
    for layer in layers:
        _require(not (layer.trap & seen), "traps overlap")
        seen |= layer.trap
        _require(is_trap(layer.residual, ADAM, layer.trap), "trap is not closed for Adam")
        _require(arena.colours_of(layer.trap) <= layer.child.label, "trap uses colours outside its child")

    subs = [_synth(arena.restrict(layer.trap), layer.child) for layer in layers]
    size = max(sub.size for sub in subs)
    moves, updates = {}, {}
    for layer, sub in zip(layers, subs):
        for s in layer.reach.region:
            eve = arena.owner[s] is EVE
            if s in layer.trap:
                for m in range(size):
                    local = m if m < sub.size else sub.initial
                    if eve:
                        moves[s, m] = sub.move(s, local)
                    upd = sub.update(s, local)
                    if upd != {m: ONE}:
                        updates[s, m] = upd
            elif eve:
                step = {layer.reach.strategy[s]: ONE}
                for m in range(size):
                    moves[s, m] = step
    return StrategyTransducer(tuple(range(size)), 0, moves, updates)


def _synth_eve(arena: Arena, node: ZielonkaTree) -> StrategyTransducer:
    inner_children = [c for c in node.children if not c.is_leaf]
    has_leaf = len(inner_children) < len(node.children)

    blocks = []
    offset = 0
    for child in inner_children:
        target = arena.coloured_by(node.label - child.label)
        reach = attractor(arena, EVE, target)
        rest = arena.restrict(arena.state_set - reach.region)
        sub = _synth(rest, child)
        blocks.append((offset, target, reach, sub))
        offset += sub.size
    leaf_state = offset if has_leaf else None
    size = offset + (1 if has_leaf else 0)

    def after(i: int) -> int:
        if i + 1 < len(blocks):
            return blocks[i + 1][0]
        return leaf_state if has_leaf else blocks[0][0]

    moves, updates = {}, {}
    for i, (start, target, reach, sub) in enumerate(blocks):
        nxt = {after(i): ONE}
        for s in arena.states:
            eve = arena.owner[s] is EVE
            for local in range(sub.size):
                m = start + local
                if s in target:
                    updates[s, m] = nxt
                    if eve:
                        moves[s, m] = {arena.succ[s][0]: ONE}
                elif s in reach.region:
                    if eve:
                        moves[s, m] = {reach.strategy[s]: ONE}
                else:
                    if eve:
                        moves[s, m] = sub.move(s, local)
                    upd = {start + n: p for n, p in sub.update(s, local).items()}
                    if upd != {m: ONE}:
                        updates[s, m] = upd
    if has_leaf:
        leave = {leaf_state: HALF, blocks[0][0]: HALF} if blocks else None
        for s in arena.states:
            if arena.owner[s] is EVE:
                succ = arena.succ[s]
                moves[s, leaf_state] = {t: Fraction(1, len(succ)) for t in succ}
            if leave:
                updates[s, leaf_state] = leave
    return StrategyTransducer(tuple(range(size)), 0, moves, updates)


def _rename(strategy: StrategyTransducer) -> StrategyTransducer:
    name = {m: f"m{m}" for m in strategy.memory}
    return StrategyTransducer(
        tuple(name[m] for m in strategy.memory),
        name[strategy.initial],
        {(s, name[m]): d for (s, m), d in strategy.next_move.items()},
        {(s, name[m]): {name[n]: p for n, p in d.items()} for (s, m), d in strategy.memory_update.items()},
        EVE,
    )


def synthesize(arena: Arena, condition: MullerCondition) -> StrategyTransducer:
    """Almost-sure strategy with at most ``r_F`` memory states.

    Eve must win from every state of ``arena``; use :func:`synthesize_on_region`
    to restrict to her winning region first.
    """
    _check_alphabet(arena, condition)
    tree = build_zielonka_tree(condition)
    region = _solve(arena, tree, None)
    missing = arena.state_set - region
    if missing:
        raise NotWinningEverywhere(arena.sorted(missing)[0])
    strategy = _rename(_synth(arena, tree))
    assert strategy.size <= memory_number_r(tree)
    return strategy


@dataclass
class RegionStrategy:
    region: frozenset
    arena: Arena
    strategy: StrategyTransducer


def synthesize_on_region(arena: Arena, condition: MullerCondition) -> RegionStrategy:
    result = solve(arena, condition)
    sub = arena.restrict(result.eve_region)
    return RegionStrategy(result.eve_region, sub, synthesize(sub, condition))
