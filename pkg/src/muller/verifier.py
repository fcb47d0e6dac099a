"""Exact qualitative verification of Eve strategies.

Almost-sure checking composes the arena with Eve's strategy into an MDP in
which only Adam chooses.  Eve fails to win almost surely exactly when Adam
can reach, with positive probability, an end component whose colour set is
losing: he then stays in it forever and visits all of it.  Only supports
matter for this, so support strategies are checked the same way.

Adam sees Eve's memory in the product.  That makes an ``AlmostSure``
verdict sound for any strategy, and exact whenever Eve's memory updates
are deterministic (Adam can then recompute the memory from the history).

Sure winning is the same search with every product state treated as a
choice, i.e. over strongly connected sets of the product graph.
"""
from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator

import networkx as nx

from .arena import Arena
from .condition import MullerCondition, subsets
from .players import ADAM, EVE
from .strategy import ProductMdp, StrategyTransducer, SupportStrategy, positional_moves, product, restrict_moves

DEFAULT_MAX_ENUM = 10**7


class Verdict(str, Enum):
    ALMOST_SURE = "AlmostSure"
    SURE_WIN = "SureWin"
    REFUTED = "Refuted"


class Unsupported(ValueError):
    pass


class ResourceLimit(RuntimeError):
    def __init__(self, count: int, bound: int):
        super().__init__(f"{count} candidates exceed the enumeration bound {bound} (MULLER_MAX_ENUM)")
        self.count = count
        self.bound = bound


def max_enum() -> int:
    raw = os.environ.get("MULLER_MAX_ENUM")
    return int(float(raw)) if raw else DEFAULT_MAX_ENUM


@dataclass(frozen=True)
class EndComponent:
    states: frozenset
    witness_actions: dict


@dataclass
class VerificationReport:
    verdict: Verdict
    counterexample: dict | None = None
    statistics: dict | None = None

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.REFUTED

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "counterexample": self.counterexample,
            "statistics": self.statistics,
        }


def node_name(node) -> str:
    return "|".join(map(str, node))


# -- end components ---------------------------------------------------------


def _sccs(nodes: set, succ) -> list[set]:
    graph = nx.DiGraph()
    graph.add_nodes_from(nodes)
    graph.add_edges_from((u, v) for u in nodes for v in succ[u] if v in nodes)
    return [set(c) for c in nx.strongly_connected_components(graph)]


def maximal_end_components(nodes: Iterable, succ, is_choice: Callable) -> list[frozenset]:
    """Maximal end components of the sub-MDP induced by ``nodes``.

    ``is_choice(u)`` tells whether ``u`` picks one successor (Adam) or moves
    to all of them (random).  Repeatedly drops random states with an edge
    leaving the candidate and choice states without one staying inside, then
    splits the candidate into SCCs until every candidate is one SCC.
    """
    out = []
    work = [set(nodes)]
    while work:
        cand = work.pop()
        changed = True
        while changed:
            changed = False
            for u in list(cand):
                ss = succ[u]
                if is_choice(u):
                    bad = not any(v in cand for v in ss)
                else:
                    bad = any(v not in cand for v in ss)
                if bad:
                    cand.discard(u)
                    changed = True
        if not cand:
            continue
        parts = _sccs(cand, succ)
        if len(parts) == 1:
            out.append(frozenset(cand))
        else:
            work.extend(parts)
    return out


def end_component(component: frozenset, succ, is_choice: Callable) -> EndComponent:
    actions = {u: tuple(v for v in succ[u] if v in component) for u in component if is_choice(u)}
    return EndComponent(component, actions)


def _colours(mdp: ProductMdp, nodes) -> frozenset:
    return frozenset(c for u in nodes if (c := mdp.colouring[u]) is not None)


def find_losing_component(mdp: ProductMdp, condition: MullerCondition, is_choice: Callable):
    """An end component with a losing colour set, or ``None``.

    For a losing colour set ``K``, such a component exists iff a maximal end
    component of the product restricted to states coloured in ``K`` (or
    uncoloured) carries every colour of ``K``.
    """
    present = _colours(mdp, mdp.states)
    candidates = sorted(
        (k for k in subsets(present) if k not in condition.winning),
        key=lambda k: (-len(k), condition.key(k)),
    )
    for colours in candidates:
        allowed = {u for u in mdp.states if mdp.colouring[u] is None or mdp.colouring[u] in colours}
        for comp in sorted(maximal_end_components(allowed, mdp.succ, is_choice), key=lambda c: -len(c)):
            if _colours(mdp, comp) == colours:
                return end_component(comp, mdp.succ, is_choice), colours
    return None


def _reach_strategy(mdp: ProductMdp, target: frozenset, is_choice: Callable) -> tuple[dict, dict]:
    """Backward BFS distances to ``target`` and, for choice states, a move that lowers it."""
    preds: dict = {u: [] for u in mdp.states}
    for u in mdp.states:
        for v in mdp.succ[u]:
            preds[v].append(u)
    dist = {u: 0 for u in target}
    queue = deque(target)
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    moves = {}
    for u, d in dist.items():
        if d > 0 and is_choice(u):
            moves[u] = min((v for v in mdp.succ[u] if v in dist), key=lambda v: dist[v])
    return dist, moves


def _counterexample(mdp: ProductMdp, ec: EndComponent, colours, is_choice) -> dict:
    dist, moves = _reach_strategy(mdp, ec.states, is_choice)
    order = [u for u in mdp.states if u in ec.states]
    return {
        "end_component": [node_name(u) for u in order],
        "arena_states": sorted({str(mdp.project[u]) for u in order if mdp.project[u] is not None}),
        "colours": sorted(colours),
        "from": [node_name(u) for u in mdp.initial if u in dist],
        "reach": {node_name(u): node_name(v) for u, v in moves.items()},
        "stay": {node_name(u): [node_name(v) for v in vs] for u, vs in ec.witness_actions.items()},
    }


def _fix_adam(arena: Arena, adam) -> Arena:
    if adam is None:
        return arena
    return restrict_moves(arena, positional_moves(adam))


def _eve_strategy_problem(arena: Arena, eve) -> None:
    if getattr(eve, "owner", EVE) is not EVE:
        raise ValueError("expected a strategy for Eve")


def check_almost_sure(
    arena: Arena,
    condition: MullerCondition,
    eve,
    initial_states: Iterable | None = None,
    adam: StrategyTransducer | None = None,
) -> VerificationReport:
    """Exact almost-sure check; ``adam`` optionally fixes a positional Adam strategy."""
    _eve_strategy_problem(arena, eve)
    arena = _fix_adam(arena, adam)
    mdp = product(arena, eve, initial_states)
    is_choice = lambda u: mdp.owner[u] is ADAM  # noqa: E731
    found = find_losing_component(mdp, condition, is_choice)
    stats = {"product_states": len(mdp), "memory": eve.size}
    if found is None:
        return VerificationReport(Verdict.ALMOST_SURE, None, stats)
    ec, colours = found
    return VerificationReport(Verdict.REFUTED, _counterexample(mdp, ec, colours, is_choice), stats)


def _lasso(mdp: ProductMdp, comp: frozenset) -> tuple[list, list]:
    """Stem from an initial state into ``comp`` and a cycle covering all of ``comp``."""
    parent = {u: None for u in mdp.initial}
    queue = deque(mdp.initial)
    entry = None
    while queue:
        u = queue.popleft()
        if u in comp:
            entry = u
            break
        for v in mdp.succ[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    stem = []
    u = entry
    while u is not None:
        stem.append(u)
        u = parent[u]
    stem.reverse()

    def path(a, b):
        # shortest non-empty path a -> b inside comp
        prev = {}
        q = deque([a])
        while q:
            x = q.popleft()
            for y in mdp.succ[x]:
                if y in comp and y not in prev:
                    prev[y] = x
                    if y == b:
                        steps = [y]
                        while steps[-1] != a or len(steps) == 1:
                            steps.append(prev[steps[-1]])
                            if steps[-1] == a:
                                break
                        steps.reverse()
                        return steps[1:]
                    q.append(y)
        raise AssertionError("component is not strongly connected")

    cycle = [entry]
    for target in [u for u in mdp.states if u in comp and u != entry] + [entry]:
        if target in cycle[1:] and target != entry:
            continue
        cycle.extend(path(cycle[-1], target))
    return stem, cycle


def check_sure_win(
    arena: Arena,
    condition: MullerCondition,
    eve,
    initial_states: Iterable | None = None,
    adam: StrategyTransducer | None = None,
) -> VerificationReport:
    if not arena.is_two_player:
        raise Unsupported("sure winning is only checked on arenas without random states")
    _eve_strategy_problem(arena, eve)
    arena = _fix_adam(arena, adam)
    mdp = product(arena, eve, initial_states)
    is_choice = lambda u: True  # noqa: E731
    found = find_losing_component(mdp, condition, is_choice)
    stats = {"product_states": len(mdp), "memory": eve.size}
    if found is None:
        return VerificationReport(Verdict.SURE_WIN, None, stats)
    ec, colours = found
    stem, cycle = _lasso(mdp, ec.states)
    example = _counterexample(mdp, ec, colours, is_choice)
    example["stem"] = [node_name(u) for u in stem]
    example["cycle"] = [node_name(u) for u in cycle]
    return VerificationReport(Verdict.REFUTED, example, stats)


# -- support enumeration ----------------------------------------------------


def _nonempty_subsets(items) -> list[tuple]:
    items = tuple(items)
    return [
        tuple(x for x in items if x in sub)
        for sub in sorted(subsets(items), key=lambda s: (len(s), [items.index(x) for x in items if x in s]))
        if sub
    ]


def count_support_strategies(arena: Arena, memory_size: int) -> int:
    total = 1
    for s in arena.states_of(EVE):
        total *= (2 ** len(arena.succ[s]) - 1) ** memory_size
    total *= (2**memory_size - 1) ** (len(arena.states) * memory_size)
    return total


def enumerate_support_strategies(
    arena: Arena, memory_size: int, bound: int | None = None
) -> Iterator[SupportStrategy]:
    """All support strategies with ``memory_size`` states, up to renaming of
    the non-initial memory states."""
    if memory_size < 1:
        raise ValueError("memory_size must be positive")
    bound = max_enum() if bound is None else bound
    count = count_support_strategies(arena, memory_size)
    if count > bound:
        raise ResourceLimit(count, bound)
    memory = tuple(f"m{i}" for i in range(memory_size))
    move_keys = [(s, m) for s in arena.states_of(EVE) for m in memory]
    move_options = [_nonempty_subsets(arena.succ[s]) for s, _ in move_keys]
    if memory_size == 1:
        update_keys, update_options = [], []
    else:
        update_keys = [(s, m) for s in arena.states for m in memory]
        update_options = [_nonempty_subsets(memory)] * len(update_keys)
    renamings = [
        dict(zip(memory[1:], perm)) | {memory[0]: memory[0]}
        for perm in itertools.permutations(memory[1:])
    ][1:]

    for moves in itertools.product(*move_options):
        next_move = dict(zip(move_keys, moves))
        for updates in itertools.product(*update_options):
            memory_update = dict(zip(update_keys, updates))
            if renamings and not _is_canonical(next_move, memory_update, memory, renamings):
                continue
            yield SupportStrategy(memory, memory[0], next_move, memory_update)


def _encode(next_move, memory_update, memory, rename) -> tuple:
    pos = {m: i for i, m in enumerate(memory)}
    inv = {v: k for k, v in rename.items()}
    rows = []
    for m in memory:
        src = inv[m]
        rows.append(
            (
                tuple(sorted((str(s), v) for (s, mm), v in next_move.items() if mm == src)),
                tuple(
                    sorted((str(s), tuple(sorted(pos[rename[x]] for x in v))) for (s, mm), v in memory_update.items() if mm == src)
                ),
            )
        )
    return tuple(rows)


def _is_canonical(next_move, memory_update, memory, renamings) -> bool:
    identity = {m: m for m in memory}
    mine = _encode(next_move, memory_update, memory, identity)
    return all(mine <= _encode(next_move, memory_update, memory, r) for r in renamings)


@dataclass
class LowerBoundResult:
    memory_size: int
    candidates: int
    almost_sure: list = field(default_factory=list)


def search_almost_sure(
    arena: Arena,
    condition: MullerCondition,
    memory_size: int,
    initial_states: Iterable | None = None,
    stop_at_first: bool = False,
    bound: int | None = None,
) -> LowerBoundResult:
    """Exhaustively check every support strategy of the given memory size."""
    result = LowerBoundResult(memory_size, 0)
    for candidate in enumerate_support_strategies(arena, memory_size, bound):
        result.candidates += 1
        if check_almost_sure(arena, condition, candidate, initial_states).verdict is Verdict.ALMOST_SURE:
            result.almost_sure.append(candidate)
            if stop_at_first:
                break
    return result
