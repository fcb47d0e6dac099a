"""Independent cross-check for two-player Muller games.

The arena is composed with a latest appearance record (the colours ordered
by their last visit, most recent first).  Visiting colour ``c`` at position
``h`` of the record touches the set ``H`` of the first ``h + 1`` colours;
the largest position touched infinitely often spells out exactly the set of
colours seen infinitely often.  That turns the Muller condition into a
max-parity condition, solved with the classical recursive algorithm.

Nothing here is shared with the solver (attractors included) on purpose.
"""
from __future__ import annotations

from collections import deque

from .arena import Arena
from .condition import MullerCondition
from .players import EVE, RANDOM
from .verifier import Unsupported


def lar_product(arena: Arena, condition: MullerCondition):
    """Reachable LAR product: (nodes, succ, owner (0 Eve / 1 Adam), priority)."""
    start = tuple(condition.alphabet)
    succ, owner, priority = {}, {}, {}
    queue = deque((s, start) for s in arena.states)
    seen = set(queue)
    while queue:
        node = queue.popleft()
        s, record = node
        c = arena.colouring.get(s)
        if c is None:
            priority[node] = 0 if frozenset() in condition.winning else 1
            after = record
        else:
            h = record.index(c)
            touched = frozenset(record[: h + 1])
            priority[node] = 2 * (h + 1) if touched in condition.winning else 2 * (h + 1) - 1
            after = (c,) + record[:h] + record[h + 1 :]
        owner[node] = 0 if arena.owner[s] is EVE else 1
        succ[node] = [(t, after) for t in arena.succ[s]]
        for v in succ[node]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen, succ, owner, priority


def _attract(nodes: set, succ, pred, owner, player: int, target: set) -> set:
    region = set(target)
    count = {v: sum(1 for w in succ[v] if w in nodes) for v in nodes}
    queue = deque(region)
    while queue:
        w = queue.popleft()
        for v in pred[w]:
            if v not in nodes or v in region:
                continue
            if owner[v] == player:
                region.add(v)
                queue.append(v)
            else:
                count[v] -= 1
                if count[v] == 0:
                    region.add(v)
                    queue.append(v)
    return region


def solve_parity(nodes: set, succ, owner, priority) -> tuple[set, set]:
    """Max-parity, even priorities win for player 0.  Returns (W0, W1)."""
    pred: dict = {v: [] for v in nodes}
    for v in nodes:
        for w in succ[v]:
            pred[w].append(v)

    def rec(game: set) -> tuple[set, set]:
        if not game:
            return set(), set()
        top = max(priority[v] for v in game)
        p = top % 2
        tops = {v for v in game if priority[v] == top}
        a = _attract(game, succ, pred, owner, p, tops)
        sub = rec(game - a)
        if not sub[1 - p]:
            won = [set(), set()]
            won[p] = set(game)
            return won[0], won[1]
        b = _attract(game, succ, pred, owner, 1 - p, sub[1 - p])
        rest = rec(game - b)
        won = [set(), set()]
        won[p] = rest[p]
        won[1 - p] = rest[1 - p] | b
        return won[0], won[1]

    return rec(set(nodes))


def lar_parity_oracle(arena: Arena, condition: MullerCondition) -> frozenset:
    """States from which Eve wins surely (equivalently, on two-player arenas, almost surely)."""
    if any(o is RANDOM for o in arena.owner.values()):
        raise Unsupported("the LAR oracle handles two-player arenas only")
    nodes, succ, owner, priority = lar_product(arena, condition)
    eve_wins, _ = solve_parity(nodes, succ, owner, priority)
    start = tuple(condition.alphabet)
    return frozenset(s for s in arena.states if (s, start) in eve_wins)
