"""Zielonka trees and DAGs of a Muller condition, and the memory numbers read off them.

Node labels are colour sets.  A node belongs to Eve when its label is a
winning set.  The children of a node are the maximal strict subsets of its
label that have the opposite status, sorted canonically.  Because a subtree
depends only on its label, equal labels produce equal (shared) subtrees.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .condition import MullerCondition, format_set, is_upward_closed, subsets
from .players import ADAM, EVE, Owner


@dataclass(frozen=True)
class ZielonkaTree:
    label: frozenset
    owner: Owner
    children: tuple["ZielonkaTree", ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["ZielonkaTree"]:
        """Pre-order traversal; shared subtrees are visited once per occurrence."""
        yield self
        for child in self.children:
            yield from child.walk()

    def size(self) -> int:
        return sum(1 for _ in self.walk())


def build_zielonka_tree(condition: MullerCondition) -> ZielonkaTree:
    winning = condition.winning
    memo: dict[frozenset, ZielonkaTree] = {}

    def build(label: frozenset) -> ZielonkaTree:
        if label in memo:
            return memo[label]
        wins = label in winning
        flipped = [u for u in subsets(label) if u != label and (u in winning) != wins]
        flipped.sort(key=len, reverse=True)
        maximal: list[frozenset] = []
        for u in flipped:
            if not any(u <= m for m in maximal):
                maximal.append(u)
        maximal.sort(key=condition.key)
        node = ZielonkaTree(label, EVE if wins else ADAM, tuple(build(m) for m in maximal))
        memo[label] = node
        return node

    return build(condition.colours)


def flip_owners(tree: ZielonkaTree) -> ZielonkaTree:
    other = {EVE: ADAM, ADAM: EVE}
    return ZielonkaTree(tree.label, other[tree.owner], tuple(flip_owners(c) for c in tree.children))


# -- memory numbers ---------------------------------------------------------


def memory_number_m(tree: ZielonkaTree) -> int:
    memo: dict[frozenset, int] = {}

    def m(node: ZielonkaTree) -> int:
        if node.label not in memo:
            if node.is_leaf:
                memo[node.label] = 1
            elif node.owner is ADAM:
                memo[node.label] = max(m(c) for c in node.children)
            else:
                memo[node.label] = sum(m(c) for c in node.children)
        return memo[node.label]

    return m(tree)


def memory_number_mU(tree: ZielonkaTree, condition: MullerCondition) -> int:
    """Like :func:`memory_number_m`, but a node whose restricted condition is
    upward-closed counts for a single memory state."""
    memo: dict[frozenset, int] = {}

    def m(node: ZielonkaTree) -> int:
        if node.label not in memo:
            if node.is_leaf or is_upward_closed(condition.restrict(node.label)):
                memo[node.label] = 1
            elif node.owner is ADAM:
                memo[node.label] = max(m(c) for c in node.children)
            else:
                memo[node.label] = sum(m(c) for c in node.children)
        return memo[node.label]

    return m(tree)


def _r_number(label, owner_of, children_of, memo) -> int:
    if label in memo:
        return memo[label]
    kids = children_of(label)
    if not kids:
        value = 1
    else:
        inner = [_r_number(k, owner_of, children_of, memo) for k in kids if children_of(k)]
        if owner_of(label) is ADAM:
            value = max([1, *inner])
        else:
            has_leaf = any(not children_of(k) for k in kids)
            value = sum(inner) + (1 if has_leaf else 0)
    memo[label] = value
    return value


def memory_number_r(tree: ZielonkaTree) -> int:
    """Randomised memory number: sibling leaves under an Eve node share one state."""
    index = {n.label: n for n in tree.walk()}
    return _r_number(
        tree.label,
        lambda lab: index[lab].owner,
        lambda lab: tuple(c.label for c in index[lab].children),
        {},
    )


def admits_memoryless_randomised(tree: ZielonkaTree) -> bool:
    return all(
        len(node.children) <= 1 or all(c.is_leaf for c in node.children)
        for node in tree.walk()
        if node.owner is EVE
    )


# -- DAGs -------------------------------------------------------------------


@dataclass(frozen=True)
class ZielonkaDag:
    root: frozenset
    owner: dict
    children: dict

    @property
    def nodes(self) -> tuple[frozenset, ...]:
        return tuple(self.children)

    def is_leaf(self, label) -> bool:
        return not self.children[label]


def build_zielonka_dag(tree: ZielonkaTree) -> ZielonkaDag:
    owner: dict[frozenset, Owner] = {}
    children: dict[frozenset, tuple[frozenset, ...]] = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        if node.label in children:
            continue
        owner[node.label] = node.owner
        children[node.label] = tuple(c.label for c in node.children)
        stack.extend(reversed(node.children))
    return ZielonkaDag(tree.label, owner, children)


@dataclass(frozen=True)
class CroppedDag:
    """A sub-DAG keeping every child of Eve nodes and one child of each Adam node."""

    root: frozenset
    owner: dict
    children: dict
    source: ZielonkaDag

    @property
    def nodes(self) -> tuple[frozenset, ...]:
        return tuple(self.children)

    def is_leaf(self, label) -> bool:
        return not self.children[label]

    def choices(self) -> dict:
        """The child picked at each reachable Adam node that had a choice."""
        return {
            n: kids[0]
            for n, kids in self.children.items()
            if self.owner[n] is ADAM and len(self.source.children[n]) > 1
        }


def _root_options(dag: ZielonkaDag) -> tuple[frozenset, ...]:
    if dag.owner[dag.root] is EVE or not dag.children[dag.root]:
        return (dag.root,)
    return dag.children[dag.root]


def _close(dag: ZielonkaDag, root: frozenset, chosen: dict) -> CroppedDag:
    owner = {n: dag.owner[n] for n in chosen}
    return CroppedDag(root, owner, dict(chosen), dag)


def enumerate_cropped_dags(dag: ZielonkaDag) -> Iterator[CroppedDag]:
    def grow(root, stack: list, chosen: dict):
        while stack:
            node = stack.pop()
            if node in chosen:
                continue
            kids = dag.children[node]
            if dag.owner[node] is EVE or len(kids) <= 1:
                chosen[node] = kids
                stack.extend(reversed(kids))
                continue
            for kid in kids:
                yield from grow(root, [*stack, kid], {**chosen, node: (kid,)})
            return
        yield _close(dag, root, chosen)

    for root in _root_options(dag):
        yield from grow(root, [root], {})


def cropped_number_r(cropped: CroppedDag) -> int:
    return _r_number(
        cropped.root,
        lambda lab: cropped.owner[lab],
        lambda lab: cropped.children[lab],
        {},
    )


def optimal_cropped_dag(dag: ZielonkaDag, tree: ZielonkaTree) -> CroppedDag:
    """Cropped DAG whose r-number equals the tree's: Adam nodes keep a child of maximal r."""
    index = {n.label: n for n in tree.walk()}
    memo: dict = {}

    def r(label):
        return _r_number(
            label,
            lambda lab: index[lab].owner,
            lambda lab: tuple(c.label for c in index[lab].children),
            memo,
        )

    def best(options):
        # max() keeps the first maximal element, i.e. canonical tie-breaking
        return max(options, key=r)

    root = best(_root_options(dag))
    chosen: dict = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if node in chosen:
            continue
        kids = dag.children[node]
        if dag.owner[node] is ADAM and len(kids) > 1:
            kids = (best(kids),)
        chosen[node] = kids
        stack.extend(reversed(kids))
    return _close(dag, root, chosen)


# -- branches ---------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    nodes: tuple[frozenset, ...]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def eve_nodes(self) -> tuple[frozenset, ...]:
        return self.nodes[0::2] if self.nodes else ()


def branches(cropped: CroppedDag) -> list[Branch]:
    out: list[Branch] = []

    def walk(path):
        kids = cropped.children[path[-1]]
        if not kids:
            out.append(Branch(tuple(path)))
            return
        for kid in kids:
            walk(path + [kid])

    walk([cropped.root])
    return out


def branch_class_key(cropped: CroppedDag, branch: Branch) -> tuple:
    """Prefix up to the last Eve node; branches sharing it can share one memory state."""
    if cropped.owner[branch.nodes[-1]] is ADAM:
        return branch.nodes[:-1]
    return branch.nodes


def branch_classes(cropped: CroppedDag) -> list[list[Branch]]:
    groups: dict[tuple, list[Branch]] = {}
    for b in branches(cropped):
        groups.setdefault(branch_class_key(cropped, b), []).append(b)
    return list(groups.values())


# -- export -----------------------------------------------------------------


def _label_list(label: Iterable[str], alphabet) -> list[str]:
    return [c for c in alphabet if c in label]


def tree_to_json(tree: ZielonkaTree, alphabet) -> dict:
    return {
        "label": _label_list(tree.label, alphabet),
        "owner": tree.owner.value,
        "children": [tree_to_json(c, alphabet) for c in tree.children],
    }


def tree_from_json(data: dict) -> ZielonkaTree:
    return ZielonkaTree(
        frozenset(data["label"]),
        Owner(data["owner"]),
        tuple(tree_from_json(c) for c in data["children"]),
    )


def dag_to_json(dag: ZielonkaDag | CroppedDag, alphabet) -> dict:
    return {
        "root": _label_list(dag.root, alphabet),
        "nodes": [
            {
                "label": _label_list(n, alphabet),
                "owner": dag.owner[n].value,
                "children": [_label_list(k, alphabet) for k in dag.children[n]],
            }
            for n in dag.nodes
        ],
    }


def dag_from_json(data: dict) -> ZielonkaDag:
    owner = {}
    children = {}
    for entry in data["nodes"]:
        label = frozenset(entry["label"])
        owner[label] = Owner(entry["owner"])
        children[label] = tuple(frozenset(k) for k in entry["children"])
    return ZielonkaDag(frozenset(data["root"]), owner, children)


_SHAPES = {EVE: "ellipse", ADAM: "box"}


def tree_to_dot(tree: ZielonkaTree, alphabet) -> str:
    lines = ["digraph zielonka {"]
    counter = iter(range(10**9))

    def emit(node) -> str:
        name = f"n{next(counter)}"
        lines.append(f'  {name} [label="{format_set(node.label, alphabet)}", shape={_SHAPES[node.owner]}];')
        for child in node.children:
            lines.append(f"  {name} -> {emit(child)};")
        return name

    emit(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


def dag_to_dot(dag: ZielonkaDag | CroppedDag, alphabet) -> str:
    names = {n: f"n{i}" for i, n in enumerate(dag.nodes)}
    lines = ["digraph zielonka_dag {"]
    for n in dag.nodes:
        lines.append(f'  {names[n]} [label="{format_set(n, alphabet)}", shape={_SHAPES[dag.owner[n]]}];')
    for n in dag.nodes:
        for k in dag.children[n]:
            lines.append(f"  {names[n]} -> {names[k]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
