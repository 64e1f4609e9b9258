"""Distributed DFS interval labels over the shortest-path tree.

Three phases run back to back without any global clock:

* wake: the root wakes its children, who wake theirs;
* count: leaves report subtree size 1, inner nodes report ``1 + sum`` once
  every child has answered;
* allocation: the root takes ``[1, 2n]`` and each node hands its children
  consecutive sub-intervals of width ``2 * subtree size`` in ascending id
  order, starting one past its own start label.

Each allocation message also carries the parent's interval and the
recipient's siblings' intervals, which the edge propagation needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import ProtocolError
from .graph import ShortestPathTree
from .sim import Kind, Message, SimNetwork, SimStats

if TYPE_CHECKING:
    from .protocol import NodeActor

Interval = tuple[int, int]


@dataclass
class DfsLabels:
    start: list[int]
    end: list[int]

    def interval(self, v: int) -> Interval:
        return self.start[v], self.end[v]

    def dump(self) -> str:
        return "".join(f"{v} {a} {b}\n" for v, (a, b) in enumerate(zip(self.start, self.end)))


@dataclass(frozen=True)
class Allocation:
    interval: Interval
    parent_interval: Interval
    siblings: tuple[tuple[int, int, int], ...]  # (sibling id, start, end)


def contains(outer: Interval, inner: Interval) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def is_descendant(labels: DfsLabels, u: int, v: int) -> bool:
    """True iff ``u`` lies in the subtree of ``v`` (reflexive)."""
    return labels.start[v] <= labels.start[u] and labels.end[u] <= labels.end[v]


def centralized_labels(tree: ShortestPathTree) -> DfsLabels:
    """Sequential DFS with ascending child order; one label on entry, one on exit."""
    start = [0] * tree.n
    end = [0] * tree.n
    clock = 0
    stack: list[tuple[int, int]] = [(tree.root, 0)]
    while stack:
        v, i = stack.pop()
        if i == 0:
            clock += 1
            start[v] = clock
        kids = sorted(tree.children[v])
        if i < len(kids):
            stack.append((v, i + 1))
            stack.append((kids[i], 0))
        else:
            clock += 1
            end[v] = clock
    return DfsLabels(start, end)


# -- handlers ------------------------------------------------------------------

def on_wake(node: NodeActor, net: SimNetwork) -> None:
    if node.awake:
        raise ProtocolError(f"node {node.id} woken twice")
    node.awake = True
    if node.children:
        for c in node.children:
            net.send(Message(node.id, c, Kind.WAKE))
    else:
        _subtree_counted(node, net)


def on_count(node: NodeActor, net: SimNetwork, msg: Message) -> None:
    node.child_sizes[msg.src] = msg.payload
    if len(node.child_sizes) == len(node.children):
        _subtree_counted(node, net)


def _subtree_counted(node: NodeActor, net: SimNetwork) -> None:
    node.size = 1 + sum(node.child_sizes.values())
    if node.parent is None:
        _allocate(node, net, (1, 2 * node.size))
    else:
        net.send(Message(node.id, node.parent, Kind.COUNT, node.size, is_reply=True))


def on_alloc(node: NodeActor, net: SimNetwork, msg: Message) -> None:
    alloc: Allocation = msg.payload
    node.parent_interval = alloc.parent_interval
    node.sibling_intervals = {sib: (a, b) for sib, a, b in alloc.siblings}
    _allocate(node, net, alloc.interval)


def _allocate(node: NodeActor, net: SimNetwork, interval: Interval) -> None:
    lo, hi = interval
    node.start, node.end = lo, hi
    cursor = lo + 1
    for c in node.children:
        width = 2 * node.child_sizes[c]
        node.child_intervals[c] = (cursor, cursor + width - 1)
        cursor += width
    if cursor > hi:
        raise ProtocolError("count corruption")
    for c in node.children:
        sibs = tuple((o, *node.child_intervals[o]) for o in node.children if o != c)
        net.send(Message(node.id, c, Kind.ALLOC, Allocation(node.child_intervals[c], interval, sibs)))


def run_wake_and_label(net: SimNetwork, root: int) -> tuple[DfsLabels, SimStats]:
    """Run all three phases from ``root`` to quiescence.

    Phase message counts are ``stats.sent['WAKE' | 'COUNT' | 'ALLOC']``.
    """
    net.kick(root, ("wake",))
    stats = net.run_until_quiescent()
    return collect_labels(net), stats


def collect_labels(net: SimNetwork) -> DfsLabels:
    start = [a.start for a in net.actors]
    end = [a.end for a in net.actors]
    if any(v is None for v in start):
        raise ProtocolError("labeling incomplete")
    return DfsLabels(start, end)
