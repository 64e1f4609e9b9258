"""Collecting green and blue edges by pushing non-tree edges up the tree.

Every node first learns the labels of its non-tree neighbours, then runs
``record_non_tree_edge`` on each of its own non-tree edges and forwards the
survivors to its parent. A node that sees both endpoints inside its own
subtree drops the edge, so each edge travels from each endpoint to the
nearest common ancestor and no further.

Along the way a node keeps

* ``cge``: per child, the cheapest edge leaving that child's subtree and this
  node's subtree (green in this node's recovery graph);
* ``pbe``: per sibling, the cheapest edge between its own subtree and that
  sibling's (blue in the parent's recovery graph);
* ``link_best``: the cheapest edge leaving its own subtree, used when the
  tree link to the parent fails.

"Cheapest" means the smallest fixed green weight, ties broken by the sorted
endpoint pair.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Sequence

from .errors import ProtocolError
from .labeling import Interval, contains
from .sim import Kind, Message, SimNetwork, SimStats

if TYPE_CHECKING:
    from .protocol import NodeActor


@dataclass(frozen=True)
class NonTreeEdgeMsg:
    p1: int
    p2: int
    cost: float
    fixed_green_weight: float
    sender: int
    p1_label: Interval
    p2_label: Interval


@dataclass(frozen=True)
class EdgeEntry:
    """A stored edge, oriented so ``inside`` is the endpoint on the keeper's side."""

    inside: int
    outside: int
    cost: float
    fgw: float

    @property
    def rank(self) -> tuple[float, int, int]:
        return self.fgw, min(self.inside, self.outside), max(self.inside, self.outside)


def fixed_green_weight(u: int, v: int, cost: float, dist: Sequence[float]) -> float:
    """Distance-to-sink of ``u`` + edge cost + distance-to-sink of ``v``.

    Independent of which failed node the edge later helps, so it can travel
    with the edge and be reduced locally by whoever uses it.
    """
    return dist[u] + cost + dist[v]


def _offer(store: dict[int, EdgeEntry], key: int, entry: EdgeEntry) -> None:
    old = store.get(key)
    if old is None or entry.rank < old.rank:
        store[key] = entry


def edge_is_blue_for_parent(node: NodeActor, msg: NonTreeEdgeMsg) -> bool:
    if node.parent is None:
        return False
    own = (node.start, node.end)
    in1, in2 = contains(own, msg.p1_label), contains(own, msg.p2_label)
    if in1 == in2:
        return False
    other = msg.p2_label if in1 else msg.p1_label
    return contains(node.parent_interval, other) and other != node.parent_interval


def _sibling_of(node: NodeActor, label: Interval) -> int:
    for sib, iv in node.sibling_intervals.items():
        if contains(iv, label):
            return sib
    raise ProtocolError("label inconsistency")


def record_non_tree_edge(node: NodeActor, msg: NonTreeEdgeMsg) -> NonTreeEdgeMsg | None:
    """Update this node's stores; return the message to forward, if any."""
    own = (node.start, node.end)
    in1, in2 = contains(own, msg.p1_label), contains(own, msg.p2_label)
    if in1 and in2:
        return None
    if in1:
        entry, outside_label = EdgeEntry(msg.p1, msg.p2, msg.cost, msg.fixed_green_weight), msg.p2_label
    else:
        entry, outside_label = EdgeEntry(msg.p2, msg.p1, msg.cost, msg.fixed_green_weight), msg.p1_label
    if msg.sender != node.id:
        _offer(node.cge, msg.sender, entry)
    if node.link_best is None or entry.rank < node.link_best.rank:
        node.link_best = entry
    # no recovery graph exists for the sink, so its children keep no blue edges
    if node.parent != node.sink and edge_is_blue_for_parent(node, msg):
        _offer(node.pbe, _sibling_of(node, outside_label), entry)
    if node.parent is None:
        return None
    return replace(msg, sender=node.id)


# -- handlers ------------------------------------------------------------------

def start_collection(node: NodeActor, net: SimNetwork) -> None:
    for v in node.non_tree_neighbors:
        net.send(Message(node.id, v, Kind.LABEL, (node.start, node.end)))
    if not node.non_tree_neighbors:
        node.bootstrapped = True


def on_neighbor_label(node: NodeActor, net: SimNetwork, msg: Message) -> None:
    node.neighbor_labels[msg.src] = msg.payload
    if len(node.neighbor_labels) == len(node.non_tree_neighbors):
        _bootstrap(node, net)


def _bootstrap(node: NodeActor, net: SimNetwork) -> None:
    own = (node.start, node.end)
    for v in node.non_tree_neighbors:
        c = node.neighbor_cost[v]
        msg = NonTreeEdgeMsg(
            p1=node.id, p2=v, cost=c,
            fixed_green_weight=node.dist + c + node.neighbor_dist[v],
            sender=node.id, p1_label=own, p2_label=node.neighbor_labels[v],
        )
        _forward(node, net, record_non_tree_edge(node, msg))
    node.bootstrapped = True


def on_edge(node: NodeActor, net: SimNetwork, msg: Message) -> None:
    node.edges_received += 1
    _forward(node, net, record_non_tree_edge(node, msg.payload))


def _forward(node: NodeActor, net: SimNetwork, msg: NonTreeEdgeMsg | None) -> None:
    if msg is not None:
        net.send(Message(node.id, node.parent, Kind.EDGE, msg))


def collect_non_tree_edges(net: SimNetwork, shuffle: bool = False) -> SimStats:
    """Start collection at every node and run to quiescence.

    With ``shuffle`` the start order is a permutation drawn from the
    network's seeded generator.
    """
    order = list(range(len(net.actors)))
    if shuffle:
        net.rng.shuffle(order)
    for v in order:
        net.kick(v, ("collect",))
    stats = net.run_until_quiescent()
    if not all(a.bootstrapped for a in net.actors):
        raise ProtocolError("edge collection did not finish")
    return stats


def predicted_edge_messages(tree, edges) -> int:
    """Sum over non-tree edges of tree hops from each endpoint to their NCA."""
    depth = [0] * tree.n
    order = [tree.root]
    for v in order:
        for c in tree.children[v]:
            depth[c] = depth[v] + 1
            order.append(c)
    total = 0
    for u, v, _ in edges:
        if tree.parent[u] == v or tree.parent[v] == u:
            continue
        a, b = u, v
        while a != b:
            if depth[a] >= depth[b]:
                a = tree.parent[a]
            else:
                b = tree.parent[b]
            total += 1
    return total
