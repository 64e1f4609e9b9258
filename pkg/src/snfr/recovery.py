"""Recovery routes around a failed node, computed by the node itself.

Node ``x`` runs Dijkstra over its recovery graph: one vertex per child plus
a vertex standing for the sink. Green arcs (child to sink) come from ``x``'s
own ``cge`` store; blue arcs (child to child) live at the children and are
fetched with one request the moment a child's distance becomes final.

Priority ties are broken by child id; equal-distance relaxations keep the
predecessor with the smaller id, the sink vertex counting as -1.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable

from .errors import GraphError, ProtocolError
from .graph import ShortestPathTree, tree_path
from .propagation import EdgeEntry
from .sim import Kind, Message, SimNetwork, SimStats

if TYPE_CHECKING:
    from .protocol import NodeActor

SINK = -1
Witness = tuple[int, int]


@dataclass
class RecoveryEntry:
    failed: int
    child: int
    cost: float
    hop_chain: list[Witness]  # blue witnesses, then one green witness
    path: list[int]


@dataclass
class RecoveryTable:
    failed: int
    entries: dict[int, RecoveryEntry] = field(default_factory=dict)


@dataclass
class LinkRecovery:
    node: int
    parent: int
    cost: float
    witness: Witness
    path: list[int]


@dataclass
class RecoveryRunStats:
    extract_min: int = 0
    relaxations: int = 0
    arcs: int = 0
    fetched: list[int] = field(default_factory=list)


def blue_weight_from_green(fgw: float, d_s_w: float, cost_w_wu: float, cost_w_wv: float) -> float:
    """Length of the detour between two sibling subtrees below ``w``."""
    bw = fgw - (2 * d_s_w + cost_w_wu + cost_w_wv)
    if bw < 0:
        raise ProtocolError("weight inconsistency")
    return bw


class _Conversation:
    """State ``x`` keeps while computing its recovery routes."""

    def __init__(self, node: NodeActor):
        self.best: dict[int, tuple[float, int]] = {}
        self.witness: dict[int, Witness] = {}
        self.chain: dict[int, list[Witness]] = {}
        self.settled: set[int] = set()
        self.heap: list[tuple[float, int]] = []
        self.stats = RecoveryRunStats()
        for c in node.children:
            g = node.cge.get(c)
            if g is None:
                self.best[c] = (math.inf, SINK)
            else:
                self.best[c] = (g.fgw - (node.dist + node.neighbor_cost[c]), SINK)
                self.witness[c] = (g.inside, g.outside)
                self.stats.arcs += 1
            heapq.heappush(self.heap, (self.best[c][0], c))


def start_recovery(node: NodeActor, net: SimNetwork) -> None:
    if node.parent is None:
        raise ProtocolError("sink cannot fail")
    node.conversation = _Conversation(node)
    _step(node, net)


def _step(node: NodeActor, net: SimNetwork) -> None:
    conv = node.conversation
    while conv.heap:
        d, c = heapq.heappop(conv.heap)
        if c in conv.settled or d != conv.best[c][0]:
            continue
        if d == math.inf:
            raise ProtocolError(f"graph not biconnected for {node.id}")
        conv.settled.add(c)
        conv.stats.extract_min += 1
        pred = conv.best[c][1]
        conv.chain[c] = [conv.witness[c]] + (conv.chain[pred] if pred != SINK else [])
        conv.stats.fetched.append(c)
        net.send(Message(node.id, c, Kind.BLUE_REQ))
        return
    node.recovered = {c: (conv.best[c][0], conv.chain[c]) for c in node.children}
    node.recovery_stats = conv.stats
    node.conversation = None


def on_blue_request(node: NodeActor, net: SimNetwork, msg: Message) -> None:
    items = tuple(sorted(node.pbe.items()))
    net.send(Message(node.id, msg.src, Kind.BLUE_RESP, items, is_reply=True))


def on_blue_response(node: NodeActor, net: SimNetwork, msg: Message) -> None:
    conv = node.conversation
    if conv is None:
        node.fetched[msg.src] = list(msg.payload)
        return
    p = msg.src
    dp = conv.best[p][0]
    sib: int
    entry: EdgeEntry
    for sib, entry in msg.payload:
        conv.stats.arcs += 1
        if sib in conv.settled:
            continue
        conv.stats.relaxations += 1
        bw = blue_weight_from_green(entry.fgw, node.dist, node.neighbor_cost[p], node.neighbor_cost[sib])
        cand = (dp + bw, p)
        if cand < conv.best[sib]:
            conv.best[sib] = cand
            # the sibling walks out through its own endpoint first
            conv.witness[sib] = (entry.outside, entry.inside)
            heapq.heappush(conv.heap, (cand[0], sib))
    _step(node, net)


# -- paths ---------------------------------------------------------------------

def _child_below(tree: ShortestPathTree, failed: int, v: int) -> int:
    while tree.parent[v] is not None and tree.parent[v] != failed:
        v = tree.parent[v]
    if tree.parent[v] != failed:
        raise GraphError(f"node {v} is not below failed node {failed}")
    return v


def expand_path(tree: ShortestPathTree, failed: int, child: int, hop_chain: list[Witness]) -> list[int]:
    """Physical walk from ``child`` to the sink that follows ``hop_chain``.

    Each witness ``(u, v)`` is entered by walking down the tree from the
    current subtree root to ``u``; after crossing to ``v`` the walk climbs to
    the next sibling (blue) or all the way to the sink (green).
    """
    if not hop_chain:
        raise GraphError("empty hop chain")
    walk = [child]
    root = child
    for i, (u, v) in enumerate(hop_chain):
        walk.extend(reversed(tree_path(tree, u, root)[:-1]))
        if i == len(hop_chain) - 1:
            if tree.is_ancestor(failed, v):
                raise GraphError(f"green witness ({u}, {v}) does not leave the subtree of {failed}")
            walk.extend(tree_path(tree, v, tree.root))
        else:
            root = _child_below(tree, failed, v)
            walk.extend(tree_path(tree, v, root))
    return walk


def _build_table(tree: ShortestPathTree, x: int, routes: dict[int, tuple[float, list[Witness]]]) -> RecoveryTable:
    table = RecoveryTable(x)
    for c, (cost, chain) in sorted(routes.items()):
        table.entries[c] = RecoveryEntry(x, c, cost, list(chain), expand_path(tree, x, c, chain))
    return table


# -- drivers -------------------------------------------------------------------

def compute_recovery(net: SimNetwork, x: int) -> RecoveryTable:
    """Run ``x``'s recovery conversation alone and return its table."""
    if x == net.tree.root:
        raise ProtocolError("sink cannot fail")
    net.kick(x, ("recover",))
    net.run_until_quiescent()
    return _build_table(net.tree, x, net.actors[x].recovered)


def compute_all_recoveries(net: SimNetwork) -> tuple[dict[int, RecoveryTable], SimStats]:
    """Every non-sink node computes its table; conversations run concurrently."""
    nodes = [v for v in range(len(net.actors)) if v != net.tree.root]
    for v in nodes:
        net.kick(v, ("recover",))
    stats = net.run_until_quiescent()
    return {v: _build_table(net.tree, v, net.actors[v].recovered) for v in nodes}, stats


def fetch_blue_edges(net: SimNetwork, x: int, child: int) -> list[tuple[int, Witness, float]]:
    """One request/response exchange returning ``child``'s blue store."""
    net.kick(x, ("fetch", child))
    net.run_until_quiescent()
    return [(sib, (e.inside, e.outside), e.fgw) for sib, e in net.actors[x].fetched.pop(child)]


def compute_link_recovery(net: SimNetwork, x: int) -> LinkRecovery:
    """Route from ``x`` to the sink when the tree link to its parent fails.

    Uses only ``x``'s local store: the cheapest edge leaving its subtree.
    """
    node = net.actors[x]
    if node.parent is None:
        raise ProtocolError("sink cannot fail")
    e = node.link_best
    if e is None:
        raise ProtocolError("bridge edge")
    tree = net.tree
    walk = list(reversed(tree_path(tree, e.inside, x))) + tree_path(tree, e.outside, tree.root)
    return LinkRecovery(x, node.parent, e.fgw - node.dist, (e.inside, e.outside), walk)


# -- serialization -------------------------------------------------------------

def tables_to_json(tables: Iterable[RecoveryTable], sink: int) -> str:
    records = [
        {"failed": e.failed, "child": e.child, "cost": e.cost,
         "hop_chain": [list(w) for w in e.hop_chain], "path": e.path}
        for t in sorted(tables, key=lambda t: t.failed)
        for e in (t.entries[c] for c in sorted(t.entries))
    ]
    doc = {"format": "snfr-recovery-tables/1", "sink": sink, "records": records}
    return json.dumps(doc, indent=1) + "\n"


def tables_from_json(text: str) -> tuple[int, dict[int, RecoveryTable]]:
    doc = json.loads(text)
    tables: dict[int, RecoveryTable] = {}
    for r in doc["records"]:
        t = tables.setdefault(r["failed"], RecoveryTable(r["failed"]))
        t.entries[r["child"]] = RecoveryEntry(
            r["failed"], r["child"], r["cost"], [tuple(w) for w in r["hop_chain"]], list(r["path"]))
    return doc["sink"], tables


def link_tables_to_json(links: Iterable[LinkRecovery], sink: int) -> str:
    records = [
        {"node": r.node, "parent": r.parent, "cost": r.cost, "witness": list(r.witness), "path": r.path}
        for r in sorted(links, key=lambda r: r.node)
    ]
    doc = {"format": "snfr-link-tables/1", "sink": sink, "records": records}
    return json.dumps(doc, indent=1) + "\n"
