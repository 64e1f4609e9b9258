"""Node actors and the end-to-end protocol driver."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import labeling, propagation, recovery
from .errors import GraphError, SimulationError
from .graph import Graph, ShortestPathTree, dijkstra_spt, is_biconnected
from .labeling import DfsLabels, Interval
from .propagation import EdgeEntry
from .recovery import LinkRecovery, RecoveryTable
from .sim import DEFAULT_RETRY_DELAY, Kind, Message, SimNetwork, SimStats


class NodeActor:
    """Everything one router knows: its tree neighbourhood plus protocol state.

    Initial knowledge is what a converged routing protocol leaves behind:
    parent, children, own distance to the sink, and cost and distance of
    every neighbour.
    """

    def __init__(self, graph: Graph, tree: ShortestPathTree, v: int):
        self.id = v
        self.sink = tree.root
        self.parent = tree.parent[v]
        self.children = sorted(tree.children[v])
        self.dist = tree.dist[v]
        self.neighbor_cost = dict(graph.adj[v])
        self.neighbor_dist = {u: tree.dist[u] for u in graph.adj[v]}
        tree_nbrs = set(self.children) | ({self.parent} if self.parent is not None else set())
        self.non_tree_neighbors = sorted(u for u in graph.adj[v] if u not in tree_nbrs)
        # labeling
        self.awake = False
        self.child_sizes: dict[int, int] = {}
        self.size: int | None = None
        self.start: int | None = None
        self.end: int | None = None
        self.parent_interval: Interval | None = None
        self.sibling_intervals: dict[int, Interval] = {}
        self.child_intervals: dict[int, Interval] = {}
        # edge collection
        self.neighbor_labels: dict[int, Interval] = {}
        self.bootstrapped = False
        self.edges_received = 0
        self.cge: dict[int, EdgeEntry] = {}
        self.pbe: dict[int, EdgeEntry] = {}
        self.link_best: EdgeEntry | None = None
        # recovery
        self.conversation = None
        self.recovered: dict[int, tuple[float, list[tuple[int, int]]]] = {}
        self.recovery_stats: recovery.RecoveryRunStats | None = None
        self.fetched: dict[int, list] = {}

    def handle(self, net: SimNetwork, msg: Message) -> None:
        kind = msg.kind
        if kind is Kind.START:
            task = msg.payload[0]
            if task == "wake":
                labeling.on_wake(self, net)
            elif task == "collect":
                propagation.start_collection(self, net)
            elif task == "recover":
                recovery.start_recovery(self, net)
            elif task == "fetch":
                net.send(Message(self.id, msg.payload[1], Kind.BLUE_REQ))
            else:
                raise SimulationError(f"unknown local task {task!r}")
        elif kind is Kind.WAKE:
            labeling.on_wake(self, net)
        elif kind is Kind.COUNT:
            labeling.on_count(self, net, msg)
        elif kind is Kind.ALLOC:
            labeling.on_alloc(self, net, msg)
        elif kind is Kind.LABEL:
            propagation.on_neighbor_label(self, net, msg)
        elif kind is Kind.EDGE:
            propagation.on_edge(self, net, msg)
        elif kind is Kind.BLUE_REQ:
            recovery.on_blue_request(self, net, msg)
        elif kind is Kind.BLUE_RESP:
            recovery.on_blue_response(self, net, msg)
        else:
            raise SimulationError(f"unexpected message kind {kind}")

    def snapshot(self) -> tuple:
        """Comparable view of the durable state, for replay and equivalence checks."""
        return (
            self.id, self.start, self.end, self.size, self.parent_interval,
            tuple(sorted(self.sibling_intervals.items())),
            tuple(sorted(self.cge.items())), tuple(sorted(self.pbe.items())), self.link_best,
            tuple(sorted((c, cost, tuple(ch)) for c, (cost, ch) in self.recovered.items())),
        )


class ProtocolNetwork(SimNetwork):
    def __init__(self, graph: Graph, tree: ShortestPathTree, **kwargs):
        super().__init__(graph, [NodeActor(graph, tree, v) for v in range(graph.n)], **kwargs)
        self.tree = tree


def build_network(
    graph: Graph,
    sink: int,
    inbox_capacity: int | None = None,
    retry_delay: int = DEFAULT_RETRY_DELAY,
    seed: int = 0,
) -> ProtocolNetwork:
    tree = dijkstra_spt(graph, sink)
    return ProtocolNetwork(graph, tree, inbox_capacity=inbox_capacity, retry_delay=retry_delay, seed=seed)


@dataclass
class ProtocolRun:
    graph: Graph
    net: ProtocolNetwork
    labels: DfsLabels
    tables: dict[int, RecoveryTable]
    links: dict[int, LinkRecovery]
    phase_stats: dict[str, SimStats] = field(default_factory=dict)

    @property
    def tree(self) -> ShortestPathTree:
        return self.net.tree

    @property
    def sink(self) -> int:
        return self.net.tree.root

    def metrics(self) -> dict[str, int]:
        out: dict[str, int] = {"n": self.graph.n, "m": self.graph.m}
        for phase, st in self.phase_stats.items():
            out.update(st.record(prefix=f"{phase}."))
        out["edge_messages.measured"] = self.phase_stats["collect"].delivered.get("EDGE", 0)
        out["edge_messages.predicted"] = propagation.predicted_edge_messages(self.tree, self.graph.edges())
        out["edge_messages.m_plus_n"] = self.graph.m + self.graph.n
        return out


def run_protocol(
    graph: Graph,
    sink: int = 0,
    mode: str = "node",
    inbox_capacity: int | None = None,
    retry_delay: int = DEFAULT_RETRY_DELAY,
    seed: int = 0,
    shuffle: bool = False,
    check_biconnected: bool = True,
) -> ProtocolRun:
    """Tree, labels, edge collection, then recovery tables for every node.

    ``mode`` is ``"node"``, ``"link"`` or ``"both"``.
    """
    if mode not in ("node", "link", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    if check_biconnected and not is_biconnected(graph):
        raise GraphError("input not biconnected")
    net = build_network(graph, sink, inbox_capacity=inbox_capacity, retry_delay=retry_delay, seed=seed)
    stats: dict[str, SimStats] = {}
    labels, stats["label"] = labeling.run_wake_and_label(net, sink)
    stats["collect"] = propagation.collect_non_tree_edges(net, shuffle=shuffle)
    tables: dict[int, RecoveryTable] = {}
    if mode in ("node", "both"):
        tables, stats["recover"] = recovery.compute_all_recoveries(net)
    links: dict[int, LinkRecovery] = {}
    if mode in ("link", "both"):
        links = {v: recovery.compute_link_recovery(net, v) for v in range(graph.n) if v != sink}
    return ProtocolRun(graph, net, labels, tables, links, stats)


def dump_stores(net: SimNetwork) -> str:
    lines = []
    for a in net.actors:
        lines.append(f"node {a.id}")
        for sib, e in sorted(a.pbe.items()):
            lines.append(f"BLUE {sib} {e.inside} {e.outside} {e.cost} {e.fgw}")
        for c, e in sorted(a.cge.items()):
            lines.append(f"GREEN {c} {e.inside} {e.outside} {e.cost} {e.fgw}")
    return "\n".join(lines) + "\n"
