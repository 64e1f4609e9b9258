"""Ground truth for the protocol: optimal detours and a centralized reference.

``centralized_snfr`` builds every recovery graph in one place. It classifies
each non-tree edge by the nearest common ancestor of its endpoints, weighs
arcs directly as walk lengths along tree paths, and shares nothing with the
message-passing code except the tie-breaking rules and path expansion.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from statistics import fmean

from .errors import GraphError, ProtocolError
from .graph import Graph, ShortestPathTree, dijkstra_spt
from .labeling import centralized_labels
from .recovery import SINK, LinkRecovery, RecoveryEntry, RecoveryTable, expand_path


def _sssp(graph: Graph, s: int, banned_node: int | None = None,
          banned_edge: tuple[int, int] | None = None) -> tuple[list[float], list[int | None]]:
    dist = [math.inf] * graph.n
    prev: list[int | None] = [None] * graph.n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, c in graph.adj[u].items():
            if v == banned_node or (banned_edge and {u, v} == set(banned_edge)):
                continue
            if d + c < dist[v]:
                dist[v] = d + c
                prev[v] = u
                heapq.heappush(heap, (d + c, v))
    return dist, prev


def _unwind(prev: list[int | None], v: int) -> list[int]:
    path = [v]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path


def optimal_alternates(graph: Graph, s: int, x: int) -> tuple[list[float], list[int | None]]:
    """Distances to ``s`` in the graph with ``x`` and its edges removed."""
    if x == s:
        raise GraphError("sink cannot fail")
    return _sssp(graph, s, banned_node=x)


def optimal_alternate(graph: Graph, s: int, x: int, x_i: int) -> tuple[float, list[int]]:
    dist, prev = optimal_alternates(graph, s, x)
    if dist[x_i] == math.inf:
        raise GraphError(f"{x_i} cannot reach {s} without {x}")
    return dist[x_i], _unwind(prev, x_i)


def optimal_link_alternate(graph: Graph, s: int, u: int, v: int) -> tuple[float, list[int]]:
    """Shortest ``u`` to ``s`` path once edge ``(u, v)`` is gone."""
    dist, prev = _sssp(graph, s, banned_edge=(u, v))
    if dist[u] == math.inf:
        raise GraphError(f"edge ({u}, {v}) is a bridge")
    return dist[u], _unwind(prev, u)


# -- centralized reference -----------------------------------------------------

def _rank(weight: float, u: int, v: int) -> tuple[float, int, int]:
    return weight, min(u, v), max(u, v)


def centralized_snfr(graph: Graph, s: int, tree: ShortestPathTree | None = None) -> dict[int, RecoveryTable]:
    """Recovery tables for every ``x != s`` without any message passing."""
    tree = tree or dijkstra_spt(graph, s)
    labels = centralized_labels(tree)

    def inside(a: int, b: int) -> bool:  # a in subtree(b)
        return labels.start[b] <= labels.start[a] and labels.end[a] <= labels.end[b]

    # green[x][child] = (rank, (u, v)); blue[x][(ci, cj)] = (rank, (u in ci, v in cj))
    green: dict[int, dict[int, tuple]] = {x: {} for x in range(graph.n)}
    blue: dict[int, dict[tuple[int, int], tuple]] = {x: {} for x in range(graph.n)}
    climb: dict[int, list[tuple[int, float]]] = {}

    def ascent(u: int) -> list[tuple[int, float]]:
        # (ancestor, tree distance from u) for u and every ancestor
        if u not in climb:
            out, acc, z = [(u, 0)], 0, u
            while tree.parent[z] is not None:
                acc += graph.cost(z, tree.parent[z])
                z = tree.parent[z]
                out.append((z, acc))
            climb[u] = out
        return climb[u]

    for u, v, c in graph.edges():
        if tree.parent[u] == v or tree.parent[v] == u:
            continue
        for a, b in ((u, v), (v, u)):
            if inside(b, a):
                continue
            up = ascent(a)
            for k in range(1, len(up)):
                z, _ = up[k]
                if inside(b, z):
                    if b != z:  # edges touching z are useless to R_z
                        ca, da = up[k - 1]
                        cb = next(y for y, _ in ascent(b) if tree.parent[y] == z)
                        db = next(d for y, d in ascent(b) if y == cb)
                        w = da + c + db
                        key = (ca, cb)
                        if key not in blue[z] or _rank(w, a, b) < blue[z][key][0]:
                            blue[z][key] = (_rank(w, a, b), (a, b))
                    break
                child, dz = up[k - 1]
                w = dz + c + tree.dist[b]
                if child not in green[z] or _rank(w, a, b) < green[z][child][0]:
                    green[z][child] = (_rank(w, a, b), (a, b))

    tables = {}
    for x in range(graph.n):
        if x == s:
            continue
        tables[x] = _solve_recovery_graph(tree, x, green[x], blue[x])
    return tables


def _solve_recovery_graph(tree: ShortestPathTree, x: int, green: dict, blue: dict) -> RecoveryTable:
    kids = sorted(tree.children[x])
    adj: dict[int, list[tuple[int, float, tuple[int, int]]]] = {c: [] for c in kids}
    for (ci, cj), ((w, _, _), (a, b)) in blue.items():
        # arc from cj's side: a walker at cj reaches ci, entering via b then a
        adj[cj].append((ci, w, (a, b)))
    best: dict[int, tuple[float, int]] = {}
    wit: dict[int, tuple[int, int]] = {}
    for c in kids:
        if c in green:
            best[c] = (green[c][0][0], SINK)
            wit[c] = green[c][1]
        else:
            best[c] = (math.inf, SINK)
    done: dict[int, list] = {}
    routes: dict[int, tuple[float, list]] = {}
    while len(done) < len(kids):
        c = min((k for k in kids if k not in done), key=lambda k: (best[k][0], k))
        d, pred = best[c]
        if d == math.inf:
            raise ProtocolError(f"graph not biconnected for {x}")
        done[c] = [wit[c]] + (done[pred] if pred != SINK else [])
        routes[c] = (d, done[c])
        for nb, w, (a, b) in sorted(adj[c]):
            if nb in done:
                continue
            cand = (d + w, c)
            if cand < best[nb]:
                best[nb] = cand
                wit[nb] = (a, b)
    table = RecoveryTable(x)
    for c in kids:
        cost, chain = routes[c]
        table.entries[c] = RecoveryEntry(x, c, cost, chain, expand_path(tree, x, c, chain))
    return table


# -- checks --------------------------------------------------------------------

def walk_cost(graph: Graph, walk: list[int]) -> float:
    total = 0
    for a, b in zip(walk, walk[1:]):
        if not graph.has_edge(a, b):
            raise GraphError(f"walk uses missing edge ({a}, {b})")
        total += graph.cost(a, b)
    return total


def validity_problems(graph: Graph, s: int, entry: RecoveryEntry) -> list[str]:
    """Empty when the entry's walk is a legal detour of the stated cost."""
    p, x = entry.path, entry.failed
    problems = []
    if not p or p[0] != entry.child:
        problems.append("does not start at the child")
    if not p or p[-1] != s:
        problems.append("does not end at the sink")
    if x in p:
        problems.append("visits the failed node")
    try:
        if walk_cost(graph, p) != entry.cost:
            problems.append(f"walk cost {walk_cost(graph, p)} != recorded {entry.cost}")
    except GraphError as exc:
        problems.append(str(exc))
    return problems


def link_validity_problems(graph: Graph, s: int, rec: LinkRecovery) -> list[str]:
    p = rec.path
    problems = []
    if not p or p[0] != rec.node or p[-1] != s:
        problems.append("wrong endpoints")
    if any({a, b} == {rec.node, rec.parent} for a, b in zip(p, p[1:])):
        problems.append("uses the failed link")
    try:
        if walk_cost(graph, p) != rec.cost:
            problems.append("cost mismatch")
    except GraphError as exc:
        problems.append(str(exc))
    return problems


@dataclass
class StretchEntry:
    failed: int
    child: int
    optimal: float
    protocol: float

    @property
    def ratio(self) -> float:
        if self.optimal == 0:
            return 1.0 if self.protocol == 0 else math.inf
        return self.protocol / self.optimal


@dataclass
class StretchReport:
    entries: list[StretchEntry] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return fmean(e.ratio for e in self.entries) if self.entries else 1.0

    @property
    def max(self) -> float:
        return max((e.ratio for e in self.entries), default=1.0)

    def to_text(self) -> str:
        lines = ["x child optimal protocol ratio"]
        lines += [f"{e.failed} {e.child} {e.optimal} {e.protocol} {e.ratio:.6f}" for e in self.entries]
        lines.append(f"# entries {len(self.entries)}")
        lines.append(f"# mean_ratio {self.mean:.6f}")
        lines.append(f"# max_ratio {self.max:.6f}")
        return "\n".join(lines) + "\n"


def stretch_report(graph: Graph, s: int, tables: dict[int, RecoveryTable]) -> StretchReport:
    report = StretchReport()
    for x in sorted(tables):
        if not tables[x].entries:
            continue
        dist, _ = optimal_alternates(graph, s, x)
        for c in sorted(tables[x].entries):
            report.entries.append(StretchEntry(x, c, dist[c], tables[x].entries[c].cost))
    return report
