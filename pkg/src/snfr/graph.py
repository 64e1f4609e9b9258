"""Undirected weighted graphs, shortest-path trees and the random test corpus."""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import GraphError

Cost = float  # ints are kept as ints so sums stay exact


class Graph:
    """Simple undirected graph on nodes ``0..n-1`` with non-negative edge costs.

    Duplicate edges collapse to the cheapest one.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int, Cost]] = ()):
        if n < 0:
            raise GraphError("node count must be non-negative")
        self.n = n
        self.adj: list[dict[int, Cost]] = [{} for _ in range(n)]
        for u, v, c in edges:
            self.add_edge(u, v, c)

    def add_edge(self, u: int, v: int, cost: Cost) -> None:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError(f"edge ({u}, {v}) references a node outside 0..{self.n - 1}")
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        if not (cost >= 0 and math.isfinite(cost)):
            raise GraphError(f"edge ({u}, {v}) has invalid cost {cost!r}")
        old = self.adj[u].get(v)
        if old is None or cost < old:
            self.adj[u][v] = cost
            self.adj[v][u] = cost

    def cost(self, u: int, v: int) -> Cost:
        return self.adj[u][v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def neighbors(self, u: int) -> list[int]:
        return sorted(self.adj[u])

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int, Cost]]:
        """All edges as ``(u, v, cost)`` with ``u < v``, sorted."""
        return sorted((u, v, c) for u in range(self.n) for v, c in self.adj[u].items() if u < v)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges() == other.edges()

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass
class ShortestPathTree:
    root: int
    parent: list[int | None]
    dist: list[Cost]
    children: list[list[int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.parent)

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d

    def is_ancestor(self, a: int, v: int) -> bool:
        """Parent-pointer walk; ``a`` counts as its own ancestor."""
        while v is not None:
            if v == a:
                return True
            v = self.parent[v]
        return False

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return sorted(out)


def dijkstra_spt(graph: Graph, s: int) -> ShortestPathTree:
    """Shortest-path tree rooted at ``s``.

    Equal-distance ties go to the smaller parent id. Only unsettled nodes have
    their parent replaced, which keeps the result a tree under zero-cost edges.
    """
    if not 0 <= s < graph.n:
        raise GraphError(f"root {s} is not a node")
    dist: list[Cost] = [math.inf] * graph.n
    parent: list[int | None] = [None] * graph.n
    done = [False] * graph.n
    dist[s] = 0
    heap = [(0, s)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d > dist[u]:
            continue
        done[u] = True
        for v, c in graph.adj[u].items():
            if done[v]:
                continue
            nd = d + c
            if nd < dist[v] or (nd == dist[v] and parent[v] is not None and u < parent[v]):
                if nd < dist[v]:
                    heapq.heappush(heap, (nd, v))
                dist[v] = nd
                parent[v] = u
    if not all(done):
        raise GraphError("graph disconnected")
    children: list[list[int]] = [[] for _ in range(graph.n)]
    for v, p in enumerate(parent):
        if p is not None:
            children[p].append(v)
    return ShortestPathTree(root=s, parent=parent, dist=dist, children=children)


def tree_path(tree: ShortestPathTree, u: int, ancestor: int) -> list[int]:
    """Nodes from ``u`` up the tree to ``ancestor``, both inclusive."""
    path = [u]
    while path[-1] != ancestor:
        p = tree.parent[path[-1]]
        if p is None:
            raise GraphError(f"{ancestor} is not an ancestor of {u}")
        path.append(p)
    return path


def is_biconnected(graph: Graph) -> bool:
    """True iff the graph is connected and has no articulation point."""
    n = graph.n
    if n < 3:
        raise GraphError("too small")
    disc = [-1] * n
    low = [0] * n
    timer = 0
    root_children = 0
    disc[0] = low[0] = timer
    # iterative lowpoint DFS: frames are (node, parent, neighbor iterator)
    stack = [(0, -1, iter(graph.neighbors(0)))]
    while stack:
        u, p, it = stack[-1]
        for v in it:
            if disc[v] == -1:
                timer += 1
                disc[v] = low[v] = timer
                stack.append((v, u, iter(graph.neighbors(v))))
                break
            if v != p:
                low[u] = min(low[u], disc[v])
        else:
            stack.pop()
            if p == -1:
                continue
            low[p] = min(low[p], low[u])
            if p == 0:
                root_children += 1
            elif low[u] >= disc[p]:
                return False
    if any(d == -1 for d in disc):
        return False
    return root_children <= 1


def generate_biconnected(n: int, avg_degree: float, seed: int) -> Graph:
    """Seeded random biconnected graph with ``round(n * avg_degree / 2)`` edges.

    A Hamiltonian cycle over a random permutation guarantees biconnectivity;
    the remaining edges are chords drawn uniformly. Costs are integers drawn
    uniformly from [1, 100].
    """
    if n < 3:
        raise GraphError("too small")
    if avg_degree < 2:
        raise GraphError("avg_degree must be at least 2 for a biconnected graph")
    m = round(n * avg_degree / 2)
    if m > n * (n - 1) // 2:
        raise GraphError(f"avg_degree {avg_degree} exceeds the complete graph on {n} nodes")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    g = Graph(n)
    for i in range(n):
        g.add_edge(order[i], order[(i + 1) % n], rng.randint(1, 100))
    dense = m > n * (n - 1) // 4
    if dense:
        # sample from the explicit complement to avoid long rejection loops
        missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
        for u, v in rng.sample(missing, m - n):
            g.add_edge(u, v, rng.randint(1, 100))
    else:
        while g.m < m:
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v and not g.has_edge(u, v):
                g.add_edge(u, v, rng.randint(1, 100))
    return g


def random_tree(n: int, seed: int) -> Graph:
    """Random recursive tree with unit costs; used for labeling experiments."""
    rng = random.Random(seed)
    return Graph(n, ((v, rng.randrange(v), 1) for v in range(1, n)))


# -- text format ---------------------------------------------------------------

def _parse_cost(tok: str) -> Cost:
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def parse_graph(text: str) -> Graph:
    """Parse ``n m`` followed by ``u v cost`` lines; ``#`` lines are comments."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("missing 'n m' header")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header announces {m} edges but {len(body)} follow")
    g = Graph(n)
    for row in body:
        if len(row) != 3:
            raise GraphError(f"bad edge line: {' '.join(row)}")
        g.add_edge(int(row[0]), int(row[1]), _parse_cost(row[2]))
    return g


def format_graph(graph: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    edges = graph.edges()
    lines.append(f"{graph.n} {len(edges)}")
    lines.extend(f"{u} {v} {c}" for u, v, c in edges)
    return "\n".join(lines) + "\n"


def load_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def save_graph(graph: Graph, path: str | Path, comments: Sequence[str] = ()) -> None:
    Path(path).write_text(format_graph(graph, comments))
