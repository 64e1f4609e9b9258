"""Walk through the protocol on two tiny graphs, phase by phase.

A unit-cost 5-ring shows the simplest possible detour (the rest of the ring),
and a four-node graph shows a detour that hops through a sibling subtree.
"""
from __future__ import annotations

from snfr import Graph, run_protocol
from snfr.protocol import dump_stores

RING = Graph(5, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 0, 1)])
# sink 0, x = 1 with children 2 and 3; the only direct escape is the costly (3, 0)
FORK = Graph(4, [(0, 1, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1), (3, 0, 10)])


def show(name: str, g: Graph) -> None:
    print(f"== {name}: n={g.n} m={g.m}")
    run = run_protocol(g, sink=0, mode="both")
    tree = run.tree
    print("shortest-path tree parents:", tree.parent)
    print("labels:", {v: run.labels.interval(v) for v in range(g.n)})
    print("stores after edge collection:")
    print("  " + dump_stores(run.net).strip().replace("\n", "\n  "))
    for x, table in sorted(run.tables.items()):
        for c, e in sorted(table.entries.items()):
            print(f"  if {x} fails, {c} reroutes along {e.path} at cost {e.cost}")
    for v, rec in sorted(run.links.items()):
        print(f"  if link ({v}, {rec.parent}) fails, {v} uses {rec.path} at cost {rec.cost}")
    for phase, st in run.phase_stats.items():
        print(f"  {phase}: {st.total_sent} messages, {st.ticks} ticks")
    print()


if __name__ == "__main__":
    show("ring", RING)
    show("fork", FORK)
