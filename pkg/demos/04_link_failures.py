"""Recovering from a failed tree link instead of a failed node.

For every node the protocol picks the cheapest way out of its own subtree.
That route is compared with the true shortest path once the link is gone.
"""
from __future__ import annotations

from snfr import generate_biconnected, optimal_link_alternate, run_protocol

g = generate_biconnected(40, 4, seed=3)
run = run_protocol(g, mode="link")
exact = 0
for v, rec in sorted(run.links.items()):
    best, _ = optimal_link_alternate(g, 0, v, rec.parent)
    exact += rec.cost == best
    if v < 8:
        print(f"link ({v}, {rec.parent}): protocol {rec.cost} via {rec.path}, optimal {best}")
print(f"{exact}/{len(run.links)} link detours are optimal")
