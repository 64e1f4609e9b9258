"""Tiny inboxes slow the protocol down but never change its answer.

With an inbox capacity of 1 most deliveries bounce and are retried later.
The final per-node state and the recovery tables come out identical.
"""
from __future__ import annotations

from snfr import generate_biconnected, run_protocol, tables_to_json

g = generate_biconnected(80, 6, seed=7)
free = run_protocol(g)
print(f"unbounded: ticks={sum(s.ticks for s in free.phase_stats.values())}")

for cap in (8, 2, 1):
    run = run_protocol(g, inbox_capacity=cap)
    ticks = sum(s.ticks for s in run.phase_stats.values())
    retries = sum(s.retries for s in run.phase_stats.values())
    same_state = [a.snapshot() for a in run.net.actors] == [a.snapshot() for a in free.net.actors]
    same_tables = tables_to_json(run.tables.values(), 0) == tables_to_json(free.tables.values(), 0)
    print(f"capacity {cap}: ticks={ticks} retries={retries} same state={same_state} same tables={same_tables}")
