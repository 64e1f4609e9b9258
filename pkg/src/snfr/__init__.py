"""Distributed computation of recovery routes around a failed node or link.

Typical use::

    from snfr import generate_biconnected, run_protocol, centralized_snfr

    g = generate_biconnected(50, 6, seed=1)
    run = run_protocol(g, sink=0, mode="both")
    run.tables[7].entries  # child -> RecoveryEntry
"""
from .errors import GraphError, ProtocolError, SimulationError
from .graph import (
    Graph,
    ShortestPathTree,
    dijkstra_spt,
    generate_biconnected,
    is_biconnected,
    load_graph,
    parse_graph,
    format_graph,
    random_tree,
    save_graph,
    tree_path,
)
from .labeling import DfsLabels, centralized_labels, is_descendant, run_wake_and_label
from .oracle import (
    StretchReport,
    centralized_snfr,
    optimal_alternate,
    optimal_link_alternate,
    stretch_report,
)
from .propagation import collect_non_tree_edges, fixed_green_weight, record_non_tree_edge
from .protocol import NodeActor, ProtocolRun, build_network, run_protocol
from .recovery import (
    LinkRecovery,
    RecoveryEntry,
    RecoveryTable,
    blue_weight_from_green,
    compute_all_recoveries,
    compute_link_recovery,
    compute_recovery,
    expand_path,
    fetch_blue_edges,
    tables_to_json,
)
from .sim import Kind, Message, SimNetwork, SimStats

__version__ = "0.1.0"
