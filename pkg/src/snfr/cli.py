"""Command line: ``snfr gen | run | verify | stats``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GraphError, ProtocolError, SimulationError
from .graph import Graph, format_graph, generate_biconnected, is_biconnected, load_graph
from .oracle import (
    centralized_snfr,
    link_validity_problems,
    stretch_report,
    validity_problems,
)
from .protocol import ProtocolRun, dump_stores, run_protocol
from .recovery import RecoveryTable, link_tables_to_json, tables_from_json, tables_to_json


def _graph_from_args(args: argparse.Namespace) -> Graph:
    if args.graph:
        return load_graph(args.graph)
    if args.generate:
        n, deg = args.generate
        return generate_biconnected(int(n), float(deg), args.seed)
    raise GraphError("give --graph PATH or --generate N AVG_DEGREE")


def _emit(data: dict, fmt: str) -> str:
    if fmt == "structured":
        return json.dumps(data, indent=1, sort_keys=True) + "\n"
    return "".join(f"{k} {v}\n" for k, v in data.items())


def _first_divergence(got: dict[int, RecoveryTable], want: dict[int, RecoveryTable]) -> tuple[int, int] | None:
    keys = sorted({(x, c) for tabs in (got, want) for x, t in tabs.items() for c in t.entries})
    for x, c in keys:
        a = got.get(x, RecoveryTable(x)).entries.get(c)
        b = want.get(x, RecoveryTable(x)).entries.get(c)
        if a != b:
            return x, c
    return None


def cmd_gen(args: argparse.Namespace) -> int:
    g = generate_biconnected(args.n, args.avg_degree, args.seed)
    text = format_graph(g, [f"generate_biconnected n={args.n} avg_degree={args.avg_degree} seed={args.seed}"])
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"n={g.n} m={g.m} biconnected={str(is_biconnected(g)).lower()}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def _run(args: argparse.Namespace, g: Graph, mode: str) -> ProtocolRun:
    return run_protocol(
        g, sink=args.sink, mode=mode, inbox_capacity=args.inbox_capacity,
        seed=args.seed, shuffle=args.shuffle,
    )


def cmd_run(args: argparse.Namespace) -> int:
    g = _graph_from_args(args)
    run = _run(args, g, args.mode)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if run.tables:
        (out / "tables.json").write_text(tables_to_json(run.tables.values(), run.sink))
    if run.links:
        (out / "link_tables.json").write_text(link_tables_to_json(run.links.values(), run.sink))
    (out / "labels.txt").write_text(run.labels.dump())
    (out / "stores.txt").write_text(dump_stores(run.net))
    metrics = run.metrics()
    suffix = "json" if args.format == "structured" else "txt"
    (out / f"metrics.{suffix}").write_text(_emit(metrics, args.format))
    print(f"wrote {out}: n={g.n} m={g.m} messages={sum(v for k, v in metrics.items() if k.endswith('sent.total'))}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    g = _graph_from_args(args)
    reference = centralized_snfr(g, args.sink)
    if args.tables:
        sink, tables = tables_from_json(Path(args.tables).read_text())
        if sink != args.sink:
            print(f"tables were computed for sink {sink}, not {args.sink}")
            return 1
        links = {}
    else:
        run = _run(args, g, "both")
        tables, links = run.tables, run.links
    ok = True
    diverge = _first_divergence(tables, reference)
    if diverge is None and tables_to_json(tables.values(), args.sink) != tables_to_json(reference.values(), args.sink):
        diverge = (-1, -1)
    if diverge is None:
        print("equality OK")
    else:
        ok = False
        print(f"equality MISMATCH at failed={diverge[0]} child={diverge[1]}")
    bad = [(x, c, p) for x, t in sorted(tables.items()) for c, e in sorted(t.entries.items())
           for p in validity_problems(g, args.sink, e)]
    bad += [(v, "link", p) for v, r in sorted(links.items()) for p in link_validity_problems(g, args.sink, r)]
    if bad:
        ok = False
        x, c, p = bad[0]
        print(f"validity FAIL at failed={x} child={c}: {p} ({len(bad)} problems)")
    else:
        print("validity OK")
    report = stretch_report(g, args.sink, tables)
    below = [e for e in report.entries if e.ratio < 1]
    if below:
        ok = False
        print(f"stretch FAIL: failed={below[0].failed} child={below[0].child} beats the optimum")
    else:
        print(f"stretch OK mean_ratio={report.mean:.6f} max_ratio={report.max:.6f} entries={len(report.entries)}")
    if args.report:
        Path(args.report).write_text(report.to_text())
    return 0 if ok else 1


def cmd_stats(args: argparse.Namespace) -> int:
    g = _graph_from_args(args)
    run = _run(args, g, args.mode)
    sys.stdout.write(_emit(run.metrics(), args.format))
    return 0


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph text file")
    p.add_argument("--generate", nargs=2, metavar=("N", "AVG_DEGREE"), help="generate a random biconnected graph")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sink", type=int, default=0)
    p.add_argument("--inbox-capacity", type=int, default=None)
    p.add_argument("--shuffle", action="store_true", help="seeded random start order for edge collection")
    p.add_argument("--format", choices=("text", "structured"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snfr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random biconnected graph")
    p.add_argument("n", type=int)
    p.add_argument("avg_degree", type=float)
    p.add_argument("seed", type=int)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run the protocol and write its artifacts")
    _add_graph_source(p)
    p.add_argument("--mode", choices=("node", "link", "both"), default="node")
    p.add_argument("--out-dir", default="snfr-out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="check tables against the centralized reference and the optimum")
    _add_graph_source(p)
    p.add_argument("--tables", help="tables.json to check instead of running the protocol")
    p.add_argument("--report", help="write the stretch report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="print message and timing counters")
    _add_graph_source(p)
    p.add_argument("--mode", choices=("node", "link", "both"), default="node")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ProtocolError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
