"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v -s`` or ``pytest -m acceptance``.
"""
import random
import time
import warnings
from functools import lru_cache

import pytest

from oracles import brute_shortest, walk_ancestor
from snfr import (
    build_network,
    centralized_labels,
    centralized_snfr,
    generate_biconnected,
    is_descendant,
    optimal_alternate,
    optimal_link_alternate,
    random_tree,
    run_protocol,
    run_wake_and_label,
    stretch_report,
    tables_to_json,
)
from snfr.oracle import link_validity_problems, optimal_alternates, validity_problems
from snfr.propagation import predicted_edge_messages

pytestmark = pytest.mark.acceptance

SIZES = [10, 25, 50, 100, 200]
DEGREES = [3, 6, 10]
CORPUS_SIZE = 200
STRETCH_LIMIT = 1.15


def corpus_params(seed):
    n = SIZES[(seed % 15) // 3]
    deg = min(DEGREES[seed % 3], n - 1)
    return n, deg, seed % n


@lru_cache(maxsize=None)
def corpus():
    """Protocol runs (node and link mode) over the shared 200-graph corpus, plus elapsed seconds."""
    t0 = time.perf_counter()
    runs = []
    for seed in range(CORPUS_SIZE):
        n, deg, sink = corpus_params(seed)
        g = generate_biconnected(n, deg, seed)
        runs.append(run_protocol(g, sink, mode="both"))
    return runs, time.perf_counter() - t0


@lru_cache(maxsize=None)
def small_corpus():
    out = []
    for seed in range(120):
        rng = random.Random(1000 + seed)
        n = rng.randint(4, 8)
        deg = min(rng.choice([2, 2.5, 3, 4]), n - 1)
        g = generate_biconnected(n, deg, 1000 + seed)
        out.append(run_protocol(g, sink=seed % n, mode="both"))
    return out


@pytest.fixture
def emit(capsys):
    def _emit(k, ok, detail):
        with capsys.disabled():
            print(f"\nCRITERION {k} {'PASS' if ok else 'FAIL'}: {detail}")
    return _emit


def test_criterion_01_distributed_equals_centralized(emit):
    runs, protocol_secs = corpus()
    t0 = time.perf_counter()
    mismatched = []
    for seed, run in enumerate(runs):
        mine = tables_to_json(run.tables.values(), run.sink)
        ref = tables_to_json(centralized_snfr(run.graph, run.sink).values(), run.sink)
        if mine != ref:
            mismatched.append(seed)
    secs = protocol_secs + time.perf_counter() - t0
    ok = not mismatched and secs < 120
    emit(1, ok, f"{len(runs) - len(mismatched)}/{len(runs)} graphs byte-identical in {secs:.1f}s"
         + (f" mismatched seeds {mismatched[:10]}" if mismatched else ""))
    assert not mismatched
    assert secs < 120


def test_criterion_02_validity(emit):
    runs, _ = corpus()
    entries, bad = 0, []
    for seed, run in enumerate(runs):
        for t in run.tables.values():
            for e in t.entries.values():
                entries += 1
                problems = validity_problems(run.graph, run.sink, e)
                if problems:
                    bad.append((seed, e.failed, e.child, problems))
    emit(2, not bad, f"{entries} entries checked, {len(bad)} invalid" + (f" first {bad[0]}" if bad else ""))
    assert not bad


def test_criterion_03_optimality_bound(emit):
    runs, _ = corpus()
    entries, below = 0, []
    for seed, run in enumerate(runs):
        for x, t in run.tables.items():
            if not t.entries:
                continue
            dist, _ = optimal_alternates(run.graph, run.sink, x)
            for c, e in t.entries.items():
                entries += 1
                if e.cost < dist[c]:
                    below.append((seed, x, c))
    enum_checked, enum_bad = 0, []
    for i, run in enumerate(small_corpus()):
        for x in range(run.graph.n):
            if x == run.sink:
                continue
            for c in run.tree.children[x]:
                enum_checked += 1
                best = brute_shortest(run.graph, c, run.sink, banned={x})
                if optimal_alternate(run.graph, run.sink, x, c)[0] != best:
                    enum_bad.append((i, x, c))
                if run.tables[x].entries[c].cost < best:
                    below.append(("small", i, x, c))
    ok = not below and not enum_bad
    emit(3, ok, f"{entries} corpus entries >= optimal, {len(below)} below; "
                f"oracle vs enumeration {enum_checked - len(enum_bad)}/{enum_checked} exact on n<=8")
    assert not below
    assert not enum_bad


def test_criterion_04_stretch_soft(emit):
    t0 = time.perf_counter()
    ratios, worst = [], 1.0
    for i in range(30):
        n = [100, 200, 300][i % 3]
        deg = 6 + round(29 * i / 29)
        g = generate_biconnected(n, deg, 4000 + i)
        rep = stretch_report(g, 0, run_protocol(g).tables)
        ratios.extend(e.ratio for e in rep.entries)
        worst = max(worst, rep.max)
    mean = sum(ratios) / len(ratios)
    secs = time.perf_counter() - t0
    emit(4, True, f"mean stretch {mean:.4f} max {worst:.4f} over {len(ratios)} entries in {secs:.1f}s"
                  + ("" if mean <= STRETCH_LIMIT else f" (FLAG: above {STRETCH_LIMIT})"))
    if mean > STRETCH_LIMIT:
        warnings.warn(f"mean stretch {mean:.4f} exceeds {STRETCH_LIMIT}")
    assert min(ratios) >= 1.0
    assert secs < 300


def _labels_ok(net, labels):
    tree = net.tree
    n = tree.n
    if labels.interval(tree.root) != (1, 2 * n):
        return False
    for v in range(n):
        a, b = labels.interval(v)
        if not 1 <= a < b <= 2 * n or b - a + 1 != 2 * len(tree.subtree(v)):
            return False
        kids = sorted(labels.interval(c) for c in tree.children[v])
        if any(not (a < ka and kb < b) for ka, kb in kids):
            return False
        if any(kids[i][1] >= kids[i + 1][0] for i in range(len(kids) - 1)):
            return False
    return labels == centralized_labels(tree)


def test_criterion_05_dfs_labeling(emit):
    rng = random.Random(5)
    sizes = [1, 2, 3, 10, 100, 250, 500, 750, 1000] + [rng.randint(2, 1000) for _ in range(11)]
    over, broken, queries, wrong = [], [], 0, 0
    per_tree = 100_000 // len(sizes)
    for i, n in enumerate(sizes):
        net = build_network(random_tree(n, 500 + i), 0)
        labels, stats = run_wake_and_label(net, 0)
        if stats.total_sent > 3 * n:
            over.append((n, stats.total_sent))
        if not _labels_ok(net, labels):
            broken.append(n)
        for _ in range(per_tree):
            u, v = rng.randrange(n), rng.randrange(n)
            queries += 1
            if is_descendant(labels, u, v) != walk_ancestor(net.tree.parent, v, u):
                wrong += 1
    ok = not over and not broken and not wrong and queries >= 100_000
    emit(5, ok, f"{len(sizes)} trees up to n=1000, messages <= 3n on all: {not over}; "
                f"invariants broken on {len(broken)}; {queries} descendant queries, {wrong} wrong")
    assert not over and not broken and not wrong
    assert queries >= 100_000


def test_criterion_06_space_bounds(emit):
    runs, _ = corpus()
    violations = []
    for seed, run in enumerate(runs):
        tree = run.tree
        for a in run.net.actors:
            p = tree.parent[a.id]
            sibs = len(tree.children[p]) - 1 if p is not None else 0
            kids = len(tree.children[a.id])
            if len(a.pbe) > sibs or len(a.cge) > kids:
                violations.append((seed, a.id))
    emit(6, not violations, f"{sum(r.graph.n for r in runs)} nodes checked, {len(violations)} over bound")
    assert not violations


def test_criterion_07_message_accounting(emit):
    runs, _ = corpus()
    measured = predicted = m_plus_n = 0
    off = []
    for seed, run in enumerate(runs):
        got = run.phase_stats["collect"].delivered.get("EDGE", 0)
        want = predicted_edge_messages(run.tree, run.graph.edges())
        measured += got
        predicted += want
        m_plus_n += run.graph.m + run.graph.n
        if got != want:
            off.append(seed)
    emit(7, not off, f"edge messages measured {measured} predicted {predicted} m+n baseline {m_plus_n}; "
                     f"{len(off)} graphs differ")
    assert not off


def test_criterion_08_laziness(emit):
    runs, _ = corpus()
    nodes, bad = 0, []
    for seed, run in enumerate(runs):
        for a in run.net.actors:
            if a.id == run.sink:
                continue
            nodes += 1
            k = len(run.tree.children[a.id])
            st = a.recovery_stats
            if len(st.fetched) > k or len(set(st.fetched)) != len(st.fetched) or st.extract_min != k:
                bad.append((seed, a.id))
        reqs = run.phase_stats["recover"].sent.get("BLUE_REQ", 0)
        if reqs > sum(len(run.tree.children[v]) for v in range(run.graph.n) if v != run.sink):
            bad.append((seed, "total"))
    emit(8, not bad, f"{nodes} recoveries: fetches <= k_x, no child twice, extract_min == k_x; {len(bad)} violations")
    assert not bad


def test_criterion_09_bounded_inbox(emit):
    same, retries, diff = 0, 0, []
    for seed in range(20):
        g = generate_biconnected([20, 50, 100][seed % 3], [3, 6][seed % 2], 9000 + seed)
        a = run_protocol(g, 0)
        b = run_protocol(g, 0, inbox_capacity=1)
        ok = ([x.snapshot() for x in a.net.actors] == [x.snapshot() for x in b.net.actors]
              and tables_to_json(a.tables.values(), 0) == tables_to_json(b.tables.values(), 0))
        same += ok
        if not ok:
            diff.append(seed)
        retries += sum(st.retries for st in b.phase_stats.values())
    ok = not diff and retries > 0
    emit(9, ok, f"{same}/20 graphs identical under inbox capacity 1, retries {retries}")
    assert not diff
    assert retries > 0


def _green_only(tree, node, path):
    """Every non-tree edge on the path has exactly one endpoint below ``node``."""
    par = tree.parent
    for a, b in zip(path, path[1:]):
        if par[a] == b or par[b] == a:
            continue
        if walk_ancestor(par, node, a) == walk_ancestor(par, node, b):
            return False
    return True


def test_criterion_10_link_failures(emit):
    runs, _ = corpus()
    checked, bad = 0, []
    for seed, run in enumerate(runs):
        for v, rec in run.links.items():
            checked += 1
            best, _ = optimal_link_alternate(run.graph, run.sink, v, run.tree.parent[v])
            if rec.cost < best or link_validity_problems(run.graph, run.sink, rec):
                bad.append((seed, v))
    exact, classified = 0, 0
    for i, run in enumerate(small_corpus()):
        for v, rec in run.links.items():
            best, path = optimal_link_alternate(run.graph, run.sink, v, run.tree.parent[v])
            if rec.cost < best or link_validity_problems(run.graph, run.sink, rec):
                bad.append(("small", i, v))
            if _green_only(run.tree, v, path):
                classified += 1
                if rec.cost == best:
                    exact += 1
                else:
                    bad.append(("green-only", i, v, rec.cost, best))
    ok = not bad and classified > 0
    emit(10, ok, f"{checked} corpus links >= oracle and avoid the link; "
                 f"green-only oracle paths on n<=8: {exact}/{classified} exact")
    assert not bad
    assert classified > 0
