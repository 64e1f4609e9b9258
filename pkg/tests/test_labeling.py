import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import S, X, X1, X2
from oracles import walk_ancestor
from snfr import Graph, build_network, centralized_labels, is_descendant, random_tree, run_wake_and_label


def label(graph, root=0, **kw):
    net = build_network(graph, root, **kw)
    labels, stats = run_wake_and_label(net, root)
    return net, labels, stats


def check_invariants(net, labels):
    tree = net.tree
    n = tree.n
    assert (labels.start[tree.root], labels.end[tree.root]) == (1, 2 * n)
    for v in range(n):
        assert 1 <= labels.start[v] < labels.end[v] <= 2 * n
        assert labels.end[v] - labels.start[v] + 1 == 2 * len(tree.subtree(v))
        kids = [labels.interval(c) for c in tree.children[v]]
        for a, b in kids:
            assert labels.start[v] < a and b < labels.end[v]
        kids.sort()
        assert all(kids[i][1] < kids[i + 1][0] for i in range(len(kids) - 1))


def test_g2(g2):
    net, labels, stats = label(g2)
    assert [labels.interval(v) for v in (S, X, X1, X2)] == [(1, 8), (2, 7), (3, 4), (5, 6)]
    assert stats.sent == {"WAKE": 3, "COUNT": 3, "ALLOC": 3}
    assert net.actors[X].size == 3


def test_single_node():
    net, labels, stats = label(Graph(1))
    assert labels.interval(0) == (1, 2)
    assert stats.total_sent == 0


def test_chain():
    _, labels, _ = label(Graph(3, [(0, 1, 1), (1, 2, 1)]))
    assert [labels.interval(v) for v in range(3)] == [(1, 6), (2, 5), (3, 4)]


def test_star_wakes_each_leaf_once():
    k = 6
    net, _, stats = label(Graph(k + 1, [(0, i, 1) for i in range(1, k + 1)]))
    assert stats.sent["WAKE"] == k
    assert stats.sent["COUNT"] == k
    assert all(net.actors[i].size == 1 for i in range(1, k + 1))


@pytest.mark.parametrize("seed", range(10))
def test_random_tree_invariants_and_message_count(seed):
    n = random.Random(seed).randint(2, 300)
    net, labels, stats = label(random_tree(n, seed))
    check_invariants(net, labels)
    assert stats.total_sent == 3 * (n - 1) <= 3 * n
    assert labels == centralized_labels(net.tree)


def test_bounded_inbox_gives_same_labels():
    g = random_tree(200, 1)
    _, a, _ = label(g)
    _, b, st = label(g, inbox_capacity=1)
    assert a == b
    assert st.retries > 0


def test_sibling_handoff_matches_siblings_own_labels():
    net, labels, _ = label(random_tree(150, 4))
    for a in net.actors:
        if a.parent is None:
            continue
        assert a.parent_interval == labels.interval(a.parent)
        sibs = {c for c in net.tree.children[a.parent] if c != a.id}
        assert set(a.sibling_intervals) == sibs
        for sib, iv in a.sibling_intervals.items():
            assert iv == labels.interval(sib)


def test_is_descendant_examples(g2):
    _, labels, _ = label(g2)
    assert is_descendant(labels, X1, X1)
    assert is_descendant(labels, X1, X)
    assert not is_descendant(labels, X1, X2)
    assert all(is_descendant(labels, v, S) for v in range(4))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 120), st.integers(0, 10**6), st.data())
def test_is_descendant_agrees_with_parent_walk(n, seed, data):
    net, labels, _ = label(random_tree(n, seed))
    for _ in range(30):
        u = data.draw(st.integers(0, n - 1))
        v = data.draw(st.integers(0, n - 1))
        assert is_descendant(labels, u, v) == walk_ancestor(net.tree.parent, v, u)
