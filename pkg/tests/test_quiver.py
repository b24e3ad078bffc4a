import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from knothost.engine import KnowledgeBase, Polarity, saturate
from knothost.knots import KnotType, Named, Tri
from knothost.quiver import (
    CAVEAT,
    HostingQuiver,
    UnknownVertexError,
    UnsaturatedError,
    build_quiver,
    distance_matrix,
    friendship_components,
    friendship_distance,
    friendship_graph,
    h_infinity,
    h_set,
    nth_friends,
    rigidity_checks,
    s_infinity,
    s_iter,
    strongly_connected_components,
)
from knothost.runner import parse_universe


@pytest.fixture(scope="module")
def seed_q(seed_kb):
    return build_quiver(seed_kb)


def vertex(i):
    return KnotType((Named(f"{i + 3}_1"),))


def quiver_from_edges(n, edges, reflexive=True):
    verts = tuple(vertex(i) for i in range(n))
    yes = {(verts[a], verts[b]) for a, b in edges}
    if reflexive:
        yes |= {(v, v) for v in verts}
    out = {v: frozenset(b for a, b in yes if a == v) for v in verts}
    inc = {v: frozenset(a for a, b in yes if b == v) for v in verts}
    return HostingQuiver(verts, {e: Tri.YES for e in yes}, out, inc)


def to_nx(q):
    g = nx.DiGraph()
    g.add_nodes_from(q.vertices)
    g.add_edges_from(q.edges(Tri.YES))
    return g


random_quivers = st.integers(1, 9).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * n),
    )
)


# -- seed examples ------------------------------------------------------------


def test_quiver_matches_kb(seed_kb, seed_q):
    for h in seed_kb.universe:
        for g in seed_kb.universe:
            assert seed_q.edge_label(h, g) is seed_kb.status(h, g)


def test_edge_labels(seed_q, k):
    assert seed_q.edge_label(k("4_1"), k("8_19")) is Tri.UNKNOWN
    assert seed_q.edge_label(k("3_1"), k("4_1")) is Tri.NO
    assert seed_q.edge_label(k("3_1"), k("8_19")) is Tri.YES
    with pytest.raises(UnknownVertexError):
        seed_q.edge_label(k("3_1"), k("6_1"))


def test_unsaturated_rejected(table):
    kb = KnowledgeBase(parse_universe("3_1", table), table)
    with pytest.raises(UnsaturatedError):
        build_quiver(kb)


def test_seed_friendship(seed_q, k):
    g = friendship_graph(seed_q)
    assert g.edges() == [(k("3_1"), k("8_19"))]
    assert not g.has_edge(k("3_1"), k("4_1"))
    assert friendship_distance(g, k("3_1"), k("8_19")) == 1
    assert friendship_distance(g, k("3_1"), k("3_1")) == 0
    assert friendship_distance(g, k("3_1"), k("4_1")) == math.inf
    assert nth_friends(g, k("3_1"), 1) == {k("8_19")}
    assert nth_friends(g, k("3_1"), 0) == {k("3_1")}
    assert nth_friends(g, k("3_1"), 2) == set()
    assert [k("3_1"), k("8_19")] in friendship_components(g)


def test_seed_reachability(seed_q, k):
    assert s_iter(seed_q, k("3_1"), 0) == {k("3_1")}
    assert s_iter(seed_q, k("4_1"), 1) >= {k("4_1"), k("3_1")}
    assert s_iter(seed_q, k("4_1"), 2) >= {k("4_1"), k("3_1"), k("8_19")}
    assert s_infinity(seed_q, k("4_1")) >= {k("4_1"), k("3_1"), k("8_19")}
    assert h_set(seed_q, k("3_1")) >= {k("3_1"), k("4_1"), k("8_19")}
    assert h_set(seed_q, k("4_1")) == {k("4_1")}
    with pytest.raises(ValueError):
        s_iter(seed_q, k("3_1"), -1)


def test_isolated_vertex_reach(table):
    kb = saturate(KnowledgeBase(parse_universe("6_1, 5_2", table), table))
    q = build_quiver(kb)
    for v in kb.universe:
        assert s_infinity(q, v) == {v}


def test_seed_sccs(seed_q, k):
    sccs = strongly_connected_components(seed_q)
    assert [k("3_1"), k("8_19")] in sccs
    assert [k("5_1")] in sccs
    assert sorted(v for c in sccs for v in c) == sorted(seed_q.vertices)


def test_single_vertex_scc(table):
    kb = saturate(KnowledgeBase(parse_universe("4_1", table), table))
    assert strongly_connected_components(build_quiver(kb)) == [[kb.universe[0]]]


def test_seed_duality_and_chain_check(seed_q):
    verts = seed_q.vertices
    for a in verts:
        for b in verts:
            assert (b in s_infinity(seed_q, a)) == (a in h_infinity(seed_q, b))
    g = friendship_graph(seed_q)
    for a in verts:
        for b in verts:
            if friendship_distance(g, a, b) < math.inf:
                assert b in s_infinity(seed_q, a) and a in s_infinity(seed_q, b)


def test_seed_rigidity(seed_q, k):
    report = rigidity_checks(seed_q)
    assert report.friendship_implies_mutual_reachability
    assert report.label == "within-KB evidence, not a theorem" and report.caveat == CAVEAT
    n = len(seed_q.vertices)
    assert report.pairs_checked == n * (n - 1) // 2


def test_rigidity_isolated_pair():
    q = quiver_from_edges(2, [])
    report = rigidity_checks(q)
    assert report.same_outgoing == [(vertex(0), vertex(1), False)]
    assert report.same_incoming == [(vertex(0), vertex(1), False)]


def test_rigidity_friends_flagged():
    q = quiver_from_edges(3, [(0, 1), (1, 0)])
    report = rigidity_checks(q)
    assert (vertex(0), vertex(1), True) in report.same_outgoing
    assert all(pair[:2] != (vertex(0), vertex(2)) for pair in report.same_outgoing)


# -- random quivers against networkx ------------------------------------------


@settings(max_examples=80, deadline=None)
@given(random_quivers)
def test_sccs_match_networkx(data):
    n, edges = data
    q = quiver_from_edges(n, edges)
    expected = sorted(sorted(c) for c in nx.strongly_connected_components(to_nx(q)))
    assert strongly_connected_components(q) == expected


@settings(max_examples=80, deadline=None)
@given(random_quivers)
def test_reachability_matches_networkx(data):
    n, edges = data
    q = quiver_from_edges(n, edges)
    g = to_nx(q)
    for v in q.vertices:
        assert s_infinity(q, v) == nx.descendants(g, v) | {v}
        assert h_infinity(q, v) == nx.ancestors(g, v) | {v}
        for w in q.vertices:
            assert (w in s_infinity(q, v)) == (v in h_infinity(q, w))
        prev = {v}
        for step in range(n + 1):
            level = s_iter(q, v, step)
            # reflexive quiver: levels grow and stay inside S^inf
            assert prev <= level <= s_infinity(q, v)
            prev = level
        assert s_iter(q, v, n) == s_infinity(q, v)


@settings(max_examples=80, deadline=None)
@given(random_quivers)
def test_distances_match_networkx(data):
    n, edges = data
    q = quiver_from_edges(n, edges)
    fg = friendship_graph(q)
    und = nx.Graph()
    und.add_nodes_from(q.vertices)
    und.add_edges_from(fg.edges())
    oracle = dict(nx.all_pairs_shortest_path_length(und))
    dm = distance_matrix(fg)
    verts = q.vertices
    for a in verts:
        assert not fg.has_edge(a, a)
        for b in verts:
            assert fg.has_edge(a, b) == fg.has_edge(b, a)
            assert dm[a][b] == oracle[a].get(b, math.inf)
            assert dm[a][b] == dm[b][a]
            for c in verts:
                assert dm[a][c] <= dm[a][b] + dm[b][c]
    assert sorted(sorted(c) for c in nx.connected_components(und)) == friendship_components(fg)


@settings(max_examples=60, deadline=None)
@given(random_quivers)
def test_friends_share_scc_and_reach(data):
    n, edges = data
    q = quiver_from_edges(n, edges)
    comp_of = {v: i for i, c in enumerate(strongly_connected_components(q)) for v in c}
    for a, b in friendship_graph(q).edges():
        assert comp_of[a] == comp_of[b]
    assert rigidity_checks(q).friendship_implies_mutual_reachability


def test_negative_edges_do_not_count(seed_kb, k):
    q = build_quiver(seed_kb)
    no = q.edges(Tri.NO)
    assert (k("3_1"), k("4_1")) in no
    assert k("4_1") not in s_infinity(q, k("3_1"))
    assert all(j.polarity is Polarity.NO for j in seed_kb.judgments.values() if (j.host, j.guest) in no)
