import io

import pytest

from pluckertree import gpgraph
from pluckertree.gpgraph import SyntheticGraph, tree_candidate_check, tree_problems
from pluckertree.solids import SolidTable

from conftest import load


@pytest.fixture(scope="module")
def g6():
    return gpgraph.build(load("jockusch-d3-6"))


def test_node_pairs_are_negatives(g6):
    for r in range(0, g6.num_relations, 97):
        a, b = g6.relation(2 * r), g6.relation(2 * r + 1)
        assert a.polynomial() == -b.polynomial()
        assert g6.sign(2 * r) == 1 and g6.sign(2 * r + 1) == -1


def test_consistency_means_known_terms_positive(g6):
    for u in range(0, g6.num_nodes, 37):
        rel = g6.relation(u)
        assert g6.is_consistent(u) == rel.sign_consistent
        assert rel.admissible


def test_edges_join_opposite_coefficients_and_never_a_node_with_its_negative(g6):
    seen = 0
    for c, u, v in g6.edges_of_color(g6.colors()[3], consistent_only=True):
        assert (u ^ v) != 1
        tu, tv = g6.relation(u).term_of(c), g6.relation(v).term_of(c)
        assert tu.coeff == -tv.coeff
        assert c in g6.edges_between(u, v)
        seen += 1
    assert seen > 0


def test_only_unknown_colors_between_consistent_nodes():
    g = gpgraph.build(load("jockusch-d3-5"))
    table = g.table
    for c, u, v in g.edges(consistent_only=True):
        assert not table.known(c)


def test_edge_count_and_dump_agree():
    g = gpgraph.build(load("intro-example"))
    buf = io.StringIO()
    n = g.dump_edges(buf)
    assert n == g.num_edges() == len(g.edges())
    assert len(buf.getvalue().splitlines()) == n


def test_find_locates_nodes(g6):
    u = 2 * 123 + 1
    rel = g6.relation(u)
    assert g6.find(rel.S, rel.quad, -1) == u
    assert g6.find(rel.S, rel.quad[::-1], -1) == u  # reversing four entries is an even permutation
    q = rel.quad
    assert g6.find(rel.S, (q[1], q[0], q[2], q[3]), 1) == u


def test_vertex_subset_and_s_filter():
    cx = load("jockusch-d3-6")
    sub = gpgraph.build(cx, vertex_subset=range(8))
    assert all(max(g for g in sub.relation(u).S + sub.relation(u).quad) < 8 for u in range(sub.num_nodes))
    only0 = gpgraph.build(cx, s_filter=lambda S: 0 in S)
    assert all(0 in only0.relation(u).S for u in range(only0.num_nodes))
    assert gpgraph.build(cx, vertex_subset=range(4)).num_nodes == 0


def test_forbidden_facets_change_the_graph():
    from pluckertree.generators import dataset
    cx = load("jockusch-d3-6")
    full = gpgraph.build(cx)
    cut = gpgraph.build(SolidTable(cx, dataset("jockusch-d3-6").forbidden_for(cx)))
    assert cut.num_relations < full.num_relations


def test_tree_problems_on_synthetic_shapes():
    un = {0: [1], 1: [1, 2], 2: [2]}.get
    assert tree_candidate_check([0, 1, 2], [(1, 0, 1), (2, 1, 2)], un)
    assert "not connected" in tree_problems([0, 1, 2], [(1, 0, 1)], un) or \
        any("|E|" in p for p in tree_problems([0, 1, 2], [(1, 0, 1)], un))
    assert any("covered" in p for p in tree_problems([0, 1], [(1, 0, 1)], un))
    assert "cycle" in tree_problems([0, 1, 2], [(1, 0, 1), (2, 1, 2), (3, 0, 2)], lambda u: [1, 2, 3])


def test_synthetic_graph_edges_respect_partners():
    g = SyntheticGraph([((1, 1),), ((1, -1),), ((1, -1),)], partner=[1, 0, None])
    assert g.edges() == [(1, 0, 2)]
