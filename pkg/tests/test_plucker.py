import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pluckertree import gpgraph
from pluckertree.complex import signature
from pluckertree.plucker import RelationError, count_admissible, enumerate_relations, make_relation
from pluckertree.poly import PointConfiguration, evaluate
from pluckertree.solids import SolidTable

from conftest import DATASETS, load


def raw_value(S, quad, X):
    """Γ(S|ijkl) evaluated straight from determinants, no normal forms."""
    i, j, k, l = quad
    D = lambda *idx: X.det(tuple(S) + idx)  # noqa: E731
    return D(i, j) * D(k, l) - D(i, k) * D(j, l) + D(i, l) * D(j, k)


@pytest.mark.parametrize("name", DATASETS)
def test_random_admissible_relations_vanish(name):
    cx = load(name)
    graph = gpgraph.build(cx)
    table = graph.table
    rng = random.Random(name)
    picks = [rng.randrange(graph.num_nodes) for _ in range(200)]
    X = PointConfiguration.random(table.n, table.d, rng)
    for u in picks:
        p = graph.relation(u).polynomial()
        assert len(p) == 3
        assert evaluate(p, X, table) == 0


@pytest.mark.parametrize("name", ["intro-example", "jockusch-d3-6"])
def test_relation_polynomial_equals_raw_determinant_form(name):
    cx = load(name)
    table = SolidTable(cx)
    rng = random.Random(7)
    X = PointConfiguration.random(table.n, table.d, rng)
    # term by term, so that a sign error cannot hide inside a vanishing sum
    for rel in list(enumerate_relations(table))[:60:2]:
        S, (i, j, k, l) = rel.S, rel.quad
        D = lambda *idx: X.det(tuple(S) + idx)  # noqa: E731
        raw_terms = [D(i, j) * D(k, l), -D(i, k) * D(j, l), D(i, l) * D(j, k)]
        for t, raw in zip(rel.terms, raw_terms):
            got = t.coeff * X.det(table.solid(t.a).verts) * X.det(table.solid(t.b).verts)
            assert got == raw


def test_raw_relation_vanishes():
    rng = random.Random(1)
    X = PointConfiguration.random(9, 4, rng)
    assert raw_value((0, 1, 2), (3, 4, 5, 6), X) == 0


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_unsorted_quadruple_contributes_its_signature(data):
    table = SolidTable(load("jockusch-d3-6"))
    verts = data.draw(st.permutations(list(range(table.n))))
    S, quad = verts[:3], verts[3:7]
    a = make_relation(S, quad, 1, table)
    b = make_relation(S, sorted(quad), signature(quad), table)
    assert a.polynomial() == b.polynomial()
    assert make_relation(S, quad, -1, table).polynomial() == -a.polynomial()


def test_relation_errors():
    table = SolidTable(load("intro-example"))
    with pytest.raises(RelationError):
        make_relation((0, 1), (2, 3, 4, 5), 1, table)
    with pytest.raises(RelationError):
        make_relation((0, 1, 2), (2, 3, 4, 5), 1, table)
    with pytest.raises(RelationError):
        make_relation((0, 1, 2), (3, 4, 5), 1, table)
    with pytest.raises(RelationError):
        make_relation((0, 1, 2), (3, 4, 5, 6), 0, table)


def test_enumeration_matches_graph_rows():
    table = SolidTable(load("jockusch-d3-5"))
    graph = gpgraph.build(table)
    assert count_admissible(table) == graph.num_relations
    rels = list(enumerate_relations(table))
    assert [r.polynomial() for r in rels] == [graph.relation(u).polynomial() for u in range(graph.num_nodes)]


def test_intro_example_relation_is_all_positive():
    cx = load("intro-example")
    table = SolidTable(cx)
    vt = cx.vertices
    rel = make_relation(vt.encode("0 4 5".split()), vt.encode("1 2 6 7".split()), 1, table)
    assert rel.admissible and not rel.unknowns()
    assert all(t.coeff == 1 for t in rel.terms)
