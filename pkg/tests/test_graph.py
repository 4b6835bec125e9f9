import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specsat.errors import InvalidArgument
from specsat.graph import (Graph, complete_graph, complete_multipartite, cycle_graph, degree_stats,
                           petersen_graph, star_graph)


def test_complete_multipartite_examples():
    assert complete_multipartite([3, 3]).m == 9
    k1 = complete_multipartite([1])
    assert k1.n == 1 and k1.m == 0
    assert complete_multipartite([2, 2, 2]).m == 12


def test_degree_stats_examples():
    assert degree_stats(complete_multipartite([4, 3])) == (3, 4, 84)
    assert degree_stats(Graph.empty(5)) == (0, 0, 0)
    assert degree_stats(complete_graph(4)) == (3, 3, 36)


def test_named_graphs():
    assert cycle_graph(5).m == 5
    assert star_graph(3).m == 3 and star_graph(3).max_degree() == 3
    p = petersen_graph()
    assert p.n == 10 and p.m == 15 and set(p.degrees()) == {3}


def test_rejects_loops_and_out_of_range():
    with pytest.raises(InvalidArgument):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(InvalidArgument):
        Graph.from_edges(3, [(0, 3)])


def test_matrix_roundtrip():
    g = petersen_graph()
    assert Graph.from_matrix(g.to_numpy()) == g
    a = g.to_numpy()
    assert np.array_equal(a, a.T)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return Graph.from_edges(n, chosen)


@given(graphs())
def test_adjacency_invariants(g):
    for u in range(g.n):
        assert not g.has_edge(u, u)
        for v in range(g.n):
            assert g.has_edge(u, v) == g.has_edge(v, u)
    assert 2 * g.m == sum(g.degrees())
    _, _, sq = degree_stats(g)
    assert sq <= g.m * g.m + g.m


@given(graphs(), st.randoms(use_true_random=False))
@settings(max_examples=50)
def test_relabel_preserves_degree_multiset(g, r):
    perm = list(range(g.n))
    r.shuffle(perm)
    h = g.relabel(perm)
    assert sorted(h.degrees()) == sorted(g.degrees()) and h.m == g.m


def test_components():
    g = Graph.from_edges(5, [(0, 1), (3, 4)])
    assert sorted(map(sorted, g.components())) == [[0, 1], [2], [3, 4]]
    assert not g.is_connected()
    assert complete_graph(random.Random(1).randint(2, 6)).is_connected()
