import random

from hypothesis import given, settings, strategies as st

from specsat.canon import canonical_code, canonical_graph, is_isomorphic
from specsat.graph import Graph, all_labeled_graphs, complete_multipartite, path_graph, petersen_graph

from test_graph import graphs


def test_relabel_invariance_k33():
    g = complete_multipartite([3, 3])
    rng = random.Random(3)
    for _ in range(20):
        perm = list(range(6))
        rng.shuffle(perm)
        assert canonical_code(g.relabel(perm)) == canonical_code(g)


def test_p3_vs_k2_plus_k1():
    assert canonical_code(path_graph(3)) != canonical_code(Graph.from_edges(3, [(0, 1)]))


def test_labeled_bucketing_counts():
    # number of unlabeled graphs on n vertices
    for n, expected in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34)]:
        assert len({canonical_code(g) for g in all_labeled_graphs(n)}) == expected


@given(graphs(max_n=10), st.randoms(use_true_random=False))
@settings(max_examples=60)
def test_code_is_relabel_invariant(g, r):
    perm = list(range(g.n))
    r.shuffle(perm)
    h = g.relabel(perm)
    assert canonical_code(h) == canonical_code(g)
    assert canonical_graph(h) == canonical_graph(g)
    assert is_isomorphic(g, h)


def test_regular_graph_symmetry():
    p = petersen_graph()
    assert is_isomorphic(p, p.relabel([9, 8, 7, 6, 5, 4, 3, 2, 1, 0]))
    assert not is_isomorphic(p, complete_multipartite([5, 5]))
