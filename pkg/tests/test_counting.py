import random
from itertools import combinations

import pytest

from specsat.counting import (analyze_pattern, automorphisms, brute_force_copies, c_n_F, c_parts_F,
                              chromatic_number, count_copies, count_copies_through_edge,
                              covering_number, estimate_alpha_F, min_hitting_set, named_pattern)
from specsat.errors import InvalidArgument
from specsat.families import l_graph, perturbed_multipartite, t_star_graph, turan, y_graph
from specsat.graph import (Graph, book_graph, complete_graph, cycle_graph, petersen_graph,
                           wheel_graph)

from conftest import random_graph


def random_connected(rng, n):
    while True:
        g = random_graph(rng, n, 0.6)
        if g.is_connected() and g.m:
            return g


def test_chromatic_numbers():
    assert chromatic_number(complete_graph(4)) == 4
    assert chromatic_number(cycle_graph(5)) == 3
    assert chromatic_number(petersen_graph()) == 3
    assert chromatic_number(wheel_graph(5)) == 4
    assert chromatic_number(Graph.empty(3)) == 1


def test_pattern_analysis():
    k3 = analyze_pattern(complete_graph(3))
    assert (k3.chi, k3.aut, len(k3.critical_edges)) == (3, 6, 3)
    c5 = analyze_pattern(cycle_graph(5))
    assert (c5.chi, c5.aut, len(c5.critical_edges)) == (3, 10, 5)
    b2 = analyze_pattern(book_graph(2))
    assert (b2.chi, b2.aut) == (3, 4) and b2.is_color_critical
    assert len(automorphisms(petersen_graph())) == 120
    with pytest.raises(InvalidArgument):
        analyze_pattern(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_count_examples():
    K3, C5 = named_pattern("K3"), named_pattern("C5")
    assert count_copies(K3, complete_graph(4)) == 4
    assert count_copies(K3, turan(6, 3).graph) == 8
    assert count_copies(C5, complete_graph(5)) == 12


def test_count_through_edge_examples():
    K3 = named_pattern("K3")
    g = perturbed_multipartite([4, 3], [(0, 1)], [])
    assert count_copies_through_edge(K3, g, (0, 1)) == 3
    for e in complete_graph(4).edges():
        assert count_copies_through_edge(K3, complete_graph(4), e) == 2
    with pytest.raises(InvalidArgument):
        count_copies_through_edge(K3, turan(6, 2).graph, (0, 1))


def test_oracle_battery():
    # 200 random (F <= 5 vertices, G <= 10 vertices) pairs
    rng = random.Random(777)
    for _ in range(200):
        F = analyze_pattern(random_connected(rng, rng.randint(2, 5)))
        g = random_graph(rng, rng.randint(1, 10), rng.uniform(0.3, 0.9))
        n_f = count_copies(F, g)
        assert n_f == brute_force_copies(F, g)
        if g.m:
            e = rng.choice(g.edges())
            assert n_f - count_copies(F, g.remove_edges([e])) == count_copies_through_edge(F, g, e)


def test_partitioned_path_agrees_with_plain():
    K3, C5, K4 = named_pattern("K3"), named_pattern("C5"), named_pattern("K4")
    pg = perturbed_multipartite([5, 4], [(0, 1), (1, 2), (5, 6)], [(0, 5)])
    for F in (K3, C5):
        assert count_copies(F, pg) == count_copies(F, pg.graph) == brute_force_copies(F, pg.graph)
    pg3 = perturbed_multipartite([3, 3, 2], [(0, 1), (3, 4)], [(0, 6)])
    assert count_copies(K4, pg3) == brute_force_copies(K4, pg3.graph)


def test_c_n_F_examples():
    K3, K4 = named_pattern("K3"), named_pattern("K4")
    assert c_n_F(7, K3) == 3
    for n in (6, 8, 10):
        assert c_n_F(n, K3) == n // 2
        g = turan(n, 2).graph.add_edges([(0, 1)])
        assert count_copies(K3, g) == n // 2
    assert c_n_F(12, K4) == 16
    assert count_copies(K4, turan(12, 3).graph.add_edges([(0, 1)])) == 16
    assert c_n_F(60, K4) == 400
    assert c_parts_F([4, 4], K3) == 4
    assert c_parts_F([4, 3], K3) == 3
    with pytest.raises(InvalidArgument):
        c_parts_F([3, 4], K3)


def test_c_n_F_is_minimum_over_single_edges():
    C5 = named_pattern("C5")
    for n in (7, 9):
        base = turan(n, 2)
        best = min(count_copies(C5, base.graph.add_edges([e]))
                   for part in base.parts for e in combinations(part, 2))
        assert c_n_F(n, C5) == best


def test_family_supersaturation_identities():
    K3 = named_pattern("K3")
    for n in (40, 100):
        for q in range(1, 6):
            assert count_copies(K3, y_graph(n, 2, q)) == q * (n // 2)
            if q != 3:
                assert count_copies(K3, l_graph(n, 2, q)) == q * (n // 2)
    assert count_copies(K3, l_graph(100, 2, 3)) == 151
    assert count_copies(K3, t_star_graph(99, 2, 4)) == 196


def test_covering_examples():
    K3 = named_pattern("K3")
    assert covering_number(K3, turan(8, 2).graph) == 0
    assert covering_number(K3, y_graph(20, 2, 3)) == 3
    assert covering_number(K3, complete_graph(4)) == 2


def test_min_hitting_set_brute_force():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(3, 8)
        sets = [sum(1 << v for v in rng.sample(range(n), rng.randint(1, 3)))
                for _ in range(rng.randint(1, 8))]
        size, verts = min_hitting_set(sets)
        mask = sum(1 << v for v in verts)
        assert all(s & mask for s in sets) and len(verts) == size
        best = next(k for k in range(n + 1)
                    if any(all(s & sum(1 << v for v in c) for s in sets)
                           for c in combinations(range(n), k)))
        assert size == best


def test_estimate_alpha():
    alpha, resid = estimate_alpha_F(named_pattern("K3"), [20, 40, 80])
    assert alpha == pytest.approx(0.5) and resid == pytest.approx(0, abs=1e-12)
    alpha, _ = estimate_alpha_F(named_pattern("K4"), [12, 24, 48])
    assert alpha == pytest.approx(1 / 9)
    with pytest.raises(InvalidArgument):
        estimate_alpha_F(named_pattern("K3"), [6, 6, 6])
