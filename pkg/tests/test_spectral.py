import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specsat.errors import DivergenceRisk, InvalidArgument, WalkOverflowError
from specsat.families import embed, l_graph, turan, y_graph
from specsat.graph import (Graph, complete_graph, complete_multipartite, matching_graph, path_graph,
                           petersen_graph, star_graph)
from specsat.spectral import (EmbeddedSpec, certified_compare, compare, embedded_spec_of,
                              kelmans_rewire, multipartite_lambda, rayleigh, spectral_radius,
                              walk_count, walk_series, zhang_lambda)

from test_graph import graphs


def test_closed_form_examples():
    assert abs(spectral_radius(complete_multipartite([3, 3])).lam - 3) <= 1e-10
    assert abs(spectral_radius(star_graph(3)).lam - math.sqrt(3)) <= 1e-10
    assert abs(spectral_radius(turan(7, 2).graph).lam - math.sqrt(12)) <= 1e-10
    assert abs(spectral_radius(petersen_graph()).lam - 3) <= 1e-10


def test_multipartite_lambda_examples():
    assert multipartite_lambda([3, 3]) == pytest.approx(3, abs=1e-14)
    assert multipartite_lambda([4, 3]) == pytest.approx(math.sqrt(12), abs=1e-14)
    assert multipartite_lambda([2, 2, 2]) == pytest.approx(4, abs=1e-14)
    with pytest.raises(InvalidArgument):
        multipartite_lambda([5])


def test_disconnected_and_empty():
    g = complete_graph(4).disjoint_union(star_graph(2))
    res = spectral_radius(g)
    assert res.lam == pytest.approx(3, abs=1e-10)
    assert np.all(res.perron[4:] == 0)
    assert spectral_radius(Graph.empty(3)).lam == 0.0


@given(graphs(max_n=14))
@settings(max_examples=80, deadline=None)
def test_interval_encloses_numpy_eigenvalue(g):
    res = spectral_radius(g, tol=1e-10)
    ref = max(np.linalg.eigvalsh(g.to_numpy())) if g.n else 0.0
    lo, hi = res.interval
    assert lo <= res.lam <= hi
    # numpy's own error is a few ulps of the norm
    assert lo - 1e-12 <= ref <= hi + 1e-12
    if g.m:
        assert np.linalg.norm(res.perron) == pytest.approx(1, abs=1e-12)
        assert np.all(res.perron >= 0)


@given(graphs(max_n=12))
@settings(max_examples=40, deadline=None)
def test_rayleigh_lower_bound(g):
    res = spectral_radius(g)
    assert rayleigh(g, res.perron) <= res.hi + 1e-12


def test_connected_perron_positive():
    res = spectral_radius(y_graph(40, 2, 3).graph)
    assert np.all(res.perron > 0)


def test_compare():
    verdict, a, b = certified_compare(y_graph(100, 2, 2).graph, l_graph(100, 2, 2).graph)
    assert verdict == "<"
    assert compare(a, a) == "indeterminate"


def test_walk_count_examples():
    assert walk_count(complete_graph(3), 4) == 24
    assert walk_count(star_graph(3), 4) == 18
    assert walk_count(matching_graph(2), 5) == 4
    with pytest.raises(InvalidArgument):
        walk_count(complete_graph(3), 0)
    with pytest.raises(WalkOverflowError):
        walk_count(complete_graph(3), 65)


def test_walk_count_matches_matrix_power():
    g = petersen_graph()
    a = g.to_numpy().astype(np.int64)
    for length in range(1, 9):
        assert walk_count(g, length) == int(np.linalg.matrix_power(a, length - 1).sum())


def test_walk_series_examples():
    assert walk_series(Graph.empty(3), 5.0) == (0.0, 0.0)
    val, tail = walk_series(complete_graph(3), 10.0, 1e-12)
    assert val == pytest.approx(0.075, abs=1e-12)
    assert tail <= 1e-12
    x = 10.0
    val, _ = walk_series(star_graph(2), x, 1e-14)
    terms = []
    for ell in range(1, 200):
        w = walk_count(star_graph(2), ell + 1) if ell + 1 <= 64 else 0
        terms.append(w / x ** (ell + 1))
    assert val == pytest.approx(math.fsum(terms), abs=1e-12)
    with pytest.raises(DivergenceRisk):
        walk_series(star_graph(5), 4.0)


def test_zhang_lambda_examples():
    spec = EmbeddedSpec.of([4, 3], [Graph.from_edges(2, [(0, 1)]), None])
    pg = spec.realize()
    assert abs(zhang_lambda(spec) - spectral_radius(pg.graph).lam) <= 1e-8
    assert zhang_lambda(EmbeddedSpec.of([3, 3])) == pytest.approx(3, abs=1e-10)
    spec = EmbeddedSpec.of([200, 200], [star_graph(5), None])
    assert abs(zhang_lambda(spec) - spectral_radius(spec.realize().graph).lam) <= 1e-8


@given(st.sampled_from([2, 3]), st.integers(30, 80), st.integers(0, 4),
       st.sampled_from(["matching", "star", "path"]))
@settings(max_examples=25, deadline=None)
def test_dual_solver_property(r, n, q, kind):
    shape = {"matching": matching_graph, "star": star_graph, "path": lambda k: path_graph(k + 1)}[kind]
    h = shape(q) if q else None
    sizes = [n // r + (1 if i < n % r else 0) for i in range(r)]
    pg = embed(sizes, [h] + [None] * (r - 1))
    assert abs(zhang_lambda(embedded_spec_of(pg)) - spectral_radius(pg.graph).lam) <= 1e-8


def test_move_vertex():
    spec = EmbeddedSpec.of([5, 3], [star_graph(2), None]).move_vertex(0, 1)
    assert spec.sizes == (4, 4)
    with pytest.raises(InvalidArgument):
        EmbeddedSpec.of([3, 3], [star_graph(2), None]).move_vertex(0, 1)


def test_kelmans_examples():
    p3 = path_graph(3)
    assert kelmans_rewire(p3, 0, 2) == p3
    p4 = path_graph(4)
    g2 = kelmans_rewire(p4, 1, 2)
    assert g2 == Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert spectral_radius(g2).lo > spectral_radius(p4).hi


@given(graphs(max_n=9), st.data())
@settings(max_examples=40, deadline=None)
def test_kelmans_never_decreases(g, data):
    if g.n < 2 or not g.is_connected():
        return
    u = data.draw(st.integers(0, g.n - 1))
    v = data.draw(st.integers(0, g.n - 1).filter(lambda x: x != u))
    h = kelmans_rewire(g, u, v)
    assert h.m == g.m
    assert spectral_radius(h).hi >= spectral_radius(g).lo - 1e-12
