"""Acceptance suite.  Each test is one criterion, run at its stated
tolerance; the terminal summary prints one PASS/FAIL line per criterion.

The exhaustive n = 8 scan is marked slow and runs with ``--run-slow``.
"""

import math
import random
import subprocess
import sys
import time
from itertools import combinations

import numpy as np
import pytest

from specsat.bounds import PASS, first_key_residual_i, move_one_check
from specsat.counting import (analyze_pattern, brute_force_copies, c_n_F, count_copies,
                              count_copies_through_edge, covering_number, named_pattern)
from specsat.families import embed, l_graph, turan, turan_sizes, y_graph
from specsat.graph import (complete_graph, complete_multipartite, matching_graph, star_graph)
from specsat.harness import (build_instance, load_config, move_one_battery, verify_covering,
                             verify_min_max, verify_ning_zhai_exhaustive, verify_shift,
                             verify_tightness)
from specsat.spectral import embedded_spec_of, multipartite_lambda, spectral_radius, zhang_lambda

from conftest import random_graph

K3 = named_pattern("K3")


def failures(checks, names=None):
    return [c for c in checks if (names is None or c["name"] in names) and c["verdict"] != PASS]


@pytest.mark.criterion(1, "dual-solver agreement within 1e-8")
def test_criterion_01_dual_solver():
    t0 = time.perf_counter()
    shapes = ([None] + [matching_graph(q) for q in range(1, 5)]
              + [star_graph(q) for q in range(1, 7)] + [complete_graph(3)])
    worst, count = 0.0, 0
    for r in (2, 3):
        for n in (6, 7, 12, 60, 200, 400):
            sizes = turan_sizes(n, r)
            for h in shapes:
                # the embedded graph has to fit in a largest part
                if h is not None and h.n > sizes[0]:
                    continue
                pg = embed(sizes, [h] + [None] * (r - 1))
                diff = abs(zhang_lambda(embedded_spec_of(pg)) - spectral_radius(pg.graph).lam)
                worst = max(worst, diff)
                count += 1
                assert diff <= 1e-8, (n, r, h)
    elapsed = time.perf_counter() - t0
    print(f"criterion 1: {count} instances, worst |diff| = {worst:.3e}, {elapsed:.1f}s")
    assert elapsed < 120


@pytest.mark.criterion(2, "closed-form spectra")
def test_criterion_02_closed_forms():
    for a in range(1, 21):
        for b in range(1, 21):
            lam = spectral_radius(complete_multipartite([a, b])).lam
            assert abs(lam - math.sqrt(a * b)) <= 1e-10, (a, b)
    worst = 0.0
    for r in (2, 3, 4):
        for n in range(r, 401):
            sizes = turan_sizes(n, r)
            diff = abs(multipartite_lambda(sizes) - spectral_radius(complete_multipartite(sizes)).lam)
            worst = max(worst, diff)
            assert diff <= 1e-8, (n, r)
    print(f"criterion 2: worst Turan |diff| = {worst:.3e}")


def matrix_walks(h, vertices):
    a = np.array(h.to_numpy(dtype=np.int64), dtype=object)
    return int(np.linalg.matrix_power(a, vertices - 1).sum()) if vertices > 1 else h.n


@pytest.mark.criterion(3, "walk-count identities, exact")
def test_criterion_03_walk_counts():
    from specsat.spectral import walk_count
    for t in range(2, 13):
        for a in range(1, 7):
            s = star_graph(a)
            assert matrix_walks(s, 2 * t) == walk_count(s, 2 * t) == 2 * a ** t
            assert matrix_walks(s, 2 * t + 1) == walk_count(s, 2 * t + 1) == a ** (t + 1) + a ** t
        k3 = complete_graph(3)
        assert matrix_walks(k3, t) == walk_count(k3, t) == 3 * 2 ** (t - 1)
        for q in range(1, 7):
            m = matching_graph(q)
            assert matrix_walks(m, t) == walk_count(m, t) == 2 * q


@pytest.mark.criterion(4, "Y strict minimum and L strict maximum over T(n,r)+q edges")
def test_criterion_04_min_max():
    t0 = time.perf_counter()
    runs = [(400, 2, q) for q in (1, 2, 3, 4)] + [(600, 3, q) for q in (1, 2, 3)]
    for n, r, q in runs:
        rep = verify_min_max(n, r, q)
        roles = {o["role"] for o in rep.observations if o["role"]}
        if rep.params["classes"] == 1:
            # a single class: Y and L coincide
            assert y_graph(n, r, q).graph.m == l_graph(n, r, q).graph.m
        else:
            assert roles == {"Y", "L"}
            names = {"Y-below-class", "class-below-L", "triangle-beats-star"}
            bad = failures(rep.checks, names)
            assert not bad, (n, r, q, bad)
        if q == 3:
            tri = [c for c in rep.checks if c["name"] == "triangle-beats-star"]
            assert tri and all(c["verdict"] == PASS for c in tri), (n, r)
        print(f"criterion 4: ({n},{r},{q}) classes={rep.params['classes']} status={rep.status}")
    elapsed = time.perf_counter() - t0
    print(f"criterion 4: {elapsed:.1f}s")
    assert elapsed < 300


@pytest.mark.criterion(5, "square-root range is tight")
def test_criterion_05_tightness():
    rep = verify_tightness(100, 2, 20)
    assert rep.status == "pass"
    copies = {o["graph"]: o["copies"] for o in rep.observations}
    assert copies["Tstar(100,2,19)"] == 950
    assert verify_tightness(144, 2, 24).status == "pass"
    # (64, 16) with r = 3: T(64,3) has parts 22, 21, 21
    assert verify_tightness(64, 3, 16).status == "pass"


def _ning_zhai(n):
    rep = verify_ning_zhai_exhaustive(n)
    obs = rep.observations[0]
    print(f"criterion 6: n={n} classes={obs['classes']} qualifying={obs['qualifying']} "
          f"tie-breaks={obs['exact_tie_breaks']} status={rep.status}")
    assert rep.status == "pass" and not failures(rep.checks)
    return rep


@pytest.mark.criterion(6, "exhaustive triangle statement, n = 5, 6, 7")
def test_criterion_06_ning_zhai():
    for n, classes in [(5, 34), (6, 156), (7, 1044)]:
        assert _ning_zhai(n).observations[0]["classes"] == classes


@pytest.mark.slow
@pytest.mark.criterion(6, "exhaustive triangle statement, n = 8 (--run-slow)")
def test_criterion_06_ning_zhai_n8():
    t0 = time.perf_counter()
    assert _ning_zhai(8).observations[0]["classes"] == 12346
    assert time.perf_counter() - t0 < 600


@pytest.mark.criterion(7, "copy counts match brute force; edge-deletion identity")
def test_criterion_07_counting_oracle():
    rng = random.Random(20240607)
    done = 0
    while done < 200:
        fn = rng.randint(2, 5)
        fg = random_graph(rng, fn, 0.6)
        if not (fg.m and fg.is_connected()):
            continue
        F = analyze_pattern(fg)
        g = random_graph(rng, rng.randint(2, 10), rng.uniform(0.3, 0.9))
        if not g.m:
            continue
        total = count_copies(F, g)
        assert total == brute_force_copies(F, g)
        e = rng.choice(g.edges())
        assert total - count_copies(F, g.remove_edges([e])) == count_copies_through_edge(F, g, e)
        done += 1


@pytest.mark.criterion(8, "supersaturation identities for Y, L and c(n,K3)")
def test_criterion_08_supersat_identities():
    for n in (40, 100):
        for q in range(1, 6):
            assert count_copies(K3, y_graph(n, 2, q)) == q * (n // 2)
            if q != 3:
                assert count_copies(K3, l_graph(n, 2, q)) == q * (n // 2)
    for n in range(6, 13):
        base = turan(n, 2)
        direct = min(count_copies(K3, base.graph.add_edges([e]))
                     for part in base.parts for e in combinations(part, 2))
        assert direct == c_n_F(n, K3) == n // 2


@pytest.mark.criterion(9, "perturbation bounds on the documented batteries")
def test_criterion_09_perturbation_bounds():
    cfg = load_config()
    first = [first_key_residual_i(build_instance(s, f"fk#{k}"))
             for k, s in enumerate(cfg["first_key"]["instances"])]
    assert all(c.n == 1000 for c in (build_instance(s) for s in cfg["first_key"]["instances"]))
    lowers = [move_one_check(sizes, i, j)[0]
              for sizes, i, j in move_one_battery(400, range(2, 11), (2, 3))]
    shift = verify_shift(config=cfg)
    print(f"criterion 9: first-key-i {sum(c.passed for c in first)}/{len(first)} pass; "
          f"move-one lower {sum(c.passed for c in lowers)}/{len(lowers)} pass; "
          f"shift {sum(c['verdict'] == PASS for c in shift.checks)}/{len(shift.checks)} pass")
    for c in shift.checks:
        if c["verdict"] != PASS:
            print(f"  shift witness sizes={c['params']['sizes']} i={c['params']['i']} "
                  f"j={c['params']['j']} lhs={c['lhs']} rhs={c['rhs']} margin={c['margin']:.3e}")
    assert all(c.passed for c in first)
    assert all(c.passed for c in lowers)
    assert all(c["verdict"] == PASS for c in shift.checks), \
        [(c["params"]["sizes"], c["margin"]) for c in shift.checks if c["verdict"] != PASS]


@pytest.mark.criterion(10, "covering numbers and the covering probe")
def test_criterion_10_covering():
    assert covering_number(K3, y_graph(40, 2, 3)) == 3
    assert covering_number(K3, turan(40, 2)) == 0
    rep = verify_covering(40, 2, 3, K3)
    probe = next(c for c in rep.checks if c["name"] == "copies-at-least-s-c")
    assert probe["verdict"] == PASS and probe["margin"] >= 0


VERIFY_ARGS = [
    ["--theorem", "min-max", "--n", "400", "--r", "2", "--q", "2"],
    ["--theorem", "tightness", "--n", "100", "--r", "2", "--q", "20"],
    ["--theorem", "ning-zhai", "--n", "6"],
    ["--theorem", "supersat", "--n", "100", "--r", "2", "--q", "3"],
    ["--theorem", "covering", "--n", "40", "--r", "2", "--s", "3"],
    ["--theorem", "t-variant", "--n", "100", "--r", "2", "--q", "5"],
    ["--theorem", "first-key"],
    ["--theorem", "move-one"],
    ["--theorem", "shift"],
    ["--theorem", "l-vs-t", "--n", "1000", "--r", "2", "--q", "3"],
]


@pytest.mark.criterion(11, "verify reports are byte-identical across runs")
def test_criterion_11_determinism():
    procs = []
    for args in VERIFY_ARGS:
        argv = [sys.executable, "-m", "specsat", "verify", *args, "--no-timing"]
        procs.append([subprocess.Popen(argv, stdout=subprocess.PIPE, stderr=subprocess.PIPE)
                      for _ in range(2)])
    for args, pair in zip(VERIFY_ARGS, procs):
        outs = [p.communicate()[0] for p in pair]
        assert outs[0] and outs[0] == outs[1], args[1]
        assert {p.returncode for p in pair} <= {0, 1}
