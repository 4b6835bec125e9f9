import json
import random

import numpy as np
import pytest

from specsat.counting import named_pattern
from specsat.errors import InvalidArgument, UnsupportedSize
from specsat.graph import complete_multipartite
from specsat.harness import (CONFIG_ENV, build_instance, default_config, load_config,
                             move_one_battery, spectral_radius_at_least_sqrt, verify_covering,
                             verify_first_key, verify_l_vs_t, verify_min_max, verify_move_one,
                             verify_ning_zhai_exhaustive, verify_supersat_family,
                             verify_t_variant, verify_tightness)

from conftest import random_graph

K3 = named_pattern("K3")


def verdicts(rep):
    return {c["verdict"] for c in rep.checks}


def test_default_config_is_versioned():
    cfg = default_config()
    assert cfg["version"] == 1 and cfg["tol"] == 1e-10


def test_config_override(tmp_path, monkeypatch):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"supersat": {"battery": 3}}))
    cfg = load_config(str(p))
    assert cfg["supersat"]["battery"] == 3
    assert cfg["supersat"]["max_cross"] == default_config()["supersat"]["max_cross"]
    monkeypatch.setenv(CONFIG_ENV, str(p))
    assert load_config()["supersat"]["battery"] == 3


def test_report_schema():
    rep = verify_min_max(400, 2, 2)
    body = rep.to_json()
    assert set(body) >= {"theorem", "params", "status", "checks", "witnesses", "wallclock_ms"}
    for c in body["checks"]:
        assert set(c) >= {"name", "lhs", "rhs", "verdict", "margin"}
    assert "wallclock_ms" not in rep.to_json(timing=False)


def test_min_max_400_2_2_ordering():
    rep = verify_min_max(400, 2, 2)
    assert rep.status == "pass" and rep.params["classes"] == 3
    roles = {o["role"]: o["lambda"] for o in rep.observations if o.get("role")}
    others = [o["lambda"] for o in rep.observations if o.get("role") not in ("Y", "L")]
    assert roles["Y"] < min(others) and max(others) < roles["L"]


def test_min_max_outside_hypothesis_is_report():
    rep = verify_min_max(12, 2, 1)
    assert rep.status == "report" and rep.observations


def test_tightness():
    rep = verify_tightness(100, 2, 20)
    assert rep.status == "pass"
    obs = {o["graph"]: o["copies"] for o in rep.observations}
    assert sorted(obs.values()) == [950, 1000]
    assert verify_tightness(100, 2, 19).status == "report"
    with pytest.raises(InvalidArgument):
        verify_tightness(64, 3, 16)


def test_exact_sqrt_test_matches_numpy():
    rng = random.Random(4)
    for _ in range(100):
        g = random_graph(rng, rng.randint(2, 8))
        m = rng.randint(1, 20)
        lam = max(np.linalg.eigvalsh(g.to_numpy())) if g.n else 0
        if abs(lam * lam - m) > 1e-9:
            assert spectral_radius_at_least_sqrt(g, m) == (lam * lam > m)
    # exact ties: K_{a,b} has lambda = sqrt(ab)
    assert spectral_radius_at_least_sqrt(complete_multipartite([3, 2]), 6)
    assert not spectral_radius_at_least_sqrt(complete_multipartite([3, 2]), 7)


def test_ning_zhai_small():
    for n, classes in [(5, 34), (6, 156)]:
        rep = verify_ning_zhai_exhaustive(n)
        assert rep.status == "pass"
        assert rep.observations[0]["classes"] == classes
    with pytest.raises(UnsupportedSize):
        verify_ning_zhai_exhaustive(9)


def test_supersat_examples():
    rep = verify_supersat_family(100, 2, 3, K3)
    assert FAIL_FREE(rep)
    copies = [o["copies"] for o in rep.observations if "copies" in o]
    assert min(copies) == 150
    rep = verify_supersat_family(100, 2, 4, K3)
    assert FAIL_FREE(rep)
    rep = verify_supersat_family(60, 3, 2, named_pattern("K4"))
    assert FAIL_FREE(rep)
    assert min(o["copies"] for o in rep.observations if "copies" in o) >= 800


def FAIL_FREE(rep):
    return rep.status != "fail" and "fail" not in {c["verdict"] for c in rep.checks if not c["probe"]}


def test_covering_examples():
    rep = verify_covering(40, 2, 3, K3)
    assert rep.status == "pass"
    y = next(o for o in rep.observations if o["graph"].startswith("Y"))
    assert (y["tau"], y["copies"]) == (3, 60)
    assert verify_covering(40, 2, 1, K3).status == "pass"
    assert verify_covering(30, 2, 2, named_pattern("C5")).status != "fail"


def test_t_variant_examples():
    for n, q, copies in [(100, 5, 250), (99, 4, 196), (100, 3, 150)]:
        rep = verify_t_variant(n, 2, q, K3)
        assert rep.status == "pass"
        t = next(o for o in rep.observations if o["graph"].startswith("Tstar"))
        assert t["copies"] == copies


def test_battery_builders():
    pg = build_instance({"sizes": [10, 10], "class": [[0, "star", 3]], "cross": [[0, 1, 2]]})
    assert (pg.alpha1, pg.alpha2) == (3, 2)
    with pytest.raises(InvalidArgument):
        build_instance({"sizes": [10, 10], "class": [[0, "triangle", 2]]})
    bat = move_one_battery(400, range(2, 11), [2, 3])
    assert all(s[i] - s[j] in range(2, 11) and sum(s) == 400 for s, i, j in bat)
    assert len([b for b in bat if len(b[0]) == 2]) == 5


def test_bound_campaigns_pass():
    rep = verify_first_key()
    assert rep.status != "fail"
    assert {c["verdict"] for c in rep.checks if c["name"] == "first-key-i"} == {"pass"}
    rep = verify_move_one()
    assert rep.status == "pass"
    assert verify_l_vs_t(400, 2, 2).status in ("pass", "report")


def test_determinism_and_jobs():
    a = verify_min_max(400, 2, 3).dumps(timing=False)
    b = verify_min_max(400, 2, 3, jobs=2).dumps(timing=False)
    assert a == b
